"""Separate pooling of tastes and beliefs for subjective expected utility on finite states.

Tastes live on a finite consequence set and are aggregated with the
minimum-oscillation weights of :mod:`pareto_agg.aggregation`. Beliefs are
probability vectors over states; they are pooled linearly, ``sum(lam_i P_i)``,
with ``lam`` chosen to minimize the positive-part mass of the pooled belief
minus ``P0``. Because the residual ``r = P0 - sum(lam_i P_i)`` sums to zero,
its total variation ``sum|r|`` is twice that mass.

The likelihood floor ``P0(E) >= min_i P_i(E) - eps2 / 2`` is checked by
enumerating every event. On a finite state space it is implied by a pooling
residual with ``tv_norm <= eps2`` but does not imply one: the pooling value
equals the floor taken over fuzzy events ``q in [0, 1]^S``
(:func:`relaxed_floor_level`), which can exceed the floor over crisp events.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .aggregation import min_oscillation
from .core import (NORMALIZE_TOL, VERDICT_TOL, AggregationResult, DimensionError,
                   ParetoAggError, PrizeSpace, Problem, SolverError, UtilityVector)
from .lp import (EQ, GE, LE, OPTIMAL, LinearProgram, SolveStats, SolverOptions,
                 solve, solve_exact)

#: Largest state count for which all ``2**|S|`` events are enumerated.
MAX_ENUM_STATES = 24
FLOOR_TOL = 1e-10
_CHUNK = 1 << 16


class EnumerationCapExceeded(ParetoAggError, ValueError):
    """Too many states to enumerate every event."""


@dataclass(frozen=True)
class Belief:
    """A probability mass function over states.

    Normalized like :class:`~pareto_agg.core.Lottery`: sums within ``1e-9``
    of one are rescaled, tiny negative entries are clipped.
    """

    p: NDArray[np.float64]

    def __post_init__(self):
        p = np.array(self.p, dtype=float).reshape(-1)
        if p.size == 0 or not np.all(np.isfinite(p)):
            raise ValueError("belief must be a finite, non-empty vector")
        if np.any(p < -1e-12):
            raise ValueError("belief has negative probabilities")
        p = np.maximum(p, 0.0)
        total = p.sum()
        if abs(total - 1.0) > NORMALIZE_TOL:
            raise ValueError(f"belief sums to {total!r}, not 1")
        p = p / total
        p.flags.writeable = False
        object.__setattr__(self, "p", p)

    def __array__(self, dtype=None, copy=None):
        return self.p if dtype is None else self.p.astype(dtype)

    def __len__(self) -> int:
        return self.p.size

    def event(self, mask: int) -> float:
        """Probability of the event whose members are the set bits of ``mask``."""
        return float(sum(self.p[s] for s in range(self.p.size) if mask >> s & 1))


def _belief(b) -> Belief:
    return b if isinstance(b, Belief) else Belief(b)


@dataclass(frozen=True)
class SeuProblem:
    """Tastes over consequences and beliefs over states for the DM and N individuals."""

    consequences: PrizeSpace
    states: tuple[str, ...]
    v0: UtilityVector
    vs: tuple[UtilityVector, ...]
    P0: Belief
    Ps: tuple[Belief, ...]

    def __post_init__(self):
        states = tuple(self.states)
        if not states or len(set(states)) != len(states):
            raise ValueError("states must be a non-empty list of distinct labels")
        P0 = _belief(self.P0)
        Ps = tuple(_belief(b) for b in self.Ps)
        if not Ps:
            raise ValueError("an SEU problem needs at least one individual belief")
        for name, b in [("dm", P0)] + [(f"individual {i + 1}", b) for i, b in enumerate(Ps)]:
            if len(b) != len(states):
                raise DimensionError(f"{name} belief has {len(b)} entries for {len(states)} states")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "P0", P0)
        object.__setattr__(self, "Ps", Ps)
        # Tastes are validated by Problem.
        problem = Problem(self.consequences, self.v0, self.vs)
        if problem.n_individuals != len(Ps):
            raise DimensionError(
                f"{problem.n_individuals} tastes but {len(Ps)} beliefs for individuals")
        object.__setattr__(self, "v0", problem.v0)
        object.__setattr__(self, "vs", problem.vs)

    @classmethod
    def from_arrays(cls, v0: ArrayLike, vs: Sequence[ArrayLike], P0: ArrayLike,
                    Ps: Sequence[ArrayLike], consequences: Sequence[str] | None = None,
                    states: Sequence[str] | None = None) -> "SeuProblem":
        v0 = UtilityVector(v0)
        cons = (PrizeSpace(tuple(consequences)) if consequences is not None
                else PrizeSpace.numbered(len(v0), "c"))
        P0 = Belief(P0)
        states = tuple(states) if states is not None else tuple(f"s{i + 1}" for i in range(len(P0)))
        return cls(cons, states, v0, tuple(UtilityVector(v) for v in vs), P0,
                   tuple(Belief(b) for b in Ps))

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_individuals(self) -> int:
        return len(self.vs)

    def lottery_problem(self) -> Problem:
        """The taste profile as a problem on the consequence simplex."""
        return Problem(self.consequences, self.v0, self.vs)


@dataclass(frozen=True)
class SignedResidual:
    """``r = P0 - sum(lam_i P_i)`` state by state with its total variation ``sum|r|``."""

    r: NDArray
    tv_norm: Any

    @classmethod
    def from_vector(cls, r: ArrayLike) -> "SignedResidual":
        r = np.asarray(r)
        if r.dtype != object:
            r = r.astype(float)
        return cls(r, sum(abs(x) for x in r) if r.dtype == object else float(np.abs(r).sum()))

    @property
    def positive_mass(self):
        """``R+(S)``: the largest value of ``r`` on an event."""
        return sum(x for x in self.r if x > 0)

    @property
    def negative_mass(self):
        """``R-(S)``: minus the smallest value of ``r`` on an event."""
        return -sum(x for x in self.r if x < 0)


@dataclass(frozen=True)
class TasteDecomposition:
    """Nonnegative taste weights with the centered sup-norm residual.

    ``holds`` reports ``sup_residual <= epsilon1 / 2 + tol``.
    """

    result: AggregationResult
    epsilon1: Any
    holds: bool

    @property
    def oscillation(self):
        return self.result.oscillation

    @property
    def sup_residual(self):
        return self.result.sup_residual

    @property
    def weights(self):
        return self.result.weights


@dataclass(frozen=True)
class FloorCheck:
    """Outcome of the likelihood floor over all events.

    ``worst_event`` holds the state indices of the event minimizing
    ``P0(E) - min_i P_i(E)`` (the first in bitmask order among ties) and
    ``worst_slack`` is that minimum.
    """

    holds: bool
    epsilon2: float
    worst_event: tuple[int, ...]
    worst_slack: float
    n_events: int

    def as_dict(self, states: Sequence[str] | None = None) -> dict:
        event = ([states[s] for s in self.worst_event] if states is not None
                 else list(self.worst_event))
        return {
            "verdict": "holds" if self.holds else "fails",
            "epsilon2": self.epsilon2,
            "worst_event": event,
            "worst_slack": self.worst_slack,
            "events_checked": self.n_events,
        }


def taste_decompose(problem: SeuProblem, epsilon1, *, exact: bool = False,
                    tol: float = VERDICT_TOL, options: SolverOptions | None = None,
                    stats: SolveStats | None = None) -> TasteDecomposition:
    """Nonnegative weights on individual tastes closest in sup norm to the DM's taste."""
    if not epsilon1 >= 0:
        raise ValueError("epsilon1 must be >= 0")
    res = min_oscillation(problem.lottery_problem(), "nonneg", exact=exact,
                          options=options, stats=stats)
    if exact:
        holds = res.sup_residual <= Fraction(epsilon1) / 2
    else:
        holds = float(res.sup_residual) <= float(epsilon1) / 2 + tol
    return TasteDecomposition(res, epsilon1, bool(holds))


def _belief_matrix(P0, Ps, exact: bool):
    P0 = _belief(P0)
    Ps = [_belief(b) for b in Ps]
    if not Ps:
        raise ValueError("need at least one individual belief")
    S = len(P0)
    for i, b in enumerate(Ps):
        if len(b) != S:
            raise DimensionError(f"belief {i + 1} has {len(b)} states, expected {S}")
    P = np.vstack([b.p for b in Ps])
    if exact:
        p0 = np.array([Fraction(float(x)) for x in P0.p], dtype=object)
        P = np.array([[Fraction(float(x)) for x in row] for row in P], dtype=object)
        return p0, P
    return P0.p, P


def _solve(lp, exact, options, stats):
    sol = solve_exact(lp, stats=stats) if exact else solve(lp, options, stats=stats)
    if sol.status != OPTIMAL:
        raise SolverError(f"pooling LP ended with status {sol.status!r}: {sol.message}")
    return sol


def belief_pool(P0, Ps, *, exact: bool = False, options: SolverOptions | None = None,
                stats: SolveStats | None = None) -> tuple[NDArray, SignedResidual]:
    """Linear pool ``sum(lam_i P_i)`` closest to ``P0`` in total variation.

    Solves ``min sum_s max(0, (sum(lam_i P_i) - P0)(s))`` over the simplex as
    an LP in ``lam`` and one auxiliary variable per state. Returns ``lam`` and
    the residual ``P0 - sum(lam_i P_i)``, whose ``tv_norm`` is twice the
    optimal positive-part mass.
    """
    p0, P = _belief_matrix(P0, Ps, exact)
    n, S = P.shape
    rows, senses, rhs = [], [], []
    for s in range(S):
        row = [-P[i][s] for i in range(n)] + [0] * S
        row[n + s] = 1
        rows.append(row)
        senses.append(GE)
        rhs.append(-p0[s])
    rows.append([1] * n + [0] * S)
    senses.append(EQ)
    rhs.append(1)
    c = [0] * n + [1] * S
    sol = _solve(LinearProgram(c, rows, senses, rhs), exact, options, stats)
    lam = sol.x[:n]
    if exact:
        r = p0 - lam.dot(P)
    else:
        lam = np.where(lam >= -1e-12, np.maximum(lam.astype(float), 0.0), lam)
        lam = lam / lam.sum()
        r = p0 - lam @ P
    return lam, SignedResidual.from_vector(r)


def event_tv(r) -> Any:
    """Total variation ``R+(S) + R-(S)`` of a signed measure on finitely many states."""
    vec = r.r if isinstance(r, SignedResidual) else np.asarray(r)
    if vec.dtype == object:
        return sum(max(x, 0) for x in vec) + sum(max(-x, 0) for x in vec)
    vec = vec.astype(float)
    return float(np.maximum(vec, 0).sum() + np.maximum(-vec, 0).sum())


def _event_scan(p0: NDArray, P: NDArray):
    """Minimum of ``P0(E) - min_i P_i(E)`` over all events and its first minimizer."""
    S = p0.size
    if S > MAX_ENUM_STATES:
        raise EnumerationCapExceeded(
            f"{S} states exceed the enumeration cap of {MAX_ENUM_STATES}")
    total = 1 << S
    bits = np.arange(S, dtype=np.int64)
    best, best_mask = np.inf, 0
    for start in range(0, total, _CHUNK):
        masks = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        ind = ((masks[:, None] >> bits) & 1).astype(float)
        slack = ind @ p0 - (ind @ P.T).min(axis=1)
        j = int(np.argmin(slack))
        if slack[j] < best:
            best, best_mask = float(slack[j]), int(masks[j])
    return best, best_mask, total


def likelihood_floor_check(P0, Ps, epsilon2: float) -> FloorCheck:
    """Does ``P0(E) >= min_i P_i(E) - epsilon2 / 2`` hold for every event ``E``?

    Every one of the ``2**|S|`` events is checked; more than
    ``MAX_ENUM_STATES`` states raises :class:`EnumerationCapExceeded`.
    """
    if not 0 <= epsilon2 <= 1:
        raise ValueError("epsilon2 must lie in [0, 1]")
    p0, P = _belief_matrix(P0, Ps, False)
    slack, mask, total = _event_scan(p0, P)
    event = tuple(s for s in range(p0.size) if mask >> s & 1)
    holds = slack >= -float(epsilon2) / 2 - FLOOR_TOL
    return FloorCheck(bool(holds), float(epsilon2), event, slack, total)


def floor_level(P0, Ps) -> float:
    """``max(0, max_E min_i P_i(E) - P0(E))``: half the smallest passing ``epsilon2``."""
    p0, P = _belief_matrix(P0, Ps, False)
    slack, _, _ = _event_scan(p0, P)
    return max(0.0, -slack)


def relaxed_floor_level(P0, Ps, *, exact: bool = False,
                        options: SolverOptions | None = None,
                        stats: SolveStats | None = None):
    """The floor level over fuzzy events: ``max_q min_i (P_i - P0) . q`` with ``q in [0, 1]^S``.

    By LP duality this equals the optimal positive-part mass of
    :func:`belief_pool`, so it is half the pooled ``tv_norm``. It is at least
    :func:`floor_level`, with equality whenever the optimum sits at a 0/1 ``q``.
    """
    p0, P = _belief_matrix(P0, Ps, exact)
    n, S = P.shape
    rows, senses, rhs = [], [], []
    for i in range(n):
        rows.append([p0[s] - P[i][s] for s in range(S)] + [1])
        senses.append(LE)
        rhs.append(0)
    c = [0] * S + [-1]
    lower = [0.0] * S + [-np.inf]
    upper = [1.0] * S + [np.inf]
    sol = _solve(LinearProgram(c, rows, senses, rhs, lower=lower, upper=upper),
                 exact, options, stats)
    value = -sol.objective
    if exact:
        return value
    value = float(value)
    return value if value > 0 else 0.0
