"""Brute-force and exact-rational cross-checks for the LP layer.

Nothing here calls the simplex solver except :func:`sandwich` and
:func:`exact_recheck`, which compare against it.

* :func:`brute_gap` enumerates lottery pairs on the grid of probability
  vectors with entries in multiples of ``1/k``. Every grid pair is feasible
  for the gap LP, so the result is a lower bound on the semistrong gap.
* :func:`brute_min_oscillation` scans nonnegative weights on a grid
  ``{0, h, 2h, ...}^N`` inside ``[0, B]^N``. Every grid point is feasible,
  so the result is an upper bound on the minimum oscillation.

Refining a grid along a nested sequence (``k -> 2k``, ``h -> h/2``) can only
tighten these bounds; unrelated grids carry no such guarantee.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Any

import numpy as np
from numpy.typing import NDArray

from .aggregation import DualityMismatch, min_oscillation, positive_weight_margin
from .audit import indifference_gap, semistrong_gap
from .core import DUALITY_TOL, ParetoAggError, Problem, oscillation
from .lp import SolveStats

MAX_GRID_POINTS = 10**6
_PAIR_BLOCK = 1 << 22


class GridTooLarge(ParetoAggError, ValueError):
    """A lottery or weight grid would exceed ``MAX_GRID_POINTS``."""


@dataclass(frozen=True)
class GridSpec:
    """Lottery resolution ``k`` plus the weight box ``[0, B]^N`` and step ``h``.

    ``weight_box=None`` selects :func:`default_weight_box` per problem.
    """

    k: int = 20
    weight_box: float | None = None
    step: float = 0.05

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError("grid resolution k must be an integer >= 1")
        if self.weight_box is not None and not self.weight_box > 0:
            raise ValueError("weight box bound must be > 0")
        if not self.step > 0:
            raise ValueError("weight step must be > 0")
        object.__setattr__(self, "k", int(self.k))


def lottery_grid_size(m: int, k: int) -> int:
    return comb(k + m - 1, m - 1)


def lottery_grid(m: int, k: int) -> NDArray[np.int64]:
    """All count vectors of length ``m`` with nonnegative entries summing to ``k``.

    Row ``c`` stands for the lottery ``c / k``; rows come in lexicographic
    order.
    """
    size = lottery_grid_size(m, k)
    if size > MAX_GRID_POINTS:
        raise GridTooLarge(f"lottery grid with m={m}, k={k} has {size} points")
    if m == 1:
        return np.array([[k]], dtype=np.int64)
    out = []
    for first in range(k, -1, -1):
        rest = lottery_grid(m - 1, k - first)
        out.append(np.hstack([np.full((len(rest), 1), first, dtype=np.int64), rest]))
    return np.vstack(out)


def brute_gap(problem: Problem, spec: GridSpec, *, return_pair: bool = False):
    """Largest ``u0(y) - u0(x)`` over grid pairs where every ``u_i(x) >= u_i(y)``.

    Utilities are compared on the integer count vectors, so for data whose
    binary expansions are short (dyadic rationals) the antecedent is tested
    with no rounding at all. With ``return_pair=True`` the grid pair
    ``(x, y)`` attaining the value is returned as well.
    """
    k = spec.k
    C = lottery_grid(problem.n_prizes, k).astype(float)
    U0 = C @ problem.dm
    Ui = C @ problem.matrix.T
    n = len(C)
    block = max(1, _PAIR_BLOCK // max(1, n * problem.n_individuals))
    best, bx, by = 0.0, 0, 0
    for start in range(0, n, block):
        xs = slice(start, min(start + block, n))
        ok = np.all(Ui[xs, None, :] >= Ui[None, :, :], axis=2)
        gain = np.where(ok, U0[None, :] - U0[xs, None], -np.inf)
        flat = int(np.argmax(gain))
        i, j = divmod(flat, n)
        if gain[i, j] > best:
            best, bx, by = float(gain[i, j]), start + i, j
    value = best / k
    if return_pair:
        return value, (C[bx] / k, C[by] / k)
    return value


def default_weight_box(problem: Problem) -> float:
    """Heuristic bound ``1 + max|v0| * M / max_i osc(v_i)`` over non-constant ``v_i``.

    Optimal weights are bounded, but no closed form is known; widen the box
    when the search touches its edge.
    """
    oscs = [oscillation(v) for v in problem.vs]
    top = max((o for o in oscs if o > 0), default=0.0)
    if top == 0:
        return 1.0
    return 1.0 + float(np.max(np.abs(problem.dm))) * problem.n_prizes / top


def _axis(box: float, step: float) -> NDArray[np.float64]:
    count = int(np.floor(box / step + 1e-9)) + 1
    return np.arange(count) * step


def weight_grid_size(problem: Problem, spec: GridSpec) -> int:
    box = spec.weight_box if spec.weight_box is not None else default_weight_box(problem)
    return len(_axis(box, spec.step)) ** problem.n_individuals


def brute_min_oscillation(problem: Problem, spec: GridSpec, *, return_weights: bool = False):
    """Smallest ``osc(v0 - sum(a_i v_i))`` over grid weights ``a`` in ``[0, B]^N``."""
    box = spec.weight_box if spec.weight_box is not None else default_weight_box(problem)
    axis = _axis(box, spec.step)
    n = problem.n_individuals
    total = len(axis) ** n
    if total > MAX_GRID_POINTS:
        raise GridTooLarge(f"weight grid has {total} points (box {box}, step {spec.step})")
    V = problem.matrix
    best, best_idx = np.inf, 0
    block = 1 << 16
    for start in range(0, total, block):
        idx = np.arange(start, min(start + block, total))
        digits = np.stack(np.unravel_index(idx, (len(axis),) * n), axis=1)
        A = axis[digits]
        E = problem.dm[None, :] - A @ V
        osc = E.max(axis=1) - E.min(axis=1)
        j = int(np.argmin(osc))
        if osc[j] < best:
            best, best_idx = float(osc[j]), int(idx[j])
    if return_weights:
        digits = np.unravel_index(best_idx, (len(axis),) * n)
        return best, axis[np.array(digits)]
    return best


@dataclass(frozen=True)
class SandwichReport:
    """``brute_gap <= delta* = omega* <= brute_min_oscillation`` on one instance.

    ``gap_constant`` is ``k * (delta* - brute_gap)``, the empirical constant
    ``C`` in the convergence rate ``C / k``.
    """

    k: int
    weight_box: float
    step: float
    brute_gap: float
    delta_star: float
    omega_star: float
    brute_oscillation: float
    gap_constant: float
    consistent: bool
    stats: SolveStats = field(default_factory=SolveStats)

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "weight_box": self.weight_box,
            "weight_step": self.step,
            "brute_gap": self.brute_gap,
            "delta_star": self.delta_star,
            "omega_star": self.omega_star,
            "brute_min_oscillation": self.brute_oscillation,
            "gap_constant": self.gap_constant,
            "brackets": self.consistent,
            "solves": self.stats.solves,
            "iterations": self.stats.iterations,
        }


def sandwich(problem: Problem, spec: GridSpec, *, exact: bool = False,
             tol: float = 1e-9) -> SandwichReport:
    """Run both brute searches and both LPs and test the chain of inequalities."""
    stats = SolveStats()
    delta, _ = semistrong_gap(problem, exact=exact, stats=stats)
    omega = min_oscillation(problem, "nonneg", exact=exact, stats=stats).oscillation
    lo = brute_gap(problem, spec)
    hi = brute_min_oscillation(problem, spec)
    box = spec.weight_box if spec.weight_box is not None else default_weight_box(problem)
    delta, omega = float(delta), float(omega)
    ok = lo <= delta + tol and abs(delta - omega) <= DUALITY_TOL and omega <= hi + tol
    return SandwichReport(spec.k, box, spec.step, lo, delta, omega, hi,
                          spec.k * (delta - lo), bool(ok), stats)


@dataclass(frozen=True)
class ExactReport:
    """Exact-rational values of every gap and optimum, with float-mode differences."""

    delta_star: Fraction
    delta_ind: Fraction
    omega_nonneg: Fraction
    omega_free: Fraction
    mu_star: Any
    epsilon: Any
    float_deviation: float
    stats: SolveStats = field(default_factory=SolveStats)

    def as_dict(self) -> dict:
        def fmt(v):
            if v is None:
                return None
            return {"value": float(v), "exact": str(v)}
        return {
            "delta_star": fmt(self.delta_star),
            "delta_ind": fmt(self.delta_ind),
            "omega_nonneg": fmt(self.omega_nonneg),
            "omega_free": fmt(self.omega_free),
            "mu_star": fmt(self.mu_star),
            "epsilon": None if self.epsilon is None else float(self.epsilon),
            "float_deviation": self.float_deviation,
            "solves": self.stats.solves,
            "iterations": self.stats.iterations,
        }


def exact_recheck(problem: Problem, epsilon=None) -> ExactReport:
    """Recompute every LP value in rational arithmetic and demand exact duality.

    Inputs are read as the exact rationals their floats represent. Raises
    :class:`DualityMismatch` unless ``delta* == omega*(nonneg)`` and
    ``delta*_ind == omega*(free)`` hold exactly. ``mu_star`` is computed when
    ``epsilon`` is given (or stored on the problem).
    """
    if epsilon is None:
        epsilon = problem.epsilon
    stats = SolveStats()
    d, _ = semistrong_gap(problem, exact=True, stats=stats)
    di, _ = indifference_gap(problem, exact=True, stats=stats)
    on = min_oscillation(problem, "nonneg", exact=True, stats=stats).oscillation
    of = min_oscillation(problem, "free", exact=True, stats=stats).oscillation
    if d != on:
        raise DualityMismatch(f"exact semistrong gap {d} != nonneg oscillation {on}")
    if di != of:
        raise DualityMismatch(f"exact indifference gap {di} != free oscillation {of}")
    mu = None
    if epsilon is not None:
        mu = positive_weight_margin(problem, Fraction(epsilon), exact=True, stats=stats).mu_star

    fl = [semistrong_gap(problem)[0], indifference_gap(problem)[0],
          min_oscillation(problem, "nonneg").oscillation,
          min_oscillation(problem, "free").oscillation]
    dev = max(abs(float(a) - float(b)) for a, b in zip(fl, (d, di, on, of)))
    if mu is not None:
        mf = positive_weight_margin(problem, float(epsilon)).mu_star
        if np.isfinite(float(mu)) or np.isfinite(mf):
            dev = max(dev, abs(float(mf) - float(mu)))
    return ExactReport(d, di, on, of, mu, epsilon, float(dev), stats)
