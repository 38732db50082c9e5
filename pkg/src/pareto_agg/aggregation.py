"""Minimum-oscillation Pareto weights, centering, and the gap/oscillation duality.

For weights ``a`` the residual is ``e_a = v0 - sum(a_i v_i)``. Its smallest
oscillation over ``a >= 0`` equals the semistrong gap, and over free ``a`` it
equals the indifference gap; :func:`duality_certificate` checks both numbers
against each other. Centering ``e`` with ``b = (max e + min e) / 2`` turns an
oscillation bound ``omega`` into the sup-norm bound ``omega / 2`` on
``v0 - (sum(a_i v_i) + b)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .audit import (INDIFFERENCE, SEMISTRONG, ViolationCertificate, _data,
                    indifference_gap, semistrong_gap)
from .core import (DUALITY_TOL, MARGIN_TOL, AggregationResult, DimensionError,
                   ParetoAggError, Problem, SolverError, Weights, oscillation)
from .lp import (GE, INFEASIBLE, LE, OPTIMAL, LinearProgram, SolveStats,
                 SolverOptions, solve, solve_exact)


class DualityMismatch(ParetoAggError):
    """The Pareto gap and the minimum oscillation disagree: a solver bug."""


@dataclass(frozen=True)
class ResidualFunction:
    """``e = v0 - sum(a_i v_i)`` prize by prize, with its oscillation."""

    e: NDArray
    omega: Any

    @classmethod
    def from_weights(cls, problem: Problem, a: ArrayLike) -> "ResidualFunction":
        a = np.asarray(a)
        if a.shape != (problem.n_individuals,):
            raise DimensionError(f"expected {problem.n_individuals} weights, got {a.shape}")
        if a.dtype == object:
            v0, V = _data(problem, exact=True)
            e = v0 - a.dot(V)
            return cls(e, max(e) - min(e))
        e = problem.dm - a @ problem.matrix
        return cls(e, oscillation(e))

    def reconstruct(self, problem: Problem, a: ArrayLike) -> NDArray:
        return np.asarray(a) @ problem.matrix + self.e


@dataclass(frozen=True)
class MarginResult:
    """Largest uniform lower bound ``mu`` on weights keeping ``omega(e) <= epsilon``.

    ``mu_star`` is capped at 1 and is ``-inf`` when even nonnegative weights
    cannot reach the bound. ``trivial`` flags ``epsilon >= omega(v0)``, where
    the zero weight vector already qualifies.
    """

    mu_star: Any
    weights: Weights | None
    status: str
    epsilon: Any
    trivial: bool
    a: NDArray | None = None
    iterations: int = 0

    @property
    def positive(self) -> bool:
        return self.status == OPTIMAL and self.mu_star > MARGIN_TOL


@dataclass(frozen=True)
class DualityReport:
    delta_star: Any
    omega_star: Any
    weights: Weights
    certificate: ViolationCertificate
    gap_mismatch: Any
    regime: str
    aggregation: AggregationResult

    def as_dict(self) -> dict:
        return {
            "regime": self.regime,
            "delta_star": float(self.delta_star),
            "omega_star": float(self.omega_star),
            "gap_mismatch": float(self.gap_mismatch),
            "weights": self.weights.a.tolist(),
            "intercept": self.weights.b,
            "certificate": self.certificate.as_dict(),
        }


def center(a: ArrayLike, problem: Problem, *, regime: str = "free") -> tuple[Weights, Any]:
    """Intercept ``b`` putting ``v0 - sum(a_i v_i)`` symmetric about zero.

    Returns the weights with that intercept and ``max|v0 - w|``, which equals
    half the oscillation of the residual.
    """
    res = ResidualFunction.from_weights(problem, a)
    e = res.e
    hi, lo = max(e), min(e)
    b = (hi + lo) / 2
    r_sup = max(hi - b, b - lo)
    if not isinstance(r_sup, Fraction):
        b, r_sup = float(b), float(r_sup)
    af = np.array([float(v) for v in np.asarray(a).reshape(-1)])
    if regime == "nonneg":
        af = np.maximum(af, 0.0)
    return Weights(af, float(b), regime), r_sup


def _all_constant(problem: Problem) -> bool:
    return all(oscillation(v) == 0.0 for v in problem.vs)


def _result_from_a(problem: Problem, a, regime: str, iterations: int) -> AggregationResult:
    res = ResidualFunction.from_weights(problem, a)
    weights, r_sup = center(a, problem, regime=regime)
    return AggregationResult(weights, res.omega, r_sup, OPTIMAL, res.e, iterations)


def _oscillation_rows(v0, V, n_extra: int):
    """Rows ``sum(a_i V[i,o]) + t_hi >= v0[o]`` and ``sum(a_i V[i,o]) + t_lo <= v0[o]``.

    Variables are ordered ``a (N), t_lo, t_hi`` followed by ``n_extra`` more.
    """
    n, m = len(V), len(v0)
    rows, senses, rhs = [], [], []
    pad = [0] * n_extra
    for o in range(m):
        col = [V[i][o] for i in range(n)]
        rows.append(col + [0, 1] + pad)
        senses.append(GE)
        rhs.append(v0[o])
        rows.append(col + [1, 0] + pad)
        senses.append(LE)
        rhs.append(v0[o])
    return rows, senses, rhs


def _solve(lp, exact, options, stats):
    sol = solve_exact(lp, stats=stats) if exact else solve(lp, options, stats=stats)
    if sol.status not in (OPTIMAL, INFEASIBLE):
        raise SolverError(f"weight LP ended with status {sol.status!r}: {sol.message}")
    return sol


def min_oscillation(problem: Problem, regime: str = "nonneg", *, exact: bool = False,
                    options: SolverOptions | None = None,
                    stats: SolveStats | None = None) -> AggregationResult:
    """Weights minimizing ``omega(v0 - sum(a_i v_i))``.

    ``regime="nonneg"`` restricts to ``a >= 0``; ``regime="free"`` allows any
    sign. The returned weights are a vertex optimum of the LP; optimal weights
    are not unique in general. With ``exact=True`` the oscillation and the
    residual are exact fractions.
    """
    if regime not in ("nonneg", "free"):
        raise ValueError("min_oscillation regime must be 'nonneg' or 'free'")
    n = problem.n_individuals
    if _all_constant(problem):
        zero = np.array([Fraction(0)] * n, dtype=object) if exact else np.zeros(n)
        return _result_from_a(problem, zero, regime, 0)

    v0, V = _data(problem, exact)
    rows, senses, rhs = _oscillation_rows(v0, V, 0)
    c = [0] * n + [-1, 1]
    lower = [0.0 if regime == "nonneg" else -np.inf] * n + [-np.inf, -np.inf]
    lp = LinearProgram(c, rows, senses, rhs, lower=lower)
    local = SolveStats()
    sol = _solve(lp, exact, options, local)
    if stats is not None:
        stats.solves += local.solves
        stats.iterations += local.iterations
    if sol.status != OPTIMAL:
        raise SolverError("oscillation LP is always feasible and bounded")
    a = sol.x[:n]
    if not exact and regime == "nonneg":
        a = np.maximum(a.astype(float), 0.0)
    return _result_from_a(problem, a, regime, local.iterations)


def positive_weight_margin(problem: Problem, epsilon, *, exact: bool = False,
                           options: SolverOptions | None = None,
                           stats: SolveStats | None = None) -> MarginResult:
    """Maximize ``mu`` subject to ``a_i >= mu``, ``omega(e_a) <= epsilon``, ``mu <= 1``.

    Strictly positive weights within oscillation ``epsilon`` exist iff the
    optimum is positive.
    """
    if not epsilon >= 0:
        raise ValueError("epsilon must be >= 0")
    n = problem.n_individuals
    trivial = epsilon >= oscillation(problem.dm)
    v0, V = _data(problem, exact)
    eps = Fraction(epsilon) if exact else float(epsilon)
    rows, senses, rhs = _oscillation_rows(v0, V, 1)
    for i in range(n):
        row = [0] * (n + 3)
        row[i], row[n + 2] = 1, -1
        rows.append(row)
        senses.append(GE)
        rhs.append(0)
    rows.append([0] * n + [-1, 1, 0])
    senses.append(LE)
    rhs.append(eps)
    c = [0] * (n + 2) + [-1]
    lower = [0.0] * n + [-np.inf, -np.inf, -np.inf]
    upper = [np.inf] * (n + 2) + [1.0]
    lp = LinearProgram(c, rows, senses, rhs, lower=lower, upper=upper)
    sol = _solve(lp, exact, options, stats)
    if sol.status == INFEASIBLE:
        return MarginResult(-np.inf, None, INFEASIBLE, epsilon, trivial,
                            iterations=sol.iterations)
    mu = sol.x[n + 2]
    a = sol.x[:n]
    weights = None
    if mu > MARGIN_TOL:
        weights, _ = center(a, problem, regime="positive")
    return MarginResult(mu if exact else float(mu), weights, OPTIMAL, epsilon, trivial,
                        a=a, iterations=sol.iterations)


def duality_certificate(problem: Problem, regime: str = "nonneg", *, exact: bool = False,
                        tol: float = DUALITY_TOL, options: SolverOptions | None = None,
                        stats: SolveStats | None = None) -> DualityReport:
    """Solve both sides of the gap/oscillation duality and compare them.

    ``regime="nonneg"`` pairs the semistrong gap with the minimum oscillation
    over ``a >= 0``; ``regime="free"`` pairs the indifference gap with free
    weights. Raises :class:`DualityMismatch` if the two values differ by more
    than ``tol`` (exactly, in exact mode).
    """
    gap_fn = semistrong_gap if regime == "nonneg" else indifference_gap
    delta, cert = gap_fn(problem, exact=exact, options=options, stats=stats)
    agg = min_oscillation(problem, regime, exact=exact, options=options, stats=stats)
    mismatch = abs(delta - agg.oscillation)
    if (mismatch != 0) if exact else (mismatch > tol):
        raise DualityMismatch(
            f"{regime}: gap {float(delta)!r} vs oscillation {float(agg.oscillation)!r}"
        )
    return DualityReport(delta, agg.oscillation, agg.weights, cert, mismatch, regime, agg)
