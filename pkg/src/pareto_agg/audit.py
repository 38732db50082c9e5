"""Exact violation gaps and verdicts for the epsilon-Pareto axioms.

Each gap is one LP over pairs of lotteries ``(x, y)`` on the prize simplex:

* semistrong:   max u0(y) - u0(x)  s.t.  u_i(x) >= u_i(y) for all i
* indifference: the same with u_i(x) == u_i(y)

The pair ``x = y`` is always feasible, so both gaps are >= 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .core import (ANTECEDENT_TOL, MARGIN_TOL, VERDICT_TOL, Lottery, Problem,
                   SolverError)
from .lp import (EQ, GE, INFEASIBLE, OPTIMAL, LinearProgram, SolveStats,
                 SolverOptions, solve, solve_exact)

SEMISTRONG = "semistrong"
INDIFFERENCE = "indifference"
STRONG = "strong"
SEQUENTIAL_STRONG = "sequential_strong"
AXIOMS = (SEMISTRONG, INDIFFERENCE, STRONG, SEQUENTIAL_STRONG)


@dataclass(frozen=True)
class ViolationCertificate:
    """A lottery pair witnessing ``gap = u0(y) - u0(x)``."""

    x: Lottery
    y: Lottery
    gap: Any
    axiom: str

    def antecedent_residual(self, problem: Problem) -> float:
        """Largest violation of the axiom's hypothesis on the individuals.

        For the inequality axioms this is ``max_i max(0, u_i(y) - u_i(x))``;
        for indifference it is ``max_i |u_i(x) - u_i(y)|``.
        """
        diff = problem.matrix @ (self.x.probs - self.y.probs)
        if self.axiom == INDIFFERENCE:
            return float(np.max(np.abs(diff)))
        return float(np.max(np.maximum(-diff, 0.0)))

    def as_dict(self) -> dict:
        return {"x": self.x.probs.tolist(), "y": self.y.probs.tolist(), "gap": float(self.gap)}


@dataclass(frozen=True)
class AxiomVerdict:
    axiom: str
    epsilon: Any
    holds: bool
    gap: Any
    certificate: ViolationCertificate | None
    strict_gain: Any = None
    notes: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "verdict": "holds" if self.holds else "fails",
            "gap": float(self.gap),
            "epsilon": float(self.epsilon),
            "certificate": self.certificate.as_dict() if self.certificate else None,
        }
        if self.strict_gain is not None:
            out["strict_gain"] = float(self.strict_gain)
        out.update(self.notes)
        return out


def _data(problem: Problem, exact: bool):
    if exact:
        v0 = np.array([Fraction(float(v)) for v in problem.dm], dtype=object)
        V = np.array([[Fraction(float(v)) for v in row] for row in problem.matrix], dtype=object)
        return v0, V
    return problem.dm, problem.matrix


def _run(lp: LinearProgram, exact: bool, options: SolverOptions | None,
         stats: SolveStats | None):
    sol = solve_exact(lp, stats=stats) if exact else solve(lp, options, stats=stats)
    if sol.status not in (OPTIMAL, INFEASIBLE):
        raise SolverError(f"pair LP ended with status {sol.status!r}: {sol.message}")
    return sol


def _pair_rows(v0, V, sense: str):
    m = len(v0)
    zeros = [0] * m
    rows = [[1] * m + zeros, zeros + [1] * m]
    senses = [EQ, EQ]
    rhs = [1, 1]
    for vi in V:
        rows.append(list(vi) + [-v for v in vi])
        senses.append(sense)
        rhs.append(0)
    return rows, senses, rhs


def _lottery(values) -> Lottery:
    p = np.array([float(v) for v in values])
    return Lottery(p / p.sum())


def _gap(problem: Problem, sense: str, axiom: str, exact: bool,
         options: SolverOptions | None, stats: SolveStats | None):
    v0, V = _data(problem, exact)
    m = len(v0)
    rows, senses, rhs = _pair_rows(v0, V, sense)
    c = list(v0) + [-v for v in v0]
    sol = _run(LinearProgram(c, rows, senses, rhs), exact, options, stats)
    if sol.status != OPTIMAL:
        raise SolverError("pair LP is always feasible; solver reported infeasible")
    gap = -sol.objective
    if not exact:
        gap = max(float(gap), 0.0)
    cert = ViolationCertificate(_lottery(sol.x[:m]), _lottery(sol.x[m:]), gap, axiom)
    return gap, cert


def semistrong_gap(problem: Problem, *, exact: bool = False,
                   options: SolverOptions | None = None,
                   stats: SolveStats | None = None) -> tuple[Any, ViolationCertificate]:
    """Largest DM loss ``u0(y) - u0(x)`` over pairs where every individual weakly prefers ``x``.

    Returns the gap together with an optimal pair. With ``exact=True`` the gap
    is a :class:`~fractions.Fraction` computed from the exact binary values of
    the utilities.
    """
    return _gap(problem, GE, SEMISTRONG, exact, options, stats)


def indifference_gap(problem: Problem, *, exact: bool = False,
                     options: SolverOptions | None = None,
                     stats: SolveStats | None = None) -> tuple[Any, ViolationCertificate]:
    """Largest ``u0(y) - u0(x)`` over pairs every individual finds indifferent."""
    return _gap(problem, EQ, INDIFFERENCE, exact, options, stats)


def _holds(gap, epsilon, exact: bool, tol: float) -> bool:
    if exact:
        return gap <= Fraction(epsilon)
    return float(gap) <= float(epsilon) + tol


def _check_eps(epsilon) -> None:
    if not epsilon >= 0:
        raise ValueError("epsilon must be >= 0")


def check_semistrong(problem: Problem, epsilon, *, exact: bool = False,
                     tol: float = VERDICT_TOL, options: SolverOptions | None = None,
                     stats: SolveStats | None = None) -> AxiomVerdict:
    """Does ``u_i(x) >= u_i(y)`` for all i force ``u0(x) >= u0(y) - epsilon``?"""
    _check_eps(epsilon)
    gap, cert = semistrong_gap(problem, exact=exact, options=options, stats=stats)
    return AxiomVerdict(SEMISTRONG, epsilon, _holds(gap, epsilon, exact, tol), gap, cert)


def check_indifference(problem: Problem, epsilon, *, exact: bool = False,
                       tol: float = VERDICT_TOL, options: SolverOptions | None = None,
                       stats: SolveStats | None = None) -> AxiomVerdict:
    """Does unanimous indifference force ``|u0(x) - u0(y)| <= epsilon``?"""
    _check_eps(epsilon)
    gap, cert = indifference_gap(problem, exact=exact, options=options, stats=stats)
    return AxiomVerdict(INDIFFERENCE, epsilon, _holds(gap, epsilon, exact, tol), gap, cert)


def strict_gain(problem: Problem, epsilon, k: int, *, exact: bool = False,
                options: SolverOptions | None = None, stats: SolveStats | None = None):
    """``max u_k(x) - u_k(y)`` over pairs with ``u_i(x) >= u_i(y)`` for all i
    and ``u0(y) - u0(x) >= epsilon``.

    Returns ``(value, (x, y))``, or ``(None, None)`` when no pair meets the
    constraints.
    """
    v0, V = _data(problem, exact)
    m = len(v0)
    rows, senses, rhs = _pair_rows(v0, V, GE)
    eps = Fraction(epsilon) if exact else float(epsilon)
    rows.append([-v for v in v0] + list(v0))
    senses.append(GE)
    rhs.append(eps)
    vk = V[k]
    c = [-v for v in vk] + list(vk)
    sol = _run(LinearProgram(c, rows, senses, rhs), exact, options, stats)
    if sol.status == INFEASIBLE:
        return None, None
    return -sol.objective, (_lottery(sol.x[:m]), _lottery(sol.x[m:]))


def check_strong(problem: Problem, epsilon, *, exact: bool = False,
                 tol: float = VERDICT_TOL, options: SolverOptions | None = None,
                 stats: SolveStats | None = None) -> AxiomVerdict:
    """epsilon-Strong Pareto on the prize simplex.

    Holds iff epsilon-Semistrong holds and no pair exists where every
    individual weakly prefers ``x``, some individual strictly, while the DM
    loses at least ``epsilon``. Once the semistrong part holds such a loss is
    exactly ``epsilon``, so the strict part reduces to one LP per individual:
    the largest strict gain ``u_k(x) - u_k(y)`` on that face must be zero
    (``<= tol`` in floating point).
    """
    semi = check_semistrong(problem, epsilon, exact=exact, tol=tol, options=options, stats=stats)
    if not semi.holds:
        return AxiomVerdict(STRONG, epsilon, False, semi.gap, semi.certificate,
                            notes={"failed_part": "semistrong"})
    best = Fraction(0) if exact else 0.0
    for k in range(problem.n_individuals):
        gain, pair = strict_gain(problem, epsilon, k, exact=exact, options=options, stats=stats)
        if gain is None:
            continue
        if (gain > 0) if exact else (float(gain) > tol):
            x, y = pair
            cert = ViolationCertificate(x, y, float(y.probs @ problem.dm - x.probs @ problem.dm),
                                        STRONG)
            return AxiomVerdict(STRONG, epsilon, False, semi.gap, cert, strict_gain=gain,
                                notes={"failed_part": "strict", "individual": k})
        best = max(best, gain)
    return AxiomVerdict(STRONG, epsilon, True, semi.gap, semi.certificate, strict_gain=best)


def check_sequential_strong(problem: Problem, epsilon, *, exact: bool = False,
                            tol: float = VERDICT_TOL, options: SolverOptions | None = None,
                            stats: SolveStats | None = None) -> AxiomVerdict:
    """Sequential epsilon-Strong Pareto.

    On a lottery simplex (a polytope) this coincides with epsilon-Strong
    Pareto, so the verdict is that of :func:`check_strong`. The verdict is
    cross-checked against the existence of strictly positive weights
    (``positive_weight_margin > 1e-9``); the outcome is recorded under
    ``notes["margin_agrees"]``.
    """
    from .aggregation import positive_weight_margin

    strong = check_strong(problem, epsilon, exact=exact, tol=tol, options=options, stats=stats)
    margin = positive_weight_margin(problem, epsilon, exact=exact, options=options, stats=stats)
    positive = margin.status == OPTIMAL and margin.mu_star > MARGIN_TOL
    notes = {
        "equivalent_to": STRONG,
        "reason": "polyhedral lottery domain",
        "mu_star": float(margin.mu_star),
        "margin_agrees": positive == strong.holds,
    }
    return AxiomVerdict(SEQUENTIAL_STRONG, epsilon, strong.holds, strong.gap,
                        strong.certificate, strict_gain=strong.strict_gain, notes=notes)


def antecedent_ok(cert: ViolationCertificate, problem: Problem,
                  tol: float = ANTECEDENT_TOL) -> bool:
    return cert.antecedent_residual(problem) <= tol
