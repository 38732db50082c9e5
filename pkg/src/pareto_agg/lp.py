"""Dense two-phase primal simplex for small linear programs.

The same tableau code runs over float64 (:func:`solve`) and over exact
rationals (:func:`solve_exact`, numpy object arrays of
:class:`fractions.Fraction`). Every problem in this package has at most a few
hundred rows, so everything is dense and nothing is factorized.

Pivoting uses Dantzig's rule and falls back to Bland's rule once the objective
has not improved for ``2 * (rows + cols)`` consecutive pivots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

LE, EQ, GE = "<=", "=", ">="
OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
NUMERICAL = "numerical"

_SENSES = {"<=": LE, "le": LE, "=": EQ, "==": EQ, "eq": EQ, ">=": GE, "ge": GE}


@dataclass(frozen=True)
class SolverOptions:
    """Tolerances for the floating-point path. Exact mode ignores them."""

    feas_tol: float = 1e-9
    opt_tol: float = 1e-9
    pivot_tol: float = 1e-11
    max_iter: int | None = None


@dataclass
class SolveStats:
    """Accumulates pivot counts across the LP solves of one computation."""

    solves: int = 0
    iterations: int = 0

    def record(self, sol: "LpSolution") -> None:
        self.solves += 1
        self.iterations += sol.iterations


def _is_inf(v: Any) -> bool:
    return isinstance(v, float) and math.isinf(v)


def _bounds(values, n: int, default: float) -> tuple:
    if values is None:
        return (default,) * n
    out = tuple(values)
    if len(out) != n:
        raise ValueError(f"bounds have length {len(out)}, expected {n}")
    for v in out:
        if v is None or (isinstance(v, float) and math.isnan(v)):
            raise ValueError("bounds must be numbers or +/-inf")
    return out


def _matrix(values, n_cols: int | None = None) -> np.ndarray:
    if any(isinstance(v, Fraction) for v in np.ravel(np.asarray(values, dtype=object))):
        arr = np.array(values, dtype=object)
    else:
        arr = np.array(values, dtype=float)
    if n_cols is not None and arr.size == 0:
        arr = arr.reshape(0, n_cols)
    return arr


@dataclass(frozen=True)
class LinearProgram:
    """``minimize c @ z`` subject to ``A[i] @ z (senses[i]) b[i]`` and ``lower <= z <= upper``.

    Bounds default to ``0 <= z < inf``. Entries may be floats, ints or
    :class:`~fractions.Fraction`; the exact solver converts floats to their
    exact binary value.
    """

    c: Any
    A: Any
    senses: Sequence[str]
    b: Any
    lower: Sequence[Any] | None = None
    upper: Sequence[Any] | None = None

    def __post_init__(self):
        c = _matrix(self.c)
        if c.ndim != 1:
            raise ValueError("objective must be a vector")
        n = c.shape[0]
        A = _matrix(self.A, n_cols=n)
        if A.ndim != 2 or A.shape[1] != n:
            raise ValueError(f"constraint matrix has shape {A.shape}, expected (m, {n})")
        m = A.shape[0]
        b = _matrix(self.b).reshape(-1)
        if b.shape[0] != m:
            raise ValueError(f"rhs has length {b.shape[0]}, expected {m}")
        if len(self.senses) != m:
            raise ValueError(f"got {len(self.senses)} row senses for {m} rows")
        try:
            senses = tuple(_SENSES[str(s).lower()] for s in self.senses)
        except KeyError as exc:
            raise ValueError(f"unknown row sense {exc.args[0]!r}") from None
        for name, arr in (("objective", c), ("matrix", A), ("rhs", b)):
            if not all(math.isfinite(float(v)) for v in np.ravel(arr)):
                raise ValueError(f"{name} has non-finite entries")
        lower = _bounds(self.lower, n, 0.0)
        upper = _bounds(self.upper, n, math.inf)
        for lo, up in zip(lower, upper):
            if lo == math.inf or up == -math.inf:
                raise ValueError("lower bound +inf or upper bound -inf")
        for arr in (c, A, b):
            arr.flags.writeable = False
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "senses", senses)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape


@dataclass(frozen=True)
class LpSolution:
    """Outcome of one solve.

    ``dual`` has one multiplier per row of the input program, with the sign
    convention of the Lagrangian ``c @ z - dual @ (A @ z - b)``: nonnegative on
    ``>=`` rows, nonpositive on ``<=`` rows. ``ray`` is a certified direction of
    unbounded descent when ``status == "unbounded"``.
    """

    status: str
    x: np.ndarray | None = None
    objective: Any = None
    dual: np.ndarray | None = None
    ray: np.ndarray | None = None
    iterations: int = 0
    dual_objective: Any = None
    primal_residual: float = 0.0
    complementarity_residual: float = 0.0
    duality_gap: float = 0.0
    exact: bool = False
    message: str = ""

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Bookkeeping for the dense tableau ``[A | slacks | trackers | rhs]``.

    One identity "tracker" column is kept per row. Rows lacking a ``+1`` slack
    use it as their phase-1 artificial; in every row it also carries the
    corresponding column of the basis inverse, which is where duals are read.
    """

    def __init__(self, lp: LinearProgram, exact: bool, opts: SolverOptions):
        self.exact = exact
        self.opts = opts
        conv = Fraction if exact else float
        dtype = object if exact else float
        self.conv, self.dtype = conv, dtype
        self.zero = conv(0)

        m, n = lp.A.shape
        A = np.array([[conv(v) for v in row] for row in lp.A], dtype=dtype).reshape(m, n)
        b = np.array([conv(v) for v in lp.b], dtype=dtype)
        c = np.array([conv(v) for v in lp.c], dtype=dtype)
        self.A, self.b, self.c = A, b, c
        self.senses = lp.senses
        self.lower = tuple(v if _is_inf(v) else conv(v) for v in lp.lower)
        self.upper = tuple(v if _is_inf(v) else conv(v) for v in lp.upper)
        self.m, self.n = m, n

        # z_j = offset_j + sum(sign * x_k for structural columns k of j), x >= 0
        cols: list[tuple[int, int]] = []
        offset = np.array([self.zero] * n, dtype=dtype)
        bound_rows: list[tuple[int, Any]] = []
        for j in range(n):
            lo, up = self.lower[j], self.upper[j]
            if not _is_inf(lo):
                offset[j] = lo
                cols.append((j, 1))
                if not _is_inf(up):
                    bound_rows.append((len(cols) - 1, up - lo))
            elif not _is_inf(up):
                offset[j] = up
                cols.append((j, -1))
            else:
                cols.append((j, 1))
                cols.append((j, -1))
        self.cols, self.offset = cols, offset
        ns = len(cols)
        mt = m + len(bound_rows)

        A_s = np.array([[self.zero] * ns for _ in range(mt)], dtype=dtype).reshape(mt, ns)
        c_s = np.array([self.zero] * ns, dtype=dtype)
        for k, (j, s) in enumerate(cols):
            A_s[:m, k] = A[:, j] * s
            c_s[k] = c[j] * s
        rhs = np.array([self.zero] * mt, dtype=dtype)
        if m:
            rhs[:m] = b - A.dot(offset)
        senses = list(lp.senses)
        for r, (k, cap) in enumerate(bound_rows):
            A_s[m + r, k] = conv(1)
            rhs[m + r] = cap
            senses.append(LE)

        slack_rows = [i for i, s in enumerate(senses) if s != EQ]
        nsl = len(slack_rows)
        S = np.array([[self.zero] * nsl for _ in range(mt)], dtype=dtype).reshape(mt, nsl)
        for k, i in enumerate(slack_rows):
            S[i, k] = conv(1) if senses[i] == LE else conv(-1)

        flips = np.ones(mt, dtype=int)
        for i in range(mt):
            if rhs[i] < 0:
                flips[i] = -1
                A_s[i] = -A_s[i]
                S[i] = -S[i]
                rhs[i] = -rhs[i]
        self.flips = flips
        self.ns, self.nsl, self.mt = ns, nsl, mt
        self.trk = ns + nsl
        ncols = ns + nsl + mt

        T = np.array([[self.zero] * (ncols + 1) for _ in range(mt + 1)], dtype=dtype)
        T = T.reshape(mt + 1, ncols + 1)
        T[:mt, :ns] = A_s
        T[:mt, ns:ns + nsl] = S
        for i in range(mt):
            T[i, self.trk + i] = conv(1)
        T[:mt, -1] = rhs
        self.T = T
        self.full = T[:mt, :ncols].copy()
        self.rhs0 = rhs.copy()

        basis = []
        self.artificial = np.zeros(mt, dtype=bool)
        for i in range(mt):
            k = next((k for k, r in enumerate(slack_rows) if r == i), None)
            if k is not None and S[i, k] > 0:
                basis.append(ns + k)
            else:
                basis.append(self.trk + i)
                self.artificial[i] = True
        self.basis = basis

        colscale = np.ones(ncols)
        if mt:
            colscale = np.maximum(1.0, np.abs(self.full.astype(float)).max(axis=0))
        self.colscale = colscale
        self.rowscale = 1.0 + (np.abs(rhs.astype(float)) if mt else np.zeros(0))
        self.iterations = 0
        self.max_iter = opts.max_iter or (50 * (mt + ncols) + 1000)

    # -- pivoting -------------------------------------------------------
    def price(self, cost: np.ndarray) -> None:
        """Overwrite the objective row with reduced costs for ``cost``."""
        T = self.T
        cb = np.array([cost[k] for k in self.basis], dtype=self.dtype)
        row = np.array(list(cost) + [self.zero], dtype=self.dtype)
        if self.mt:
            row = row - cb.dot(T[:self.mt])
        T[-1] = row

    def pivot(self, r: int, q: int) -> None:
        T = self.T
        T[r] = T[r] / T[r, q]
        colq = T[:, q].copy()
        colq[r] = self.zero
        T -= np.outer(colq, T[r])
        T[:, q] = self.zero
        T[r, q] = self.conv(1)
        if not self.exact:
            T[np.abs(T) < 1e-15] = 0.0
        self.basis[r] = q
        self.iterations += 1

    def iterate(self, allowed: np.ndarray) -> tuple[str, int | None]:
        T, opts, exact = self.T, self.opts, self.exact
        rows, cols = self.mt, T.shape[1] - 1
        stall_limit = 2 * (rows + cols)
        stall, bland = 0, False
        best = -T[-1, -1]
        while True:
            if self.iterations >= self.max_iter:
                return NUMERICAL, None
            d = T[-1, :-1]
            if exact:
                cand = np.flatnonzero(allowed & (d < 0))
            else:
                cand = np.flatnonzero(allowed & (d < -opts.opt_tol * self.colscale))
            if cand.size == 0:
                return OPTIMAL, None
            if bland:
                q = int(cand[0])
            else:
                vals = d[cand] if exact else d[cand] / self.colscale[cand]
                q = int(cand[int(np.argmin(vals))])
            col = T[:rows, q]
            pos = np.flatnonzero(col > 0) if exact else np.flatnonzero(col > opts.pivot_tol)
            if pos.size == 0:
                return UNBOUNDED, q
            ratios = T[pos, -1] / col[pos]
            rmin = min(ratios)
            if exact:
                ties = pos[ratios == rmin]
            else:
                ties = pos[ratios <= rmin + opts.feas_tol * (1.0 + abs(rmin))]
            if bland:
                r = int(min(ties, key=lambda i: self.basis[i]))
            else:
                r = int(ties[int(np.argmax(col[ties].astype(float)))])
            self.pivot(r, q)
            obj = -T[-1, -1]
            improved = obj < best if exact else obj < best - opts.opt_tol * (1.0 + abs(best))
            if improved:
                best, stall, bland = obj, 0, False
            else:
                stall += 1
                if stall >= stall_limit:
                    bland = True

    # -- drivers ----------------------------------------------------------
    def run(self) -> LpSolution:
        T, mt, trk = self.T, self.mt, self.trk
        ncols = T.shape[1] - 1
        if self.artificial.any():
            cost1 = np.array([self.zero] * ncols, dtype=self.dtype)
            for i in np.flatnonzero(self.artificial):
                cost1[trk + i] = self.conv(1)
            self.price(cost1)
            allowed = np.ones(ncols, dtype=bool)
            allowed[trk:] = False
            status, _ = self.iterate(allowed)
            if status == NUMERICAL:
                return self._fail(NUMERICAL, "iteration limit in phase 1")
            infeas = -T[-1, -1]
            limit = 0 if self.exact else self.opts.feas_tol * max(1.0, float(np.max(self.rowscale)))
            if infeas > limit:
                return LpSolution(INFEASIBLE, iterations=self.iterations, exact=self.exact,
                                  message=f"phase-1 objective {float(infeas):.3g}")
            self._drive_out_artificials()

        cost2 = np.array([self.zero] * ncols, dtype=self.dtype)
        cost2[:self.ns] = np.array(
            [self.c[j] * s for (j, s) in self.cols], dtype=self.dtype
        ) if self.ns else cost2[:0]
        self.price(cost2)
        allowed = np.ones(ncols, dtype=bool)
        allowed[trk:] = False
        status, q = self.iterate(allowed)
        if status == NUMERICAL:
            return self._fail(NUMERICAL, "iteration limit in phase 2")
        if status == UNBOUNDED:
            return self._unbounded(q, cost2)
        return self._optimal(cost2)

    def _drive_out_artificials(self) -> None:
        T, trk = self.T, self.trk
        for i in range(self.mt):
            if self.basis[i] < trk:
                continue
            row = T[i, :trk]
            if self.exact:
                nz = np.flatnonzero(row != 0)
            else:
                nz = np.flatnonzero(np.abs(row) > self.opts.pivot_tol)
                T[i, -1] = 0.0
            if nz.size:
                q = int(nz[int(np.argmax(np.abs(row[nz].astype(float))))])
                self.pivot(i, q)
            # else: redundant row, its artificial stays basic at zero

    def _fail(self, status: str, msg: str) -> LpSolution:
        return LpSolution(status, iterations=self.iterations, exact=self.exact, message=msg)

    def _to_original(self, xs: np.ndarray, with_offset: bool = True) -> np.ndarray:
        z = self.offset.copy() if with_offset else np.array([self.zero] * self.n, dtype=self.dtype)
        for k, (j, s) in enumerate(self.cols):
            z[j] = z[j] + s * xs[k]
        return z

    def _unbounded(self, q: int, cost2: np.ndarray) -> LpSolution:
        T = self.T
        dx = np.array([self.zero] * (T.shape[1] - 1), dtype=self.dtype)
        dx[q] = self.conv(1)
        for i, k in enumerate(self.basis):
            dx[k] = -T[i, q]
        ray = self._to_original(dx, with_offset=False)
        if not self.exact:
            ray = ray / max(1.0, float(np.max(np.abs(ray))))
        return LpSolution(UNBOUNDED, ray=ray, iterations=self.iterations, exact=self.exact,
                          objective=-math.inf)

    def _optimal(self, cost2: np.ndarray) -> LpSolution:
        T, mt, trk = self.T, self.mt, self.trk
        ncols = T.shape[1] - 1
        xs = np.array([self.zero] * ncols, dtype=self.dtype)
        for i, k in enumerate(self.basis):
            xs[k] = T[i, -1]
        y = -T[-1, trk:trk + mt]
        if not self.exact and mt:
            # re-solve with the final basis to shed accumulated pivot error
            B = self.full[:, self.basis]
            try:
                xb = np.linalg.solve(B, self.rhs0)
                yb = np.linalg.solve(B.T, cost2[self.basis])
            except np.linalg.LinAlgError:
                pass
            else:
                if np.all(np.isfinite(xb)) and np.all(np.isfinite(yb)):
                    xs = np.zeros(ncols)
                    xs[self.basis] = np.maximum(xb, 0.0)
                    y = yb
        z = self._to_original(xs)
        for j in range(self.n):
            lo, up = self.lower[j], self.upper[j]
            if not _is_inf(lo) and z[j] < lo:
                z[j] = lo
            if not _is_inf(up) and z[j] > up:
                z[j] = up
        dual = np.array([self.flips[i] * y[i] for i in range(self.m)], dtype=self.dtype)
        return self._certify(z, dual)

    def _certify(self, z: np.ndarray, dual: np.ndarray) -> LpSolution:
        A, b, c = self.A, self.b, self.c
        exact = self.exact
        objective = c.dot(z) if self.n else self.zero
        Az = A.dot(z) if self.m else np.array([], dtype=self.dtype)

        viol, comp = 0.0, 0.0
        for i, s in enumerate(self.senses):
            r = Az[i] - b[i]
            v = max(r, 0) if s == LE else (max(-r, 0) if s == GE else abs(r))
            scale = 1.0 + abs(float(b[i])) + float(np.abs(A[i].astype(float)).dot(np.abs(z.astype(float))))
            viol = max(viol, float(v) / scale)
            comp = max(comp, abs(float(dual[i] * r)) / scale)
        for j in range(self.n):
            lo, up = self.lower[j], self.upper[j]
            if not _is_inf(lo):
                viol = max(viol, float(max(lo - z[j], 0)) / (1.0 + abs(float(lo))))
            if not _is_inf(up):
                viol = max(viol, float(max(z[j] - up, 0)) / (1.0 + abs(float(up))))

        d = c - (A.T.dot(dual) if self.m else np.array([self.zero] * self.n, dtype=self.dtype))
        dual_obj = dual.dot(b) if self.m else self.zero
        for j in range(self.n):
            dj = d[j]
            if not exact and abs(dj) <= self.opts.opt_tol * max(1.0, float(np.abs(c).max(initial=0))):
                continue
            if dj > 0:
                lo = self.lower[j]
                dual_obj = -math.inf if _is_inf(lo) else dual_obj + dj * lo
                if not _is_inf(lo):
                    comp = max(comp, abs(float(dj * (z[j] - lo))) / (1.0 + abs(float(objective))))
            elif dj < 0:
                up = self.upper[j]
                dual_obj = -math.inf if _is_inf(up) else dual_obj + dj * up
                if not _is_inf(up):
                    comp = max(comp, abs(float(dj * (up - z[j]))) / (1.0 + abs(float(objective))))
        gap = float(objective - dual_obj) if not _is_inf(dual_obj) else math.inf

        status, msg = OPTIMAL, ""
        if not exact:
            if viol > 1e-8:
                status, msg = NUMERICAL, f"primal residual {viol:.3g}"
            elif abs(gap) > 1e-7 * (1.0 + abs(float(objective))):
                status, msg = NUMERICAL, f"duality gap {gap:.3g}"
        elif viol != 0 or gap != 0:
            status, msg = NUMERICAL, "exact certificate failed"
        return LpSolution(
            status, x=z, objective=objective, dual=dual, iterations=self.iterations,
            dual_objective=dual_obj, primal_residual=viol, complementarity_residual=comp,
            duality_gap=gap, exact=exact, message=msg,
        )


def solve(lp: LinearProgram, options: SolverOptions | None = None,
          stats: SolveStats | None = None) -> LpSolution:
    """Solve ``lp`` in floating point."""
    sol = _Tableau(lp, exact=False, opts=options or SolverOptions()).run()
    if stats is not None:
        stats.record(sol)
    return sol


def solve_exact(lp: LinearProgram, stats: SolveStats | None = None) -> LpSolution:
    """Solve ``lp`` in exact rational arithmetic.

    Float data are read as their exact binary values, so decimal literals that
    are not dyadic (``0.1``) should be passed as ``Fraction("0.1")``.
    """
    sol = _Tableau(lp, exact=True, opts=SolverOptions()).run()
    if stats is not None:
        stats.record(sol)
    return sol
