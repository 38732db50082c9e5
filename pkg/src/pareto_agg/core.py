"""Prize spaces, lotteries, utility profiles and the two primitives on them.

Utilities are vN-M: a utility vector ``v`` over ``M`` prizes induces the affine
functional ``p -> p @ v`` on the lottery simplex. The oscillation of that
functional over the simplex is ``max(v) - min(v)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

# Defaults shared by the audit, aggregation and reporting layers.
VERDICT_TOL = 1e-8
ANTECEDENT_TOL = 1e-8
DUALITY_TOL = 1e-7
MARGIN_TOL = 1e-9
NORMALIZE_TOL = 1e-9

REGIMES = ("free", "nonneg", "positive")


class ParetoAggError(Exception):
    """Base class for errors raised by this package."""


class DimensionError(ParetoAggError, ValueError):
    """Inputs disagree on the number of prizes, states or individuals."""


class SolverError(ParetoAggError, RuntimeError):
    """The LP solver broke down numerically or returned an impossible status."""


def _frozen(values: ArrayLike, name: str) -> NDArray[np.float64]:
    arr = np.array(values, dtype=float).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class PrizeSpace:
    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        if not labels:
            raise ValueError("a prize space needs at least one prize")
        if any(not isinstance(s, str) or not s for s in labels):
            raise ValueError("prize labels must be non-empty strings")
        if len(set(labels)) != len(labels):
            raise ValueError("prize labels must be unique")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def numbered(cls, m: int, prefix: str = "o") -> "PrizeSpace":
        return cls(tuple(f"{prefix}{i + 1}" for i in range(m)))

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class Lottery:
    """A probability vector over prizes.

    Sums within ``1e-9`` of one are renormalized and entries in ``[-1e-12, 0)``
    are clipped to zero; anything further off is rejected.
    """

    probs: NDArray[np.float64]

    def __post_init__(self):
        p = np.array(self.probs, dtype=float).reshape(-1)
        if p.size == 0 or not np.all(np.isfinite(p)):
            raise ValueError("lottery must be a finite, non-empty vector")
        if np.any(p < -1e-12):
            raise ValueError("lottery has negative probabilities")
        p = np.maximum(p, 0.0)
        total = p.sum()
        if abs(total - 1.0) > NORMALIZE_TOL:
            raise ValueError(f"lottery sums to {total!r}, not 1")
        p = p / total
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    @classmethod
    def degenerate(cls, m: int, index: int) -> "Lottery":
        p = np.zeros(m)
        p[index] = 1.0
        return cls(p)

    def __array__(self, dtype=None, copy=None):
        return self.probs if dtype is None else self.probs.astype(dtype)

    def __len__(self) -> int:
        return self.probs.size


@dataclass(frozen=True)
class UtilityVector:
    values: NDArray[np.float64]

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, "utility vector"))
        if self.values.size == 0:
            raise ValueError("utility vector is empty")

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __len__(self) -> int:
        return self.values.size


def evaluate(v: ArrayLike, p: ArrayLike) -> float:
    """Expected utility of lottery ``p`` under prize utilities ``v``."""
    v = np.asarray(v, dtype=float).reshape(-1)
    p = np.asarray(p, dtype=float).reshape(-1)
    if v.shape != p.shape:
        raise DimensionError(f"utility has {v.size} prizes, lottery has {p.size}")
    return float(p @ v)


def oscillation(v: ArrayLike) -> float:
    """``max(v) - min(v)``: the oscillation of ``v`` over the lottery simplex."""
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.size == 0:
        raise ValueError("oscillation of an empty vector")
    return float(v.max() - v.min())


@dataclass(frozen=True)
class Problem:
    """A DM utility ``v0`` and individual utilities ``vs`` on common prizes."""

    prizes: PrizeSpace
    v0: UtilityVector
    vs: tuple[UtilityVector, ...]
    epsilon: float | None = None

    def __post_init__(self):
        v0 = self.v0 if isinstance(self.v0, UtilityVector) else UtilityVector(self.v0)
        vs = tuple(v if isinstance(v, UtilityVector) else UtilityVector(v) for v in self.vs)
        if not vs:
            raise ValueError("a problem needs at least one individual")
        m = len(self.prizes)
        for name, v in [("dm", v0)] + [(f"individual {i + 1}", v) for i, v in enumerate(vs)]:
            if len(v) != m:
                raise DimensionError(f"{name} has {len(v)} utilities for {m} prizes")
        if self.epsilon is not None and not (np.isfinite(self.epsilon) and self.epsilon >= 0):
            raise ValueError("epsilon must be a finite number >= 0")
        object.__setattr__(self, "v0", v0)
        object.__setattr__(self, "vs", vs)

    @classmethod
    def from_arrays(cls, v0: ArrayLike, vs: Iterable[ArrayLike],
                    labels: Sequence[str] | None = None,
                    epsilon: float | None = None) -> "Problem":
        v0 = UtilityVector(v0)
        vs = tuple(UtilityVector(v) for v in vs)
        prizes = PrizeSpace(tuple(labels)) if labels is not None else PrizeSpace.numbered(len(v0))
        return cls(prizes, v0, vs, epsilon)

    @property
    def n_prizes(self) -> int:
        return len(self.prizes)

    @property
    def n_individuals(self) -> int:
        return len(self.vs)

    @property
    def dm(self) -> NDArray[np.float64]:
        return self.v0.values

    @property
    def matrix(self) -> NDArray[np.float64]:
        """Individual utilities stacked as an ``(N, M)`` array."""
        return np.vstack([v.values for v in self.vs])

    def with_dm(self, v0: ArrayLike) -> "Problem":
        return Problem(self.prizes, UtilityVector(v0), self.vs, self.epsilon)

    def with_individuals(self, vs: Iterable[ArrayLike]) -> "Problem":
        return Problem(self.prizes, self.v0, tuple(UtilityVector(v) for v in vs), self.epsilon)


@dataclass(frozen=True)
class Weights:
    """Pareto weights ``a`` and intercept ``b`` of ``w = sum(a_i u_i) + b``."""

    a: NDArray[np.float64]
    b: float = 0.0
    regime: str = "free"

    def __post_init__(self):
        a = _frozen(self.a, "weights")
        if self.regime not in REGIMES:
            raise ValueError(f"regime must be one of {REGIMES}")
        if self.regime == "nonneg" and np.any(a < -1e-12):
            raise ValueError("nonneg regime with a negative weight")
        if self.regime == "positive" and not np.all(a > 0):
            raise ValueError("positive regime needs every weight > 0")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", float(self.b))

    def aggregate(self, problem: Problem) -> NDArray[np.float64]:
        """Prize-wise values of ``w`` on ``problem``."""
        if self.a.size != problem.n_individuals:
            raise DimensionError("weight count differs from the number of individuals")
        return self.a @ problem.matrix + self.b


@dataclass(frozen=True)
class AggregationResult:
    """Minimum-oscillation weights with their centered intercept.

    ``residual`` is ``e = v0 - sum(a_i v_i)`` prize by prize;
    ``sup_residual`` is ``max|v0 - w|`` once ``b`` centers ``e``.
    """

    weights: Weights | None
    oscillation: float
    sup_residual: float
    status: str
    residual: NDArray[np.float64] | None = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"
