"""Reference instances with known answers, plus seeded random generators."""

from __future__ import annotations

import math

import numpy as np

from .core import Problem
from .seu import SeuProblem


def pinned_profile(alpha: float = 0.0) -> Problem:
    """Three prizes where individual 1 pins the first coordinate.

    ``v0 = (0, alpha, 1)``, ``v1 = (1, 0, 0)``, ``v2 = (0, 1, 1)``. Every
    weighting leaves prizes 2 and 3 of the residual exactly ``1 - alpha``
    apart, and that is also the semistrong gap.
    """
    return Problem.from_arrays([0.0, alpha, 1.0], [[1.0, 0.0, 0.0], [0.0, 1.0, 1.0]])


def quarter_disc_polygon(theta1: float) -> tuple[Problem, np.ndarray]:
    """Polygon inscribed in the quarter disc, one prize per vertex.

    Vertices are the origin and the arc points at angles ``0, theta1, ...,
    pi/2``; ``pi / (2 * theta1)`` must be an integer. The DM utility is
    ``-x1`` and the single individual's is ``x2``. With ``epsilon = 1`` the
    largest admissible weight on the individual is ``tan(theta1 / 2)``.
    Returns the problem and the ``(M, 2)`` vertex array.
    """
    steps = round((math.pi / 2) / theta1)
    if steps < 1 or not math.isclose(steps * theta1, math.pi / 2, rel_tol=1e-12):
        raise ValueError("pi/2 must be an integer multiple of theta1")
    angles = np.arange(steps + 1) * theta1
    arc = np.column_stack([np.cos(angles), np.sin(angles)])
    arc[-1] = (0.0, 1.0)
    verts = np.vstack([[0.0, 0.0], arc])
    labels = ["origin"] + [f"arc{j}" for j in range(steps + 1)]
    problem = Problem.from_arrays(-verts[:, 0], [verts[:, 1]], labels=labels, epsilon=1.0)
    return problem, verts


def mixture_seu(eps: float = 0.125) -> SeuProblem:
    """Two individuals whose tastes and beliefs are both linearly independent.

    Tastes ``v1 = (3e/2, e/4, 1)``, ``v2 = (e, -e/4, 1)`` with the DM's taste
    their average; beliefs ``(1/2, 1/4, 1/4)``, ``(1/4, 1/4, 1/2)`` with the
    DM's prior their average ``(3/8, 1/4, 3/8)``. Choose a dyadic ``eps`` to
    keep every entry exactly representable.
    """
    v1 = np.array([1.5 * eps, 0.25 * eps, 1.0])
    v2 = np.array([eps, -0.25 * eps, 1.0])
    P1 = np.array([0.5, 0.25, 0.25])
    P2 = np.array([0.25, 0.25, 0.5])
    return SeuProblem.from_arrays(0.5 * v1 + 0.5 * v2, [v1, v2], 0.5 * P1 + 0.5 * P2, [P1, P2],
                                  consequences=["c1", "c2", "c3"],
                                  states=["s1", "s2", "s3"])


def random_problem(rng: np.random.Generator, max_prizes: int = 6,
                   max_individuals: int = 4, min_prizes: int = 2) -> Problem:
    """Entries uniform in ``[-1, 1]``, sizes uniform in the given ranges."""
    m = int(rng.integers(min_prizes, max_prizes + 1))
    n = int(rng.integers(1, max_individuals + 1))
    return Problem.from_arrays(rng.uniform(-1, 1, m), rng.uniform(-1, 1, (n, m)))


def random_dyadic_problem(rng: np.random.Generator, m: int | None = None,
                          n: int | None = None, denominator: int = 16,
                          max_prizes: int = 4, max_individuals: int = 3) -> Problem:
    """Entries ``j / denominator`` in ``[-1, 1]``, exact in binary and in rationals."""
    m = m if m is not None else int(rng.integers(2, max_prizes + 1))
    n = n if n is not None else int(rng.integers(1, max_individuals + 1))
    q = denominator
    v0 = rng.integers(-q, q + 1, m) / q
    V = rng.integers(-q, q + 1, (n, m)) / q
    return Problem.from_arrays(v0, V)


def random_utilitarian_problem(rng: np.random.Generator, m: int = 4, n: int = 3) -> Problem:
    """``v0 = sum(a_i v_i) + b`` with ``a >= 0``, so every gap is zero."""
    V = rng.uniform(-1, 1, (n, m))
    a = rng.uniform(0, 2, n)
    return Problem.from_arrays(a @ V + rng.uniform(-1, 1), V)


def random_beliefs(rng: np.random.Generator, n_states: int, n_individuals: int,
                   concentration: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Dirichlet draws for the DM prior and each individual belief."""
    alpha = np.full(n_states, concentration)
    P0 = rng.dirichlet(alpha)
    Ps = rng.dirichlet(alpha, size=n_individuals)
    return P0, Ps
