from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pareto_agg import (GridSpec, GridTooLarge, Problem, brute_gap, brute_min_oscillation,
                        exact_recheck, min_oscillation, sandwich, semistrong_gap)
from pareto_agg.oracle import default_weight_box, lottery_grid, weight_grid_size
from pareto_agg.instances import mixture_seu, pinned_profile, random_dyadic_problem

from strategies import problems


class TestGridSpec:
    @pytest.mark.parametrize("kw", [dict(k=0), dict(k=2.5), dict(weight_box=0.0),
                                    dict(step=-1.0)])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            GridSpec(**kw)


class TestLotteryGrid:
    @pytest.mark.parametrize("m, k", [(1, 5), (2, 3), (3, 4), (4, 6)])
    def test_enumerates_compositions(self, m, k):
        g = lottery_grid(m, k)
        assert len(g) == comb(k + m - 1, m - 1)
        assert np.all(g.sum(axis=1) == k) and np.all(g >= 0)
        assert len({tuple(r) for r in g}) == len(g)

    def test_too_large(self):
        with pytest.raises(GridTooLarge):
            lottery_grid(12, 40)


class TestBruteGap:
    def test_utilitarian_zero(self):
        V = np.array([[0.5, -0.25, 1.0], [0.0, 1.0, 0.5]])
        p = Problem.from_arrays(2 * V[0] + V[1] - 0.5, V)
        assert brute_gap(p, GridSpec(k=10)) == 0.0

    def test_pinned_profile_vertex(self):
        value, (x, y) = brute_gap(pinned_profile(0.0), GridSpec(k=4), return_pair=True)
        assert value == 1.0
        assert x @ pinned_profile(0.0).matrix[0] >= y @ pinned_profile(0.0).matrix[0]

    def test_random_convergence(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            p = random_dyadic_problem(rng, m=3)
            delta = semistrong_gap(p)[0]
            b = brute_gap(p, GridSpec(k=50))
            assert b <= delta + 1e-9
            assert delta - b <= 0.05

    @settings(max_examples=25)
    @given(problems(max_prizes=3, max_individuals=2), st.integers(2, 8))
    def test_nested_refinement_never_decreases(self, p, k):
        assert brute_gap(p, GridSpec(k=k)) <= brute_gap(p, GridSpec(k=2 * k))


class TestBruteMinOscillation:
    def test_utilitarian_integer_weights(self):
        V = np.array([[0.5, -0.25, 1.0], [0.0, 1.0, 0.5]])
        p = Problem.from_arrays(2 * V[0] + V[1] - 0.5, V)
        assert brute_min_oscillation(p, GridSpec(weight_box=3.0, step=0.5)) == 0.0

    def test_pinned_profile_half(self):
        p = pinned_profile(0.5)
        value, a = brute_min_oscillation(p, GridSpec(weight_box=2.0, step=0.05),
                                         return_weights=True)
        lip = 0.05 * sum(np.ptp(v) for v in p.matrix)
        assert np.all(a >= 0)
        assert 0.5 <= value <= 0.5 + lip

    @settings(max_examples=25)
    @given(problems(max_prizes=4, max_individuals=2), st.sampled_from([0.5, 0.25]))
    def test_nested_refinement_never_increases(self, p, h):
        box = 2.0
        coarse = brute_min_oscillation(p, GridSpec(weight_box=box, step=h))
        fine = brute_min_oscillation(p, GridSpec(weight_box=box, step=h / 2))
        assert fine <= coarse

    def test_too_large(self):
        p = Problem.from_arrays([0, 1], [[1, 0]] * 4)
        with pytest.raises(GridTooLarge):
            brute_min_oscillation(p, GridSpec(weight_box=10.0, step=0.01))

    def test_default_box(self):
        p = pinned_profile(0.5)
        assert default_weight_box(p) == 1 + 1.0 * 3 / 1.0
        const = Problem.from_arrays([0, 2], [[1, 1]])
        assert default_weight_box(const) == 1.0
        assert weight_grid_size(p, GridSpec(weight_box=1.0, step=0.5)) == 9


class TestSandwich:
    def test_pinned_profile_brackets_half(self):
        rep = sandwich(pinned_profile(0.5), GridSpec(k=20))
        assert rep.consistent
        assert rep.brute_gap <= 0.5 <= rep.brute_oscillation + 1e-12

    @pytest.mark.parametrize("seed", range(10))
    def test_random(self, seed):
        p = random_dyadic_problem(np.random.default_rng(seed), m=3, n=2)
        rep = sandwich(p, GridSpec(k=20, weight_box=2.0, step=0.1))
        assert rep.brute_gap <= rep.delta_star + 1e-9
        assert abs(rep.delta_star - rep.omega_star) <= 1e-7
        assert rep.as_dict()["k"] == 20


class TestExactRecheck:
    @pytest.mark.parametrize("alpha", [0.0, 0.25, 0.5, 0.75])
    def test_pinned_profile(self, alpha):
        rep = exact_recheck(pinned_profile(alpha))
        target = 1 - Fraction(alpha)
        assert rep.delta_star == rep.omega_nonneg == target
        assert rep.delta_ind == rep.omega_free == target
        assert rep.mu_star is None

    def test_mixture_seu_tastes(self):
        rep = exact_recheck(mixture_seu().lottery_problem(), epsilon=0)
        assert rep.delta_star == rep.omega_nonneg == rep.delta_ind == rep.omega_free == 0
        assert rep.mu_star > 0

    @pytest.mark.parametrize("seed", range(10))
    def test_random_rational(self, seed):
        p = random_dyadic_problem(np.random.default_rng(100 + seed), m=4, n=3)
        rep = exact_recheck(p, epsilon=float(np.ptp(p.dm)) / 2)
        assert rep.float_deviation <= 1e-7
        assert rep.as_dict()["delta_star"]["value"] == float(rep.delta_star)

    def test_float_close_to_exact(self):
        p = random_dyadic_problem(np.random.default_rng(5), m=5, n=3)
        assert min_oscillation(p).oscillation == pytest.approx(
            float(exact_recheck(p).omega_nonneg), abs=1e-7)
