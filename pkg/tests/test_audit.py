import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pareto_agg import (Problem, check_indifference, check_semistrong,
                        check_sequential_strong, check_strong, indifference_gap,
                        min_oscillation, positive_weight_margin, semistrong_gap)
from pareto_agg.audit import antecedent_ok, strict_gain
from pareto_agg.instances import (pinned_profile, quarter_disc_polygon,
                                  random_utilitarian_problem)

from strategies import dyadic, problems


class TestSemistrongGap:
    def test_dm_equals_individual(self):
        p = Problem.from_arrays([0.3, -0.2, 0.9], [[0.3, -0.2, 0.9]])
        assert semistrong_gap(p)[0] == pytest.approx(0, abs=1e-12)

    def test_pinned_profile_alpha_zero(self):
        gap, cert = semistrong_gap(pinned_profile(0.0))
        assert gap == pytest.approx(1.0, abs=1e-12)
        assert cert.gap == gap and antecedent_ok(cert, pinned_profile(0.0))

    def test_pinned_profile_alpha_half(self):
        gap, _ = semistrong_gap(pinned_profile(0.5), exact=True)
        assert gap == Fraction(1, 2)

    def test_certificate_witnesses_gap(self):
        p = pinned_profile(0.25)
        gap, cert = semistrong_gap(p)
        assert cert.y.probs @ p.dm - cert.x.probs @ p.dm == pytest.approx(gap, abs=1e-12)


class TestIndifferenceGap:
    def test_constant_dm(self):
        p = Problem.from_arrays([2, 2, 2], [[1, 0, 3]])
        assert indifference_gap(p)[0] == pytest.approx(0, abs=1e-12)

    def test_pinned_profile_alpha_half(self):
        gap, cert = indifference_gap(pinned_profile(0.5), exact=True)
        assert gap == Fraction(1, 2)
        assert cert.antecedent_residual(pinned_profile(0.5)) <= 1e-8

    def test_scaled_individual(self):
        p = Problem.from_arrays([0, 1], [[0, 2]])
        assert indifference_gap(p)[0] == pytest.approx(0, abs=1e-12)


class TestSemistrongVerdicts:
    @given(problems())
    def test_trivial_at_dm_oscillation(self, p):
        eps = float(np.ptp(p.dm))
        assert check_semistrong(p, eps).holds
        assert check_indifference(p, eps).holds

    def test_pinned_profile_fails_below_one(self):
        v = check_semistrong(pinned_profile(0.0), 0.9)
        assert not v.holds and v.gap == pytest.approx(1.0)
        assert v.certificate is not None

    def test_pinned_profile_half_holds_at_half(self):
        assert check_semistrong(pinned_profile(0.5), 0.5).holds
        assert check_indifference(pinned_profile(0.5), 0.5).holds

    def test_pinned_profile_indifference_fails(self):
        assert not check_indifference(pinned_profile(0.0), 0.9).holds

    def test_negative_epsilon_rejected(self):
        with pytest.raises(ValueError):
            check_semistrong(pinned_profile(0.0), -0.1)


class TestStrong:
    def test_classical_positive_utilitarian(self):
        V = np.array([[1, 0, 0.5], [0, 1, -0.5]])
        p = Problem.from_arrays(V.sum(axis=0), V)
        assert check_strong(p, 0.0).holds
        assert check_strong(p, 0.0, exact=True).holds

    def test_pinned_profile_half_at_boundary(self):
        # The first individual pins x1 = y1, so no strict preference survives.
        p = pinned_profile(0.5)
        v = check_strong(p, 0.5, exact=True)
        assert v.holds and v.strict_gain == 0
        assert check_strong(p, 0.5).holds

    def test_strict_gain_value(self):
        # A strict gain for individual 1 at a full epsilon loss for the DM.
        p = Problem.from_arrays([0, 1, 1], [[0, 0, -1]])
        gain, (x, y) = strict_gain(p, 1.0, 0, exact=True)
        assert gain == 1
        assert not check_strong(p, 1.0, exact=True).holds

    def test_strict_gain_infeasible(self):
        p = Problem.from_arrays([0, 1], [[0, 1]])
        assert strict_gain(p, 0.5, 0) == (None, None)

    def test_polygon(self):
        p, _ = quarter_disc_polygon(math.pi / 8)
        assert check_strong(p, 1.0).holds

    def test_semistrong_failure_short_circuits(self):
        v = check_strong(pinned_profile(0.0), 0.5)
        assert not v.holds and v.notes["failed_part"] == "semistrong"

    @given(problems(max_prizes=4, max_individuals=3), st.integers(0, 16))
    def test_sequential_matches_strong_and_margin(self, p, j):
        eps = j / 16 * float(np.ptp(p.dm))
        seq = check_sequential_strong(p, eps, exact=True)
        strong = check_strong(p, eps, exact=True)
        assert seq.holds == strong.holds
        assert seq.notes["margin_agrees"]
        mu = positive_weight_margin(p, eps, exact=True).mu_star
        assert strong.holds == (mu > 1e-9)


class TestInvariants:
    @given(problems())
    def test_gaps_nonnegative(self, p):
        assert semistrong_gap(p)[0] >= 0
        assert indifference_gap(p)[0] >= 0

    @given(problems(max_individuals=3), st.lists(dyadic(), min_size=5, max_size=5))
    def test_adding_individual_never_increases_gap(self, p, extra):
        q = p.with_individuals(list(p.matrix) + [extra[:p.n_prizes]])
        assert semistrong_gap(q, exact=True)[0] <= semistrong_gap(p, exact=True)[0]

    @pytest.mark.parametrize("seed", range(10))
    def test_utilitarian_instances_have_zero_gap(self, seed):
        p = random_utilitarian_problem(np.random.default_rng(seed))
        assert semistrong_gap(p)[0] == pytest.approx(0, abs=1e-9)

    @given(problems(), st.integers(0, 32), st.integers(1, 32))
    def test_verdict_monotone_in_epsilon(self, p, a, b):
        eps = a / 16
        if check_semistrong(p, eps).holds:
            assert check_semistrong(p, eps + b / 16).holds

    @given(problems(), st.integers(1, 8), dyadic())
    def test_scale_covariance(self, p, lam, c):
        q = p.with_dm(lam * p.dm + c)
        assert semistrong_gap(q)[0] == pytest.approx(lam * semistrong_gap(p)[0], abs=1e-9)

    @given(problems())
    def test_duality_with_min_oscillation(self, p):
        assert semistrong_gap(p)[0] == pytest.approx(
            min_oscillation(p, "nonneg").oscillation, abs=1e-7)
        assert indifference_gap(p)[0] == pytest.approx(
            min_oscillation(p, "free").oscillation, abs=1e-7)

    @given(problems())
    def test_certificates_satisfy_antecedent(self, p):
        for fn in (semistrong_gap, indifference_gap):
            gap, cert = fn(p)
            assert antecedent_ok(cert, p)
            assert cert.y.probs @ p.dm - cert.x.probs @ p.dm == pytest.approx(gap, abs=1e-9)

    @given(problems())
    def test_float_matches_exact(self, p):
        assert semistrong_gap(p)[0] == pytest.approx(
            float(semistrong_gap(p, exact=True)[0]), abs=1e-9)
