import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclicity.errors import DomainError, UsageError
from cyclicity.weights import (
    WeightSpec,
    check_regularity,
    condition_integrand,
    condition_partials,
    eval_lambda,
    eval_w,
    effective_w,
    inv_tw_integral,
    lambda_prime,
)

E = math.e


class TestEvalLambda:
    def test_log_power_pure_formula(self):
        # t = e^-1 sits in the pure region once t_cut admits it
        spec = WeightSpec.log_power(1.0, t_cut=math.exp(-1.0))
        assert eval_lambda(spec, math.exp(-1.0)) == pytest.approx(E, rel=1e-14)

    def test_from_w_pure(self):
        spec = WeightSpec.from_w(1.0)
        assert eval_lambda(spec, math.exp(-2.0)) == pytest.approx(E**2 / 4.0, rel=1e-14)

    def test_tail_continuation_value(self):
        # Lambda(e^-2) * e^-2 / 0.3 = (e^2/2) e^-2 / 0.3 = 1/0.6
        spec = WeightSpec.log_power(1.0)
        assert eval_lambda(spec, 0.3) == pytest.approx(1.0 / 0.6, rel=1e-13)

    def test_continuity_at_cut(self):
        for spec in (WeightSpec.log_power(1.3), WeightSpec.from_w(0.7), WeightSpec.const_w()):
            cut = spec.pure_cut
            below = eval_lambda(spec, cut * (1.0 - 1e-9))
            above = eval_lambda(spec, cut * (1.0 + 1e-9))
            assert above == pytest.approx(below, rel=1e-7)
            assert eval_lambda(spec, cut) == pytest.approx(below, rel=1e-8)

    def test_domain_errors(self):
        spec = WeightSpec.log_power(1.0)
        with pytest.raises(DomainError):
            eval_lambda(spec, 0.0)
        with pytest.raises(DomainError):
            eval_lambda(spec, -1.0)
        with pytest.raises(DomainError):
            eval_lambda(spec, 2.5)

    def test_pure_cut_shrinks_for_large_exponent(self):
        # the raw formula increases past e^-alpha; the formula region stops there
        spec = WeightSpec.log_power(4.0)
        assert spec.pure_cut == pytest.approx(math.exp(-4.0))
        ts = np.linspace(1e-4, 2.0, 400)
        vals = eval_lambda(spec, ts)
        assert np.all(np.diff(vals) < 0.0)

    @given(st.floats(min_value=0.2, max_value=3.0),
           st.floats(min_value=1e-6, max_value=2.0),
           st.floats(min_value=1e-6, max_value=2.0))
    @settings(max_examples=60, deadline=None)
    def test_strict_monotonicity(self, alpha, t1, t2):
        if abs(t1 - t2) < 1e-9 * max(t1, t2):
            return
        lo, hi = min(t1, t2), max(t1, t2)
        spec = WeightSpec.log_power(alpha)
        assert eval_lambda(spec, lo) > eval_lambda(spec, hi)

    def test_scale_covariance_exact(self):
        base = WeightSpec.log_power(1.5)
        scaled = WeightSpec.log_power(1.5, scale=7.0)
        for t in (1e-6, 1e-3, 0.05, 0.5, 1.7):
            assert eval_lambda(scaled, t) == 7.0 * eval_lambda(base, t)


class TestEvalW:
    def test_values(self):
        assert eval_w(WeightSpec.from_w(0.5), math.exp(-4.0)) == pytest.approx(2.0, rel=1e-14)
        assert eval_w(WeightSpec.from_w(1.0), 0.1) == pytest.approx(math.log(10.0), rel=1e-13)
        assert eval_w(WeightSpec.const_w(), 0.01) == 1.0

    def test_doubling_identity_exact(self):
        spec = WeightSpec.from_w(1.0)
        for t in (1e-2, 1e-4, 1e-7):
            assert eval_w(spec, t * t) / eval_w(spec, t) == pytest.approx(2.0, rel=1e-14)

    def test_out_of_region(self):
        with pytest.raises(DomainError):
            eval_w(WeightSpec.from_w(1.0), 0.5)

    @given(st.floats(min_value=0.2, max_value=2.0), st.floats(min_value=1e-8, max_value=1e-1))
    @settings(max_examples=60, deadline=None)
    def test_identity_t_lambda_w2(self, p, t):
        spec = WeightSpec.from_w(p, scale=3.0)
        if t > spec.pure_cut:
            return
        assert t * eval_lambda(spec, t) * eval_w(spec, t) ** 2 == pytest.approx(3.0, rel=1e-12)

    def test_effective_w_matches_pure_w_at_unit_scale(self):
        spec = WeightSpec.log_power(1.4)
        for t in (1e-5, 1e-2):
            assert effective_w(spec, t) == pytest.approx(eval_w(spec, t), rel=1e-12)


class TestLambdaPrime:
    def test_against_finite_difference(self):
        for spec in (WeightSpec.log_power(1.0), WeightSpec.from_w(0.8), WeightSpec.const_w()):
            for t in (1e-6, 1e-3, 0.05, 0.5):
                h = 1e-6 * t
                fd = (eval_lambda(spec, t + h) - eval_lambda(spec, t - h)) / (2 * h)
                assert lambda_prime(spec, t) == pytest.approx(fd, rel=1e-7)

    def test_log_power_ratio_identity(self):
        # t |Lambda'| / Lambda = (L - 1)/L for alpha = 1
        spec = WeightSpec.log_power(1.0)
        for t in (1e-2, 1e-5):
            L = math.log(1.0 / t)
            ratio = t * abs(lambda_prime(spec, t)) / eval_lambda(spec, t)
            assert ratio == pytest.approx((L - 1.0) / L, rel=1e-12)


class TestCheckRegularity:
    def test_log_power_report(self):
        spec = WeightSpec.log_power(1.0)
        grid = np.geomspace(1e-2, 1e-8, 25)
        rep = check_regularity(spec, grid)
        assert rep.max_t_lambda == pytest.approx(1.0 / math.log(100.0), rel=1e-10)
        assert rep.argmax_t_lambda == pytest.approx(1e-2)
        assert rep.max_log_deriv_ratio < 1.0
        assert rep.lambda_decreasing
        assert rep.t_lambda_vanishing

    def test_const_w_not_vanishing(self):
        spec = WeightSpec.const_w()
        grid = np.geomspace(1e-2, 1e-8, 12)
        rep = check_regularity(spec, grid)
        assert rep.max_t_lambda == pytest.approx(1.0)
        assert not rep.t_lambda_vanishing
        assert rep.lambda_decreasing

    def test_usage_errors(self):
        spec = WeightSpec.log_power(1.0)
        with pytest.raises(UsageError):
            check_regularity(spec, np.geomspace(1e-2, 1e-8, 5))
        with pytest.raises(UsageError):
            check_regularity(spec, np.geomspace(1e-2, 1e-4, 10))
        with pytest.raises(UsageError):
            check_regularity(spec, np.geomspace(1.0, 1e-8, 10))


class TestConditionIntegrand:
    def test_nikolski_value(self):
        spec = WeightSpec.log_power(2.0)
        got = condition_integrand(spec, "nikolski", math.exp(-4.0))
        assert got == pytest.approx(math.exp(4.0) / 4.0, rel=1e-13)

    def test_gs_equals_lambda(self):
        spec = WeightSpec.log_power(1.0, t_cut=math.exp(-1.0))
        assert condition_integrand(spec, "gs", math.exp(-1.0)) == pytest.approx(E, rel=1e-13)

    def test_cbeta_reduces_to_nikolski(self):
        # alpha (1 - beta) = 1 boundary: for alpha = 2, beta = 1/2 the integrands coincide
        spec = WeightSpec.log_power(2.0)
        for t in (1e-2, 1e-4, 1e-6):
            a = condition_integrand(spec, "c_beta", t, beta=0.5)
            b = condition_integrand(spec, "nikolski", t)
            assert a == pytest.approx(b, rel=1e-12)

    def test_cbeta_closed_identity(self):
        spec = WeightSpec.log_power(1.5)
        for t in (1e-3, 1e-5):
            got = condition_integrand(spec, "c_beta", t, beta=0.25)
            L = math.log(1.0 / t)
            assert got == pytest.approx(1.0 / (t * L ** (1.5 * 0.75)), rel=1e-12)

    def test_bad_kind_and_beta(self):
        spec = WeightSpec.log_power(1.0)
        with pytest.raises(UsageError):
            condition_integrand(spec, "bogus", 1e-3)
        with pytest.raises(UsageError):
            condition_integrand(spec, "c_beta", 1e-3, beta=0.9)


class TestIntegralHelper:
    def test_against_quadrature(self):
        from scipy.integrate import quad

        spec = WeightSpec.from_w(0.8, scale=2.0)
        for power in (1.0, 2.0):
            lo, hi = 1e-5, 1e-2
            ref = quad(lambda t: 1.0 / (t * effective_w(spec, t) ** power), lo, hi,
                       epsrel=1e-11)[0]
            assert inv_tw_integral(spec, power, lo, hi) == pytest.approx(ref, rel=1e-9)

    def test_condition_partials_closed_form(self):
        spec = WeightSpec.log_power(1.0)
        eps = np.array([1e-3, 1e-6, 1e-9])
        got = condition_partials(spec, "gs", eps)
        L0 = math.log(1.0 / spec.pure_cut)
        expect = np.log(np.log(1.0 / eps)) - math.log(L0)
        assert np.allclose(got, expect, rtol=1e-12)


class TestSerialization:
    def test_round_trip(self):
        for spec in (WeightSpec.log_power(1.5, t_cut=0.1, scale=2.0),
                     WeightSpec.from_w(0.4), WeightSpec.const_w()):
            assert WeightSpec.from_json(spec.to_json()) == spec

    def test_unknown_fields_rejected(self):
        with pytest.raises(UsageError):
            WeightSpec.from_json({"family": "log_power", "alpha": 1.0, "bogus": 1})

    def test_invalid_parameters(self):
        with pytest.raises(DomainError):
            WeightSpec.log_power(-1.0)
        with pytest.raises(DomainError):
            WeightSpec("log_power", alpha=1.0, t_cut=1.5)
        with pytest.raises(DomainError):
            WeightSpec("from_w")
