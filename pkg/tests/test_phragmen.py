import math

import numpy as np
import pytest
from scipy.integrate import quad

from cyclicity.errors import DomainError, UsageError
from cyclicity.phragmen import (
    DomainProfile,
    arc_length_s,
    harmonic_measure_mc,
    pl_divergence_integrand,
    pl_divergence_partials,
    sigma,
)

HP = DomainProfile.half_plane()
WEDGE = DomainProfile.wedge()
STRIP = DomainProfile.half_strip()


class TestArcLength:
    def test_half_plane(self):
        assert arc_length_s(HP, 3.0) == pytest.approx(3.0 * math.pi, rel=1e-12)

    def test_wedge(self):
        # phi(x) = x: x(r) = r/sqrt(2), s = pi r / 2
        assert arc_length_s(WEDGE, 2.0) == pytest.approx(math.pi, rel=1e-10)

    def test_half_strip(self):
        expect = 10.0 * (math.pi - 2.0 * math.atan(math.sqrt(99.0)))
        assert arc_length_s(STRIP, 10.0) == pytest.approx(expect, rel=1e-10)
        assert expect == pytest.approx(2.0033, rel=1e-4)

    def test_validity(self):
        with pytest.raises(DomainError):
            arc_length_s(STRIP, 0.5)  # circle misses the strip cross-section
        with pytest.raises(DomainError):
            arc_length_s(HP, -1.0)


class TestSigma:
    def test_half_plane_exact(self):
        for rho in (10.0, 100.0):
            assert sigma(HP, rho) == pytest.approx(rho, rel=1e-3)

    def test_wedge_square(self):
        for rho in (10.0, 100.0):
            assert sigma(WEDGE, rho) == pytest.approx(rho * rho, rel=5e-3)

    def test_sigma_at_one(self):
        assert sigma(HP, 1.0) == 1.0

    def test_monotone(self):
        vals = [sigma(STRIP, r) for r in (2.0, 4.0, 8.0, 16.0)]
        assert all(v2 > v1 for v1, v2 in zip(vals, vals[1:]))

    def test_half_strip_exponential_rate(self):
        # log sigma - (pi/2) rho settles to a constant
        offs = [math.log(sigma(STRIP, rho)) - math.pi / 2.0 * rho for rho in (10.0, 20.0, 40.0)]
        assert max(offs) - min(offs) < 0.05


class TestIntegrand:
    def test_wedge(self):
        assert pl_divergence_integrand(WEDGE, 5.0) == pytest.approx(0.2)

    def test_x2_convergent(self):
        prof = DomainProfile("cartesian", "x2")
        assert pl_divergence_integrand(prof, 4.0) == pytest.approx(2.0 / 16.0)

    def test_invlog_divergent_loglog(self):
        prof = DomainProfile("sector", "invlog")
        assert pl_divergence_integrand(prof, 100.0) == pytest.approx(
            1.0 / (100.0 * math.log(100.0)), rel=1e-12)
        pts = [10.0**k for k in range(1, 7)]
        partials = pl_divergence_partials(prof, pts)
        # partial integrals grow like log log R: increments shrink slowly
        diffs = np.diff(partials)
        assert np.all(diffs > 0.0)
        assert diffs[-1] < diffs[0]

    def test_proposition_lower_bound_consistency(self):
        # log sigma(rho) >= log(c rho) + (1/6) int x phi'/phi^2 dx, with c
        # calibrated at the smallest rho of the sweep
        for prof in (WEDGE, DomainProfile("cartesian", "x2")):
            rhos = [4.0, 8.0, 16.0, 32.0]

            def x_of_r(r):
                lo, hi = 0.0, r
                for _ in range(80):
                    mid = 0.5 * (lo + hi)
                    if mid**2 + prof.phi_at(mid) ** 2 < r * r:
                        lo = mid
                    else:
                        hi = mid
                return 0.5 * (lo + hi)

            def bound_integral(rho):
                return quad(lambda x: pl_divergence_integrand(prof, x),
                            max(x_of_r(1.0), 1e-9), x_of_r(rho), epsrel=1e-9)[0]

            c = sigma(prof, rhos[0]) / (rhos[0] * math.exp(bound_integral(rhos[0]) / 6.0))
            for rho in rhos[1:]:
                lhs = math.log(sigma(prof, rho))
                rhs = math.log(c * rho) + bound_integral(rho) / 6.0
                assert lhs >= rhs - 1e-6


class TestMonteCarlo:
    def test_half_plane_scaling(self):
        # exact harmonic measure from z0 = 1 decays like (4/pi)/rho
        vals = {}
        for rho in (4.0, 8.0, 16.0):
            est = harmonic_measure_mc(HP, 1.0 + 0.0j, rho, 20_000, seed=9)
            vals[rho] = est.mean * rho
            assert est.capped_paths == 0
        ratios = list(vals.values())
        assert max(ratios) / min(ratios) < 3.0
        assert vals[16.0] == pytest.approx(4.0 / math.pi, rel=0.15)

    def test_wedge_scaling(self):
        vals = []
        for rho in (4.0, 8.0, 16.0):
            est = harmonic_measure_mc(WEDGE, 1.0 + 0.0j, rho, 20_000, seed=9)
            vals.append(est.mean * rho * rho)
        assert max(vals) / min(vals) < 3.0

    def test_probability_and_monotonicity(self):
        prev = None
        for rho in (4.0, 8.0, 16.0):
            est = harmonic_measure_mc(STRIP, 0.5 + 0.0j, rho, 20_000, seed=2)
            assert 0.0 <= est.mean <= 1.0
            if prev is not None:
                assert est.mean <= prev + 3.0 * est.standard_error
            prev = est.mean

    def test_seeded_determinism(self):
        a = harmonic_measure_mc(HP, 1.0 + 0.0j, 8.0, 20_000, seed=123)
        b = harmonic_measure_mc(HP, 1.0 + 0.0j, 8.0, 20_000, seed=123)
        assert a == b
        c = harmonic_measure_mc(HP, 1.0 + 0.0j, 8.0, 20_000, seed=124)
        assert c.mean != a.mean

    def test_threads_do_not_change_result(self):
        a = harmonic_measure_mc(WEDGE, 1.0 + 0.0j, 8.0, 20_000, seed=5)
        b = harmonic_measure_mc(WEDGE, 1.0 + 0.0j, 8.0, 20_000, seed=5, threads=4)
        assert a == b

    def test_usage_errors(self):
        with pytest.raises(UsageError):
            harmonic_measure_mc(HP, 1.0 + 0.0j, 8.0, 100, seed=1)
        with pytest.raises(DomainError):
            harmonic_measure_mc(HP, -1.0 + 0.0j, 8.0, 20_000, seed=1)
        with pytest.raises(DomainError):
            harmonic_measure_mc(HP, 5.0 + 0.0j, 8.0, 20_000, seed=1)


class TestProfileConfig:
    def test_round_trip(self):
        for prof in (HP, WEDGE, STRIP, DomainProfile("sector", "invlog"),
                     DomainProfile("cartesian", "x2")):
            assert DomainProfile.from_json(prof.to_json()) == prof

    def test_invalid(self):
        with pytest.raises(DomainError):
            DomainProfile("sector", "x")
        with pytest.raises(DomainError):
            DomainProfile("cartesian", "invlog")
        with pytest.raises(DomainError):
            DomainProfile("sector", "const", value=2.0)
        with pytest.raises(UsageError):
            DomainProfile.from_json({"variant": "sector", "phi": "const", "junk": 1})
