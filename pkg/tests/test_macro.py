import logging
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tacnode_lab.macro import (
    BoundaryPoint,
    MacroPoint,
    Singular,
    F_derivatives,
    boundary_curve,
    cusp_points,
    saddle,
)


class TestMacroPointValidation:
    def test_ranges(self):
        with pytest.raises(ValueError):
            MacroPoint(0.0, -0.1, 1.0, 0.5)
        with pytest.raises(ValueError):
            MacroPoint(0.0, 1.0, 0.0, 0.5)
        with pytest.raises(ValueError):
            MacroPoint(0.0, 1.0, 1.0, 1.0)


class TestActionDerivatives:
    def test_unit_roots_at_symmetric_sections(self):
        # (1 - z^-2) kills F' at z = +-1 when xi = 0
        p = MacroPoint(0.0, 2.0, 1.0, 0.5)
        assert F_derivatives(1.0, p)[1] == 0.0
        assert F_derivatives(-1.0, p)[1] == 0.0

    def test_first_derivative_finite_difference(self):
        p = MacroPoint(0.4, 2.0, 1.0, 0.5)
        z = 0.7 + 0.3j
        devs = []
        for h in (1e-3, 1e-4):
            F_p = F_derivatives(z + h, p)[0]
            F_m = F_derivatives(z - h, p)[0]
            devs.append(abs(F_derivatives(z, p)[1] - (F_p - F_m) / (2 * h)))
        assert devs[0] < 1e-4
        assert devs[1] < 1e-6
        # central differences: quadratic order
        assert devs[0] / devs[1] == pytest.approx(100.0, rel=0.25)

    def test_second_derivative_finite_difference(self):
        p = MacroPoint(0.4, 2.0, 1.0, 0.5)
        z = 0.7 + 0.3j
        h = 1e-4
        fd = (F_derivatives(z + h, p)[1] - F_derivatives(z - h, p)[1]) / (2 * h)
        assert abs(F_derivatives(z, p)[2] - fd) < 1e-6

    def test_singular_points(self):
        p = MacroPoint(0.0, 2.0, 1.0, 0.5)
        with pytest.raises(Singular):
            F_derivatives(0.0, p)
        # eps = 0.5 makes the branch-point arithmetic exact at z = eps
        with pytest.raises(Singular):
            F_derivatives(0.5, p)


class TestSaddle:
    def test_symmetric_axis_closed_form(self):
        # s = (1+eps^2)/eps - mu/(2 tau) = 0 here, so density is exactly 1/2
        r = saddle(MacroPoint(0.0, 5.0, 1.0, 0.5))
        assert r.region == "D1"
        assert r.z == 1j
        assert r.density == pytest.approx(0.5, abs=1e-15)

    def test_density_monotone_in_mu_on_axis(self):
        lo = saddle(MacroPoint(0.0, 4.9, 1.0, 0.5)).density
        hi = saddle(MacroPoint(0.0, 5.1, 1.0, 0.5)).density
        assert lo < 0.5 < hi

    def test_packed_far_above(self):
        r = saddle(MacroPoint(0.0, 1e6, 1.0, 0.5))
        assert r.region == "D2"
        assert r.density == 1.0
        assert r.z is None

    def test_empty_below_lower_cusp(self):
        r = saddle(MacroPoint(0.0, 0.1, 0.5, 0.5))
        assert r.region == "outside"
        assert r.density == 0.0

    def test_quartic_route_matches_axis_closed_form(self):
        # xi tiny but nonzero exercises the companion-matrix path; it must
        # agree with the factored xi = 0 branch
        eps, tau = 0.5, 0.5
        for k in range(10):
            mu = 0.7 + k * 0.4  # liquid window is (0.5, 4.5)
            s = (1.0 + eps * eps) / eps - 0.5 * mu / tau
            want = math.acos(0.5 * s) / math.pi
            got = saddle(MacroPoint(1e-12, mu, tau, eps))
            assert got.region == "D1"
            assert got.density == pytest.approx(want, abs=1e-9)

    def test_liquid_residual_invariant(self):
        for xi, mu in [(0.7, 3.0), (-0.4, 1.2), (1.5, 6.5), (0.2, 4.0)]:
            p = MacroPoint(xi, mu, 0.5, 0.5)
            r = saddle(p)
            assert r.region == "D1"
            assert r.z.imag > 0
            scale = 1.0 + abs(p.tau) + abs(p.mu) + abs(p.xi)
            assert abs(F_derivatives(r.z, p)[1]) < 1e-9 * scale

    def test_region_progression_along_section(self):
        regions = [saddle(MacroPoint(0.7, mu, 0.5, 0.5)).region
                   for mu in (0.0005, 0.5, 3.0, 8.0, 12.0, 50.0)]
        assert regions == ["outside", "D1", "D1", "D1", "D2", "D2"]

    @settings(max_examples=25, deadline=None)
    @given(xi=st.floats(-2.0, 2.0), mu=st.floats(0.0, 12.0))
    def test_density_bounds(self, xi, mu):
        r = saddle(MacroPoint(xi, mu, 0.5, 0.5))
        assert 0.0 <= r.density <= 1.0
        assert r.region in ("D1", "D2", "outside")
        assert (r.region == "D1") == (r.z is not None)


class TestBoundaryCurve:
    def test_cusp_limits(self):
        pts = boundary_curve(0.5, 0.5, [1.0, -1.0])
        by_z = {p.z_real: p for p in pts}
        lo, hi = cusp_points(0.5)
        assert by_z[1.0].xi == pytest.approx(0.0, abs=1e-12)
        assert by_z[1.0].mu == pytest.approx(lo, abs=1e-12)
        assert by_z[-1.0].mu == pytest.approx(hi, abs=1e-12)

    def test_touches_axis_at_rate_points(self):
        # mu -> 0 as z -> eps or 1/eps, at xi = tau (z - 1/z)
        eps, tau = 0.5, 0.5
        for z, xi_want in [(eps + 1e-7, tau * (eps - 1 / eps)),
                           (1 / eps - 1e-7, tau * (1 / eps - eps))]:
            (p,) = boundary_curve(eps, tau, [z])
            assert abs(p.mu) < 1e-6
            assert p.xi == pytest.approx(xi_want, abs=1e-6)

    def test_residual_invariant(self):
        zs = [-3.0, -1.7, -0.8, 0.7, 0.9, 1.2, 1.7, 3.0]
        pts = boundary_curve(0.5, 0.5, zs)
        for p in pts:
            mp = MacroPoint(p.xi, p.mu, 0.5, 0.5)
            _, f1, f2 = F_derivatives(p.z_real, mp)
            scale = 1.0 + 0.5 + abs(p.mu) + abs(p.xi)
            assert abs(f1) < 1e-9 * scale
            assert abs(f2) < 1e-9 * scale

    def test_ordered_by_z_and_mu_nonnegative(self):
        pts = boundary_curve(0.5, 0.5, [2.0, -1.0, 0.8, -0.3, 1.1])
        zs = [p.z_real for p in pts]
        assert zs == sorted(zs)
        assert all(p.mu >= 0.0 for p in pts)

    def test_singular_samples_skipped_and_reported(self, caplog):
        with caplog.at_level(logging.WARNING, logger="tacnode_lab.macro"):
            pts = boundary_curve(0.5, 0.5, [0.0, 1.0])
        assert [p.z_real for p in pts] == [1.0]
        assert any("skipped" in r.message for r in caplog.records)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            boundary_curve(1.2, 0.5, [1.0])
        with pytest.raises(ValueError):
            boundary_curve(0.5, 0.0, [1.0])


class TestCuspPoints:
    def test_frozen_examples(self):
        assert cusp_points(1.0) == (0.0, 4.0)
        assert cusp_points(0.5) == (0.5, 4.5)

    def test_matches_rate_arithmetic(self):
        for eps in (0.2, 0.37, 0.5, 0.8):
            lo, hi = cusp_points(eps)
            assert lo == eps + 1 / eps - 2
            assert hi == eps + 1 / eps + 2

    def test_gap_is_four(self):
        for k in range(1, 100):
            lo, hi = cusp_points(k / 100.0)
            assert hi - lo == pytest.approx(4.0, abs=5e-15)

    def test_tau_scales_gap(self):
        lo, hi = cusp_points(0.5, tau=1.0)
        assert hi - lo == pytest.approx(8.0, abs=1e-14)

    def test_validation(self):
        with pytest.raises(ValueError):
            cusp_points(0.0)
        with pytest.raises(ValueError):
            cusp_points(0.5, tau=-1.0)


class TestDensityContinuity:
    @staticmethod
    def _locate(xi, lo, hi, region_above, tau=0.5, eps=0.5):
        for _ in range(50):
            mid = 0.5 * (lo + hi)
            if saddle(MacroPoint(xi, mid, tau, eps)).region == region_above:
                hi = mid
            else:
                lo = mid
        return 0.5 * (lo + hi)

    @pytest.mark.parametrize("xi", [0.0, 0.35, 0.7])
    def test_density_reaches_frozen_values_at_boundary(self, xi):
        tau = eps = 0.5
        mu_lower = self._locate(xi, 1e-6, 3.0, "D1")
        mu_upper = self._locate(xi, 3.0, 20.0, "D2")
        near_lower = saddle(MacroPoint(xi, mu_lower + 1e-3, tau, eps)).density
        near_upper = saddle(MacroPoint(xi, mu_upper - 1e-3, tau, eps)).density
        assert near_lower == pytest.approx(0.0, abs=0.02)
        assert near_upper == pytest.approx(1.0, abs=0.02)
