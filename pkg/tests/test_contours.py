"""Contour node rules and adaptive quadrature against closed-form integrals."""

import math

import numpy as np
import pytest

from tacnode_lab.contours import (
    Circle,
    ContourError,
    Cross,
    Inverted,
    NonConvergence,
    NonFinite,
    QuadNode,
    RayPair,
    VerticalLine,
    _node_arrays,
    integrate_adaptive,
    nodes,
)

TWO_PI_I = 2j * math.pi


def quad(contour, f, n):
    pts, wts = _node_arrays(contour, n)
    return np.sum(f(pts) * wts)


class TestNodes:
    def test_minimum_node_count(self):
        with pytest.raises(ContourError):
            nodes(Circle(0, 1.0), 3)

    def test_inverted_circle_rejected(self):
        with pytest.raises(ContourError):
            Inverted(Circle(0, 1.0))

    def test_ray_angle_range(self):
        with pytest.raises(ContourError):
            RayPair(anchor=2.0, angle=math.pi / 4, truncation=5.0)
        with pytest.raises(ContourError):
            RayPair(anchor=2.0, angle=math.pi / 2, truncation=5.0)

    def test_circle_weight_sum_vanishes(self):
        # closed contour: integral of 1 is 0, trapezoid makes it exact
        pts, wts = _node_arrays(Circle(0.3 + 0.1j, 2.0), 128)
        assert abs(np.sum(wts)) < 1e-13

    def test_circle_orientation_counterclockwise(self):
        # residue of 1/z must come out +2*pi*i
        val = quad(Circle(0, 1.0), lambda w: 1.0 / w, 256)
        assert abs(val - TWO_PI_I) < 1e-12

    def test_circle_analytic_integrand_vanishes(self):
        val = quad(Circle(0, 1.0), lambda w: w, 256)
        assert abs(val) < 1e-13

    def test_degenerate_ray_pair_collapses_to_anchor(self):
        nl = nodes(RayPair(anchor=2.0, angle=3 * math.pi / 8, truncation=0.0), 4)
        assert all(q.point == 2.0 + 0.0j for q in nl)
        assert all(q.weight == 0.0 for q in nl)

    def test_inverted_nodes_are_reciprocal(self):
        base = RayPair(anchor=2.0, angle=3 * math.pi / 8, truncation=5.0)
        bp, bw = _node_arrays(base, 64)
        ip, iw = _node_arrays(Inverted(base), 64)
        assert np.allclose(ip, 1.0 / bp)
        assert np.allclose(iw, -bw / bp**2)

    def test_quadnode_list_matches_arrays(self):
        base = VerticalLine(offset=2.0, truncation=6.0)
        nl = nodes(base, 64)
        pts, wts = _node_arrays(base, 64)
        assert isinstance(nl[0], QuadNode)
        assert np.allclose([q.point for q in nl], pts)
        assert np.allclose([q.weight for q in nl], wts)

    def test_cross_symmetry(self):
        # the four arms come in conjugate pairs
        pts, _ = _node_arrays(Cross(truncation=4.0), 128)
        conj = np.sort_complex(np.conj(pts))
        assert np.allclose(np.sort_complex(pts), conj)


class TestIntegrateAdaptive:
    def test_residue_of_exp_over_w_squared(self):
        # oint e^w / w^2 dw = 2*pi*i (Taylor coefficient of w)
        res = integrate_adaptive(lambda w: np.exp(w) / w**2, Circle(0, 1.0), tol=1e-12)
        assert abs(res.value - TWO_PI_I) < 1e-11
        assert res.err <= 1e-12

    def test_closed_contour_constant_integrand(self):
        res = integrate_adaptive(lambda w: np.ones_like(w), Circle(0, 0.5), tol=1e-13)
        assert abs(res.value) < 1e-12

    def test_gaussian_on_vertical_line(self):
        # int_{-i inf}^{i inf} e^{z^2} dz = i sqrt(pi) (z = i s)
        res = integrate_adaptive(
            lambda z: np.exp(z**2), VerticalLine(offset=0.0, truncation=8.0), tol=1e-12
        )
        assert abs(res.value - 1j * math.sqrt(math.pi)) < 1e-11

    def test_shifted_gaussian_line_is_offset_independent(self):
        f = lambda z: np.exp(z**2 / 2)
        a = integrate_adaptive(f, VerticalLine(0.0, 10.0), tol=1e-12)
        b = integrate_adaptive(f, VerticalLine(1.5, 10.0), tol=1e-12)
        assert abs(a.value - b.value) < 1e-10

    def test_ray_pair_gaussian_tail(self):
        # Re(z^2) < 0 on the sector, so e^{z^2/2} decays; the value must be
        # insensitive to pushing the truncation further out
        f = lambda z: np.exp(z**2 / 2)
        a = integrate_adaptive(f, RayPair(2.0, 3 * math.pi / 8, 10.0), tol=1e-12)
        b = integrate_adaptive(f, RayPair(2.0, 3 * math.pi / 8, 14.0), tol=1e-12)
        assert abs(a.value - b.value) < 1e-10

    def test_inverted_petal_matches_substitution(self):
        # integrating f over the petal must equal integrating
        # f(1/u) * (-1/u^2) over the base ray pair
        base = RayPair(2.0, 3 * math.pi / 8, 14.0)
        f = lambda z: np.exp((z + 1.0 / z) ** 2 / 4)
        direct = integrate_adaptive(
            lambda u: f(1.0 / u) * (-1.0 / u**2), base, tol=1e-11
        )
        petal = integrate_adaptive(f, Inverted(base), tol=1e-11)
        assert abs(direct.value - petal.value) < 1e-10

    def test_nonconvergence_raises(self):
        rng = np.random.default_rng(0)
        noisy = lambda w: rng.standard_normal(w.shape)
        with pytest.raises(NonConvergence):
            integrate_adaptive(noisy, Circle(0, 1.0), tol=1e-14, n0=8, n_max=64)

    def test_nonfinite_raises(self):
        with pytest.raises(NonFinite):
            integrate_adaptive(
                lambda w: 1.0 / (w - w), Circle(0, 1.0), tol=1e-10, n0=8, n_max=32
            )

    def test_refinement_differences_shrink(self):
        f = lambda w: np.exp(w) / w
        vals = [quad(Circle(0, 1.0), f, n) for n in (8, 16, 32, 64)]
        diffs = [abs(b - a) for a, b in zip(vals, vals[1:])]
        assert diffs[0] > diffs[1] > diffs[2]
