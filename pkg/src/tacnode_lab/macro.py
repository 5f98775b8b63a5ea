"""Macroscopic density and limit-shape geometry of the interlacing dynamics.

On the macroscopic scale (position x = xi L, level m = mu L, time t = tau L,
rate asymmetry eps held fixed) the particle density at (xi, mu) is governed
by the critical points of the action

    F(z) = tau (z + 1/z) + (mu/2) log(1 + eps^2 - eps (z + 1/z)) - xi log z.

A single critical point in the open upper half plane puts (xi, mu) in the
liquid region and the density there is arg(z)/pi.  With no such point the
density is frozen at 0 (region "outside", no particles) or 1 (region "D2",
still packed).  The liquid-frozen boundary is the real-z locus
F'(z) = F''(z) = 0, a system that is linear in (xi, mu) at fixed z.

Clearing denominators in F'(z) = 0 gives the quartic

    -tau eps z^4 + (B + xi eps) z^3 - xi (1 + eps^2) z^2
        + (xi eps - B) z + tau eps = 0,       B = tau (1+eps^2) - mu eps / 2,

whose roots contain every critical point; candidates are filtered by
checking |F'| directly, which removes the spurious roots the clearing step
introduces at z = eps, 1/eps when mu = 0.  The product of the four roots is
-1, so at most one conjugate pair exists and the upper-half-plane critical
point is unique whenever it exists.  At xi = 0 the quartic factors as
(z^2 - 1)(-tau eps z^2 + B z - tau eps) and the liquid branch reduces to
the closed form density = arccos(s/2)/pi with s = B/(tau eps).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "DegenerateQuartic",
    "Singular",
    "SingularSystem",
    "MacroPoint",
    "SaddleResult",
    "BoundaryPoint",
    "F_derivatives",
    "saddle",
    "boundary_curve",
    "cusp_points",
]

log = logging.getLogger(__name__)


class Singular(ValueError):
    """Evaluation at a pole of the action."""


class DegenerateQuartic(ValueError):
    """Critical-point polynomial lost its degree."""


class SingularSystem(ValueError):
    """Boundary system is rank-deficient at this z."""


@dataclass(frozen=True)
class MacroPoint:
    """Macroscopic coordinates (xi, mu) with time scale tau and rate eps."""

    xi: float
    mu: float
    tau: float
    eps_rate: float

    def __post_init__(self):
        if self.mu < 0.0:
            raise ValueError(f"mu must be >= 0, got {self.mu}")
        if self.tau <= 0.0:
            raise ValueError(f"tau must be > 0, got {self.tau}")
        if not (0.0 < self.eps_rate < 1.0):
            raise ValueError(f"eps_rate must be in (0,1), got {self.eps_rate}")


@dataclass(frozen=True)
class SaddleResult:
    """Region label, the upper-half-plane critical point if any, density."""

    region: str  # "D1" | "D2" | "outside"
    z: complex | None
    density: float


@dataclass(frozen=True)
class BoundaryPoint:
    """Real critical parameter z and the (xi, mu) it maps to."""

    z_real: float
    xi: float
    mu: float


def F_derivatives(z: complex, p: MacroPoint):
    """Action F and its first two z-derivatives at one point.

    Returns
    -------
    (F, F', F'') as complex numbers.

    Raises
    ------
    Singular
        At z = 0 or on the zero set of 1 + eps^2 - eps (z + 1/z).
    """
    z = complex(z)
    if z == 0:
        raise Singular("z = 0 is a pole of the action")
    eps, tau, mu, xi = p.eps_rate, p.tau, p.mu, p.xi
    D = 1.0 + eps * eps - eps * (z + 1.0 / z)
    if D == 0:
        raise Singular(f"z = {z} is a logarithmic branch point")
    one = 1.0 - 1.0 / (z * z)
    F = tau * (z + 1.0 / z) + 0.5 * mu * np.log(D) - xi * np.log(z)
    F1 = one * (tau - 0.5 * mu * eps / D) - xi / z
    F2 = (
        2.0 * tau / z**3
        - mu * eps / (z**3 * D)
        - 0.5 * mu * eps * eps * one * one / (D * D)
        + xi / (z * z)
    )
    return F, F1, F2


def _boundary_system(z: float, eps: float, tau: float):
    """Coefficients of the linear system F'(z)=0, F''(z)=0 in (mu, xi)."""
    D = 1.0 + eps * eps - eps * (z + 1.0 / z)
    if D == 0.0:
        raise SingularSystem(f"z = {z} is a branch point of the action")
    one = 1.0 - 1.0 / (z * z)
    a1 = -0.5 * eps * one / D
    b1 = -1.0 / z
    c1 = tau * one
    a2 = -0.5 * eps * (2.0 / (z**3 * D) + eps * one * one / (D * D))
    b2 = 1.0 / (z * z)
    c2 = 2.0 * tau / z**3
    return a1, b1, c1, a2, b2, c2


def _solve_boundary(z: float, eps: float, tau: float) -> tuple[float, float]:
    """Solve the boundary system at real z; returns (xi, mu)."""
    if z == 0:
        raise SingularSystem("z = 0")
    a1, b1, c1, a2, b2, c2 = _boundary_system(z, eps, tau)
    det = a1 * b2 - a2 * b1
    # compare against the pre-cancellation magnitude of the two products
    scale = abs(a1 * b2) + abs(a2 * b1)
    if not math.isfinite(det) or abs(det) <= 1e-12 * scale:
        raise SingularSystem(f"rank-deficient boundary system at z = {z}")
    mu = (-c1 * b2 + c2 * b1) / det
    xi = (-a1 * c2 + a2 * c1) / det
    if not (math.isfinite(mu) and math.isfinite(xi)):
        raise SingularSystem(f"non-finite boundary solution at z = {z}")
    return xi, mu


@lru_cache(maxsize=16)
def _boundary_samples(eps: float, tau: float) -> tuple[tuple[float, float], ...]:
    # dense z < 0 sweep: the packed region sits above this branch, which
    # carries the larger mu at every xi it covers
    zs = -np.geomspace(1e-4, 1e4, 4001)
    pts = []
    for z in zs:
        try:
            xi, mu = _solve_boundary(float(z), eps, tau)
        except SingularSystem:
            continue
        pts.append((xi, mu))
    return tuple(pts)


def _largest_boundary_mu(eps: float, tau: float, xi: float) -> float | None:
    """Piecewise-linear interpolation of the packed-side boundary branch."""
    pts = _boundary_samples(eps, tau)
    best = None
    for (x0, m0), (x1, m1) in zip(pts, pts[1:]):
        if x0 == x1:
            continue
        if (x0 - xi) * (x1 - xi) <= 0.0:
            m = m0 + (xi - x0) / (x1 - x0) * (m1 - m0)
            if best is None or m > best:
                best = m
    return best


def saddle(p: MacroPoint, tol: float = 1e-9) -> SaddleResult:
    """Classify a macroscopic point and compute its density.

    Roots of the cleared quartic are taken from the companion matrix,
    filtered by |F'(root)| < tol * (1 + |tau| + |mu| + |xi|).  Exactly one
    surviving root in the open upper half plane means the liquid region
    ("D1", density arg(z)/pi).  Otherwise the point is frozen: packed
    ("D2", density 1) if it lies inside the initial cone |xi| <= mu/2 and
    above the packed-side boundary branch, empty ("outside", density 0)
    if not.
    """
    eps, tau, mu, xi = p.eps_rate, p.tau, p.mu, p.xi

    if xi == 0.0:
        # quartic factors through z^2 - s z + 1; closed-form liquid branch
        s = (1.0 + eps * eps) / eps - 0.5 * mu / tau
        if abs(s) < 2.0:
            z = complex(0.5 * s, math.sqrt(1.0 - 0.25 * s * s))
            return SaddleResult("D1", z, math.acos(0.5 * s) / math.pi)
        if s <= -2.0:
            return SaddleResult("D2", None, 1.0)
        return SaddleResult("outside", None, 0.0)

    B = tau * (1.0 + eps * eps) - 0.5 * mu * eps
    coeffs = [
        -tau * eps,
        B + xi * eps,
        -xi * (1.0 + eps * eps),
        xi * eps - B,
        tau * eps,
    ]
    if coeffs[0] == 0.0:
        raise DegenerateQuartic(f"leading coefficient vanished for {p}")
    roots = np.roots(coeffs)

    scale = 1.0 + abs(tau) + abs(mu) + abs(xi)
    genuine = []
    for r in roots:
        try:
            _, f1, _ = F_derivatives(complex(r), p)
        except Singular:
            continue
        if abs(f1) < tol * scale:
            genuine.append(complex(r))

    upper = [r for r in genuine if r.imag > 1e-12 * (1.0 + abs(r))]
    if len(upper) == 1:
        z = upper[0]
        return SaddleResult("D1", z, math.atan2(z.imag, z.real) / math.pi)
    if len(upper) > 1:
        # cannot happen for a genuine quartic (root product is -1); only
        # reachable through filter noise
        log.warning("multiple upper-half critical points at %s: %s", p, upper)

    if abs(xi) <= 0.5 * mu:
        top = _largest_boundary_mu(eps, tau, xi)
        if top is not None and mu > top:
            return SaddleResult("D2", None, 1.0)
    return SaddleResult("outside", None, 0.0)


def boundary_curve(
    eps_rate: float, tau: float, z_samples
) -> list[BoundaryPoint]:
    """Liquid-region boundary traced by its real critical parameter.

    For each real z solves the linear system F'(z) = 0 = F''(z) for
    (xi, mu); samples where the system is rank-deficient are skipped and
    reported through the module logger, solutions with mu < 0 are
    discarded.  The curve is returned ordered by z.
    """
    if not (0.0 < eps_rate < 1.0):
        raise ValueError(f"eps_rate must be in (0,1), got {eps_rate}")
    if tau <= 0.0:
        raise ValueError(f"tau must be > 0, got {tau}")
    out = []
    for z in sorted(float(z) for z in z_samples):
        try:
            xi, mu = _solve_boundary(z, eps_rate, tau)
        except SingularSystem as exc:
            log.warning("boundary sample skipped: %s", exc)
            continue
        if mu < 0.0:
            continue
        out.append(BoundaryPoint(z_real=z, xi=xi, mu=mu))
    return out


def cusp_points(eps_rate: float, tau: float = 0.5) -> tuple[float, float]:
    """The two boundary cusps on the xi = 0 axis, (mu_low, mu_high).

    z = +1 gives 2 tau (1-eps)^2/eps, z = -1 gives 2 tau (1+eps)^2/eps;
    their gap is 8 tau exactly.  The default tau = 1/2 makes the pair
    (eps + 1/eps - 2, eps + 1/eps + 2) with gap 4.
    """
    if eps_rate <= 0.0:
        raise ValueError(f"eps_rate must be > 0, got {eps_rate}")
    if tau <= 0.0:
        raise ValueError(f"tau must be > 0, got {tau}")
    base = eps_rate + 1.0 / eps_rate
    return 2.0 * tau * (base - 2.0), 2.0 * tau * (base + 2.0)
