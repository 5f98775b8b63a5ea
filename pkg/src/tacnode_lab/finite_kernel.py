"""Finite-time correlation kernel of the interlacing dynamics.

Positions live on the shifted lattices x in Z + (m+1)/2 at level m >= 1; a
point is stored as (m, x2) with x2 = 2x integer.  The kernel is a sum of a
single contour integral (present only for increasing level order) and a
double contour integral built from the generating function

    G(w) = e^{t(w + 1/w)} (1 - eps w)^{floor(m/2)}
           (1 - eps/w)^{floor((m+1)/2)} w^{floor(x)}.

Three evaluation schemes are provided, all representing the same kernel:

* ``original``: small circle around 0 for w, one big circle around both
  poles eps and 1/eps for z.
* ``deformed``: unit circle for w (enclosing 0 and eps), two small circles
  around eps and 1/eps for z.
* ``sigma``: unit circle for w, and for z a truncated ray pair through the
  positive real axis plus its reciprocal petal.  Needs t > 0 for decay; this
  is the only scheme that stays well conditioned at the large levels reached
  in the scaling-limit experiments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

import numpy as np

from tacnode_lab._double import adaptive_double
from tacnode_lab.contours import (
    Circle,
    Inverted,
    KernelValue,
    RayPair,
    integrate_adaptive,
)

__all__ = [
    "GridPoint",
    "ModelParams",
    "KernelValue",
    "Singular",
    "Unsupported",
    "ContourConflict",
    "log_G",
    "kernel_finite",
    "chi_coeff_oracle",
    "recurrence_residuals",
]

SIGMA_ANGLE = 3 * math.pi / 8


class Singular(ValueError):
    """Evaluation at a singular point of the integrand."""


class Unsupported(ValueError):
    """Arguments outside the supported parameter range."""


class ContourConflict(ValueError):
    """Contour choices intersect or enclose the wrong singularities."""


@dataclass(frozen=True)
class GridPoint:
    """Lattice point (level m, doubled position x2 = 2x)."""

    m: int
    x2: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError(f"level must be >= 1, got {self.m}")
        if (self.x2 + self.m + 1) % 2 != 0:
            raise ValueError(
                f"x2={self.x2} is off the level-{self.m} lattice "
                f"(need x2 + m + 1 even)"
            )

    @property
    def x(self) -> float:
        return self.x2 / 2.0


@dataclass(frozen=True)
class ModelParams:
    """Jump-rate asymmetry eps_rate in (0,1) and elapsed time t >= 0."""

    eps_rate: float
    t: float

    def __post_init__(self):
        if not (0.0 < self.eps_rate < 1.0):
            raise ValueError(f"eps_rate must be in (0,1), got {self.eps_rate}")
        if self.t < 0.0:
            raise ValueError(f"t must be >= 0, got {self.t}")


def _exponents(m: int) -> tuple[int, int]:
    # powers of (1 - eps w) and (1 - eps/w) at level m
    return m // 2, (m + 1) // 2


def log_G(params: ModelParams, m: int, x: float, w):
    """Logarithm of the generating function at w.

    Integer exponents make the principal-branch logs exact after
    exponentiation, so no branch tracking is needed.  Vectorized over w.

    Raises
    ------
    Singular
        If w is 0, eps or 1/eps (scalar input only).
    """
    eps = params.eps_rate
    if np.isscalar(w) or np.asarray(w).ndim == 0:
        wc = complex(w)
        for bad in (0.0, eps, 1.0 / eps):
            if abs(wc - bad) < 1e-300 or (bad != 0 and abs(wc - bad) < 1e-14 * bad):
                raise Singular(f"log_G singular at w={wc}")
        w = wc
    b, c = _exponents(m)
    w = np.asarray(w, dtype=complex)
    out = (
        params.t * (w + 1.0 / w)
        + b * np.log(1.0 - eps * w)
        + c * np.log(1.0 - eps / w)
        + math.floor(x) * np.log(w)
    )
    return complex(out) if out.ndim == 0 else out


def chi_coeff_oracle(m1: int, m2: int, k: int, eps: float) -> float:
    """Coefficient of w^k in (1-eps w)^B (1-eps/w)^C with B, C the level
    exponent differences of (m1, m2).

    Independent binomial-convolution route used to cross-check the single
    contour integral and to build recurrence correction terms.

    Raises
    ------
    Unsupported
        If either exponent difference is negative (m1 < m2 cases).
    """
    b1, c1 = _exponents(m1)
    b2, c2 = _exponents(m2)
    B, C = b1 - b2, c1 - c2
    if B < 0 or C < 0:
        raise Unsupported(f"negative exponent differences B={B}, C={C}")
    total = 0.0
    for j in range(max(0, -k), C + 1):
        i = k + j
        if i < 0 or i > B:
            continue
        total += comb(B, i) * comb(C, j) * eps ** (i + j)
    # every surviving term carries (-1)^{i+j} = (-1)^k
    return -total if k % 2 else total


def _chi_single(p1: GridPoint, p2: GridPoint, params: ModelParams,
                contour: Circle, tol: float) -> KernelValue:
    """-1/(2 pi i) * oint (1-eps w)^{B} (1-eps/w)^{C} w^{X1-X2-1} dw."""
    eps = params.eps_rate
    b1, c1 = _exponents(p1.m)
    b2, c2 = _exponents(p2.m)
    B, C = b1 - b2, c1 - c2
    dX = math.floor(p1.x) - math.floor(p2.x)

    def f(w):
        return np.exp(
            B * np.log(1.0 - eps * w)
            + C * np.log(1.0 - eps / w)
            + (dX - 1) * np.log(w)
        )

    res = integrate_adaptive(f, contour, tol=tol)
    return KernelValue(-res.value / (2j * math.pi), res.err)


def _sigma_truncation(params: ModelParams, m: int, x: float,
                      anchor: float, angle: float) -> float:
    # The naive tail estimate e^{-t s cos(angle)} fails at large levels:
    # the pole-order growth (m/2) eps cancels the linear decay (that
    # cancellation is what the scaling window is built on), leaving only
    # quadratic decay.  Measure the actual z-side exponent along the ray
    # and its reciprocal petal instead of trusting either regime.
    t, eps = params.t, params.eps_rate
    b, c = _exponents(m)
    X = math.floor(x)
    direction = complex(math.cos(angle), math.sin(angle))

    def log_mag(s: float) -> float:
        u = anchor + s * direction
        worst = -math.inf
        for z in (u, 1.0 / u):
            val = (
                -t * (z + 1.0 / z)
                - b * complex(np.log(1.0 - eps * z))
                - c * complex(np.log(1.0 - eps / z))
                - X * complex(np.log(z))
            ).real
            worst = max(worst, val)
        return worst

    peak = max(log_mag(s) for s in (0.0, 0.5, 1.0, 2.0, 4.0, 6.0))
    T = 6.0
    while T < 1e4:
        d = log_mag(T)
        peak = max(peak, d)
        if d <= peak - 50.0:
            break
        T *= 1.25
    return T


def _sigma_contours(params: ModelParams, m: int, x: float,
                    anchor: float | None = None):
    eps = params.eps_rate
    if params.t <= 0.0:
        raise ContourConflict("sigma scheme needs t > 0 for tail decay")
    if anchor is None:
        anchor = 2.0 if 1.0 / eps > 2.5 else (1.0 + 1.0 / eps) / 2.0
    if anchor * math.sin(SIGMA_ANGLE) <= 1.0:
        raise ContourConflict("ray pair would intersect the unit circle")
    if anchor >= 1.0 / eps:
        raise ContourConflict("ray pair must cross the axis left of 1/eps")
    T = _sigma_truncation(params, m, x, anchor, SIGMA_ANGLE)
    sigma = RayPair(anchor=anchor, angle=SIGMA_ANGLE, truncation=T)
    return sigma, Inverted(sigma)


def kernel_finite(
    p1: GridPoint,
    p2: GridPoint,
    params: ModelParams,
    scheme: str = "deformed",
    tol: float = 1e-10,
    gamma0_radius: float | None = None,
    eps_circle_radius: float | None = None,
) -> KernelValue:
    """Finite-time kernel K(p1; p2).

    Parameters
    ----------
    p1, p2 :
        Grid points (level, doubled position).
    params :
        Rate asymmetry and time.
    scheme :
        "original", "deformed" or "sigma" contour layout.
    tol :
        Quadrature refinement target.
    gamma0_radius :
        Override for the small w-circle of the original scheme.
    eps_circle_radius :
        Override for the z-circle around eps of the deformed scheme.

    Returns
    -------
    KernelValue
        Kernel value with propagated quadrature error estimate.
    """
    eps = params.eps_rate

    def logw(w):
        return log_G(params, p1.m, p1.x, w)

    def logz(z):
        return -log_G(params, p2.m, p2.x, z) - np.log(z)

    if scheme == "original":
        r0 = eps / 2.0 if gamma0_radius is None else gamma0_radius
        if not (0.0 < r0 < eps):
            raise ContourConflict(f"w-circle radius {r0} must lie in (0, eps)")
        joint_r = (1.0 / eps - eps) / 2.0 + eps / 4.0
        joint = Circle((eps + 1.0 / eps) / 2.0, joint_r)
        inner_reach = (eps + 1.0 / eps) / 2.0 - joint_r
        if r0 >= inner_reach:
            raise ContourConflict("w-circle intersects the joint z-circle")
        w_contour = Circle(0.0, r0)
        z_parts = [(joint, 1.0)]
    elif scheme == "deformed":
        w_contour = Circle(0.0, 1.0)
        r_eps = min(eps, 1.0 - eps) / 2.0 if eps_circle_radius is None else eps_circle_radius
        if not (0.0 < r_eps < min(eps, 1.0 - eps)):
            raise ContourConflict(
                f"eps-circle radius {r_eps} must keep 0 outside and stay inside |z|=1"
            )
        z_parts = [
            (Circle(eps, r_eps), 1.0),
            (Circle(1.0 / eps, (1.0 / eps - 1.0) / 2.0), 1.0),
        ]
    elif scheme == "sigma":
        w_contour = Circle(0.0, 1.0)
        sigma, petal = _sigma_contours(params, p2.m, p2.x)
        # the closed circles around eps and 1/eps are equivalent to the ray
        # pair and its petal traversed downward, hence the -1 signs
        z_parts = [(sigma, -1.0), (petal, -1.0)]
    else:
        raise ValueError(f"unknown scheme {scheme!r}")

    double = adaptive_double(logw, w_contour, logz, z_parts, tol=tol)

    if p1.m < p2.m:
        chi = _chi_single(p1, p2, params, w_contour, tol)
        return KernelValue(chi.value + double.value, chi.err + double.err)
    return double


def _k(x2: int, m: int, params: ModelParams, y2: int, mm: int, scheme: str, tol: float):
    return kernel_finite(GridPoint(m, x2), GridPoint(mm, y2), params, scheme, tol).value


def recurrence_residuals(
    x: float,
    y: float,
    n: int,
    m: int,
    params: ModelParams,
    tol: float = 1e-10,
    scheme: str = "deformed",
    correction: str = "derived",
) -> list[float]:
    """Residuals of the two level recurrences at (x, n; y, m).

    Both recurrences move one argument by two levels and mix three adjacent
    positions; at level gap n = m - 2 a contact term appears.  The contact
    term is evaluated through chi_coeff_oracle with prefactor 1/(2 pi i):
    with ``correction="derived"`` the coefficient is taken at matching levels
    (exponent differences zero, a bare Kronecker delta); ``"printed"`` keeps
    the level-gap-2 exponents instead, which the residuals expose as wrong.

    Returns
    -------
    list of float
        [residual of the level-raising recurrence,
         residual of the level-lowering recurrence].
    """
    eps = params.eps_rate
    x2, y2 = int(round(2 * x)), int(round(2 * y))
    if correction == "derived":
        contact = chi_coeff_oracle(m, m, int(math.floor(y) - math.floor(x)), eps)
    elif correction == "printed":
        contact = chi_coeff_oracle(m + 2, m, int(math.floor(y) - math.floor(x)), eps)
    else:
        raise ValueError(f"unknown correction {correction!r}")
    delta = contact if n == m - 2 else 0.0

    cache: dict[tuple[int, int, int, int], complex] = {}

    def k(a2, lev, b2, lev2):
        key = (a2, lev, b2, lev2)
        if key not in cache:
            cache[key] = _k(a2, lev, params, b2, lev2, scheme, tol)
        return cache[key]

    lhs1 = k(x2, n + 2, y2, m)
    rhs1 = (
        (1.0 + eps * eps) * k(x2, n, y2, m)
        - eps * (k(x2 + 2, n, y2, m) + k(x2 - 2, n, y2, m))
        + delta
    )
    lhs2 = k(x2, n, y2, m - 2) if m - 2 >= 1 else None
    res = [abs(lhs1 - rhs1)]
    if lhs2 is not None:
        rhs2 = (
            (1.0 + eps * eps) * k(x2, n, y2, m)
            - eps * (k(x2, n, y2 + 2, m) + k(x2, n, y2 - 2, m))
            + delta
        )
        res.append(abs(lhs2 - rhs2))
    return res
