"""Tacnode scaling limit of the finite-time kernel.

Arguments live in the scaling window: integer positions x and real section
parameters mu.  The kernel is

    K(x1,mu1; x2,mu2) = -chi_{mu1<mu2} I_{x2-x1}(2 eps (mu2-mu1))
      + (1/(2 pi i)^2) oint_{|w|=1} int_{Sigma u Sigma^{-1}}
        e^{eps mu2 (z+1/z) + (eps^2/2)(z+1/z)^2} w^{x1}
        / ( e^{eps mu1 (w+1/w) + (eps^2/2)(w+1/w)^2} z^{x2} )
        dz dw / (z (w - z))

with Sigma a truncated ray pair crossing the positive axis right of 1 and
Sigma^{-1} its reciprocal petal inside the unit circle.  The closed-circle
form of the z-integral corresponds to the ray pair traversed downward (the
deformation of a counterclockwise circle opens toward +infinity with the
axis crossing moving down), so the z-side enters with a -1 orientation
factor relative to the upward node convention of the contour library.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

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
    "TacnodePoint",
    "TacnodeParams",
    "chi_term_bessel",
    "chi_term_quadrature",
    "kernel_tacnode",
    "endpoint_kernel",
]

_DEFAULT_ANGLE = 3 * math.pi / 8


@dataclass(frozen=True)
class TacnodePoint:
    """Window point: integer position x, real section parameter mu."""

    x: int
    mu: float


@dataclass(frozen=True)
class TacnodeParams:
    """Window scale eps_tac > 0 plus quadrature and contour settings."""

    eps_tac: float
    tol: float = 1e-10
    sigma_anchor: float = 2.0
    sigma_angle: float = _DEFAULT_ANGLE
    n0: int = 64
    n_max: int = 8192

    def __post_init__(self):
        if not (self.eps_tac > 0):
            raise ValueError(f"eps_tac must be positive, got {self.eps_tac}")
        if not (math.pi / 4 < self.sigma_angle < math.pi / 2):
            raise ValueError("sigma_angle must lie in (pi/4, pi/2)")
        if self.sigma_anchor * math.sin(self.sigma_angle) <= 1.0:
            raise ValueError("ray pair would touch the unit w-circle")


def chi_term_bessel(k: int, a: float) -> float:
    """Modified Bessel value I_k(2a) by its power series.

    Series route independent of any quadrature: I_k(2a) =
    sum_j a^(|k|+2j) / (j! (|k|+j)!), I_{-k} = I_k.

    Parameters
    ----------
    k : order (any integer sign).
    a : half the argument, a >= 0.
    """
    if a < 0:
        raise ValueError(f"need a >= 0, got {a}")
    k = abs(k)
    if a == 0.0:
        return 1.0 if k == 0 else 0.0
    term = a**k / math.factorial(k)
    total = term
    j = 0
    while True:
        j += 1
        term *= a * a / (j * (k + j))
        total += term
        if term < 1e-18 * total and j > a:
            return total


def chi_term_quadrature(k: int, a: float, tol: float = 1e-12) -> KernelValue:
    """Same Bessel value through the unit-circle contour integral."""

    def f(w):
        return np.exp(a * (w + 1.0 / w) - (k + 1) * np.log(w))

    res = integrate_adaptive(f, Circle(0.0, 1.0), tol=tol)
    return KernelValue(res.value / (2j * math.pi), res.err)


def _sigma_truncation(params: TacnodeParams, mu2: float, x2: int) -> float:
    eps = params.eps_tac
    alpha = params.sigma_angle
    quad = 0.5 * eps * eps * abs(math.cos(2 * alpha))
    lin = (
        eps * eps * params.sigma_anchor * abs(math.cos(alpha))
        + abs(eps * mu2) * abs(math.cos(alpha))
    )
    target = 50.0 + 2.0 * abs(x2)
    T = (lin + math.sqrt(lin * lin + 4 * quad * target)) / (2 * quad)
    return max(6.0, T)


def kernel_tacnode(
    a: TacnodePoint,
    b: TacnodePoint,
    params: TacnodeParams,
    log_scale: float = 0.0,
) -> KernelValue:
    """Tacnode kernel K(a; b).

    Parameters
    ----------
    a, b :
        Window points (x integer, mu real).
    params :
        Window scale and contour settings.
    log_scale :
        Optional log prefactor folded into the final exponential; used by
        the degeneration experiments to keep scaled values in float range.

    Returns
    -------
    KernelValue
        Kernel value and propagated quadrature error estimate.
    """
    eps = params.eps_tac
    x1, mu1 = a.x, a.mu
    x2, mu2 = b.x, b.mu

    chi_val = 0.0
    chi_err = 0.0
    if mu1 < mu2:
        chi_val = -chi_term_bessel(x2 - x1, eps * (mu2 - mu1)) * math.exp(log_scale)

    def logw(w):
        s = w + 1.0 / w
        return x1 * np.log(w) - (eps * mu1 * s + 0.5 * eps * eps * s * s)

    def logz(z):
        s = z + 1.0 / z
        return eps * mu2 * s + 0.5 * eps * eps * s * s - (x2 + 1) * np.log(z)

    T = _sigma_truncation(params, mu2, x2)
    sigma = RayPair(anchor=params.sigma_anchor, angle=params.sigma_angle, truncation=T)
    z_parts = [(sigma, -1.0), (Inverted(sigma), -1.0)]
    double = adaptive_double(
        logw, Circle(0.0, 1.0), logz, z_parts,
        tol=params.tol, n0=params.n0, n_max=params.n_max, log_scale=log_scale,
    )
    return KernelValue(chi_val + double.value, chi_err + double.err)


def endpoint_kernel(
    a: TacnodePoint, b: TacnodePoint, params: TacnodeParams
) -> KernelValue:
    """Kernel of the endpoint (top particle per section) point process:
    eps * (K(x_a - 1, mu_a; b) + K(x_a + 1, mu_a; b))."""
    eps = params.eps_tac
    left = kernel_tacnode(TacnodePoint(a.x - 1, a.mu), b, params)
    right = kernel_tacnode(TacnodePoint(a.x + 1, a.mu), b, params)
    return KernelValue(
        eps * (left.value + right.value), eps * (left.err + right.err)
    )
