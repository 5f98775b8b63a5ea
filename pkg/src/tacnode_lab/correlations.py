"""Determinantal correlation functions built from kernel evaluations.

rho(X) = det[K(x, y)]_{x,y in X} for a finite point set X.  The module is
kernel-agnostic: any callable (p1, p2) -> value works, where value may be a
plain complex number or a KernelValue carrying a quadrature error estimate.
Errors propagate to the determinant through a first-order cofactor bound.

Endpoint correlations of the interlacing process (a particle present at an
odd level m with the site directly below at level m+2 empty) come from a
complemented 2N x 2N block determinant assembled out of finite-kernel
evaluations at levels m and m+2.
"""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from tacnode_lab.contours import KernelValue
from tacnode_lab.finite_kernel import GridPoint, ModelParams, kernel_finite

__all__ = [
    "RhoValue",
    "rho",
    "complement_kernel",
    "endpoint_block_rho",
]

log = logging.getLogger(__name__)

Kernel = Callable[[object, object], object]


@dataclass(frozen=True)
class RhoValue:
    """Correlation value: real part, imaginary residual, error bound."""

    value: float
    imag: float
    err: float


def _value_err(out) -> tuple[complex, float]:
    if isinstance(out, KernelValue):
        return out.value, out.err
    return complex(out), 0.0


def _point_key(p):
    # canonical sort key: field tuple for dataclass points, identity else
    if dataclasses.is_dataclass(p):
        return dataclasses.astuple(p)
    return p


def _canonical_points(points: Sequence) -> list:
    seen = {}
    for p in points:
        seen.setdefault(_point_key(p), p)
    return [seen[k] for k in sorted(seen)]


def _det_with_bound(mat: np.ndarray, errs: np.ndarray) -> tuple[complex, float]:
    """Determinant plus first-order perturbation bound sum |C_ij| err_ij."""
    det = complex(np.linalg.det(mat))
    if not np.any(errs):
        return det, 0.0
    n = mat.shape[0]
    bound = 0.0
    for i in range(n):
        for j in range(n):
            if errs[i, j] == 0.0:
                continue
            minor = np.delete(np.delete(mat, i, axis=0), j, axis=1)
            bound += errs[i, j] * abs(np.linalg.det(minor))
    return det, bound


def rho(points: Sequence, kernel: Kernel) -> RhoValue:
    """Correlation function rho(X) = det[K(p_i, p_j)].

    Parameters
    ----------
    points :
        Argument tuples accepted by the kernel.  Duplicates are removed and
        the set is put in canonical order before evaluation, since a
        determinant with repeated points is identically zero but numerically
        noisy.
    kernel :
        Callable (p1, p2) -> complex or KernelValue.

    Returns
    -------
    RhoValue
        Real part of the determinant; the imaginary residual is kept as a
        diagnostic and a warning is logged when it exceeds the propagated
        error bound.
    """
    pts = _canonical_points(points)
    n = len(pts)
    if n == 0:
        return RhoValue(1.0, 0.0, 0.0)
    mat = np.empty((n, n), dtype=complex)
    errs = np.zeros((n, n), dtype=float)
    for i, a in enumerate(pts):
        for j, b in enumerate(pts):
            mat[i, j], errs[i, j] = _value_err(kernel(a, b))
    det, bound = _det_with_bound(mat, errs)
    imag = abs(det.imag)
    if imag > max(bound, 1e-12) * 10.0:
        log.warning("rho imaginary residual %.3e exceeds error bound %.3e",
                    imag, bound)
    return RhoValue(det.real, imag, bound)


def complement_kernel(kernel: Kernel) -> Kernel:
    """Kernel of the complementary (hole) process, delta(p1, p2) - K(p1, p2)."""

    def comp(p1, p2):
        delta = 1.0 if p1 == p2 else 0.0
        val, err = _value_err(kernel(p1, p2))
        return KernelValue(delta - val, err)

    return comp


def endpoint_block_rho(
    points: Sequence[GridPoint],
    params: ModelParams,
    tol: float = 1e-9,
    scheme: str = "deformed",
) -> RhoValue:
    """Probability that every point of `points` is an endpoint.

    A grid point (m, x2) with m odd is an endpoint when the site is occupied
    at level m and the same position is empty at level m + 2.  Complementing
    the second event turns the mixed correlation into one determinant of the
    2N x 2N block matrix

        [ K(p_i; p_j)        -K(p_i^; p_j)      ]
        [ K(p_i; p_j^)   I - K(p_i^; p_j^)      ]

    where p^ denotes the point moved down two levels (m + 2, same position).

    Parameters
    ----------
    points :
        Distinct grid points, all at odd levels.
    params :
        Rate asymmetry and time of the finite kernel.
    tol :
        Quadrature tolerance passed through to each kernel evaluation.
    scheme :
        Contour scheme for the finite kernel.

    Returns
    -------
    RhoValue
        Real part of the block determinant with propagated error bound.
    """
    pts = _canonical_points(points)
    for p in pts:
        if p.m % 2 == 0:
            raise ValueError(f"endpoint levels must be odd, got m={p.m}")
    below = [GridPoint(p.m + 2, p.x2) for p in pts]
    n = len(pts)
    mat = np.zeros((2 * n, 2 * n), dtype=complex)
    errs = np.zeros((2 * n, 2 * n), dtype=float)

    def put(i, j, a, b, sign, shift):
        kv = kernel_finite(a, b, params, scheme=scheme, tol=tol)
        mat[i, j] = shift + sign * kv.value
        errs[i, j] = kv.err

    for i in range(n):
        for j in range(n):
            put(i, j, pts[i], pts[j], 1.0, 0.0)
            put(i, n + j, below[i], pts[j], -1.0, 0.0)
            put(n + i, j, pts[i], below[j], 1.0, 0.0)
            put(n + i, n + j, below[i], below[j], -1.0,
                1.0 if i == j else 0.0)
    det, bound = _det_with_bound(mat, errs)
    imag = abs(det.imag)
    if imag > max(bound, 1e-12) * 10.0:
        log.warning("endpoint rho imaginary residual %.3e exceeds bound %.3e",
                    imag, bound)
    return RhoValue(det.real, imag, bound)
