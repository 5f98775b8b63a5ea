"""Shared evaluator for the double contour integrals of the kernels.

Every kernel's double integral has the separable shape

    (1/(2 pi i)^2) int_W dw int_Z dz  e^{logw(w) - logz_den(z)} / (w - z)

optionally with an extra 1/z measure folded into the z-side log.  The sum
factorizes through the Cauchy matrix 1/(w_i - z_j); both sides are shifted by
the maximum real part of their logs so the summation stays in float range,
and the shifts are restored in a single final exponential together with any
external log-scale prefactor.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from tacnode_lab._accel import cauchy_double_sum
from tacnode_lab.contours import Contour, KernelValue, NonFinite, _node_arrays

logger = logging.getLogger(__name__)

_FOUR_PI_SQ = (2j * math.pi) ** 2


def _eval_double(logw_fn, w_contour, logz_fn, z_parts, n, log_scale):
    w_pts, w_wts = _node_arrays(w_contour, n)
    lw = np.asarray(logw_fn(w_pts))
    z_pts_list, z_wts_list = [], []
    for contour, sign in z_parts:
        zp, zw = _node_arrays(contour, n)
        z_pts_list.append(zp)
        z_wts_list.append(sign * zw)
    z_pts = np.concatenate(z_pts_list)
    z_wts = np.concatenate(z_wts_list)
    lz = np.asarray(logz_fn(z_pts))
    if np.any(np.isnan(lw)) or np.any(np.isnan(lz)):
        raise NonFinite("kernel integrand log is nan on a quadrature node")
    cw = float(np.max(lw.real))
    cz = float(np.max(lz.real))
    A = w_wts * np.exp(lw - cw)
    B = z_wts * np.exp(lz - cz)
    S = cauchy_double_sum(A, w_pts, B, z_pts)
    return np.exp(cw + cz + log_scale) * S / _FOUR_PI_SQ


def adaptive_double(
    logw_fn,
    w_contour: Contour,
    logz_fn,
    z_parts: list[tuple[Contour, float]],
    tol: float = 1e-10,
    n0: int = 64,
    n_max: int = 8192,
    log_scale: float = 0.0,
) -> KernelValue:
    """Adaptive evaluation of a separable double contour integral.

    z_parts is a list of (contour, sign) pairs; sign -1 flips the stated
    traversal of that contour.  Refinement doubles the node budget of every
    contour jointly until two successive evaluations agree to tol.  On budget
    exhaustion the last value is returned with the (honest, large) remaining
    difference as its error estimate.
    """
    prev = _eval_double(logw_fn, w_contour, logz_fn, z_parts, n0, log_scale)
    n = 2 * n0
    last_diff = float("inf")
    while n <= n_max:
        cur = _eval_double(logw_fn, w_contour, logz_fn, z_parts, n, log_scale)
        last_diff = abs(cur - prev)
        if not np.isfinite(cur):
            raise NonFinite("double integral evaluated to a non-finite value")
        if last_diff <= tol:
            return KernelValue(complex(cur), last_diff)
        prev = cur
        n *= 2
    logger.warning("double integral stalled at n=%d, last diff %.3e", n // 2, last_diff)
    return KernelValue(complex(prev), last_diff)
