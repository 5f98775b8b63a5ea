"""Contour descriptions and adaptive quadrature on them.

Supported contour shapes:

* ``Circle``: closed circle, traversed counterclockwise, spectral trapezoid
  rule.
* ``RayPair``: two rays leaving a real anchor at angles -angle and +angle,
  truncated at arclength ``truncation``; traversed from the lower tail to the
  upper tail.  Used for the right-half-plane contour of the scaling kernels.
* ``Inverted``: image of a base contour under z -> 1/z with the induced
  weights (the pullback petal through the origin).
* ``Cross``: four rays through the origin at angles +-angle, pi -+ angle,
  truncated; traversal follows the incoming upper-right / outgoing upper-left
  and incoming lower-left / outgoing lower-right convention.
* ``VerticalLine``: segment offset + i s, s in [-truncation, truncation],
  traversed upward.

Open contours use composite 16-point Gauss-Legendre panels; panel meshes on
contours through the origin are geometrically graded toward it so that a
nearby Cauchy factor 1/(w - z) stays resolved.  Circles use the periodic
trapezoid rule, which is spectrally accurate for analytic integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from numpy.polynomial.legendre import leggauss


class ContourError(ValueError):
    """Invalid contour description or node request."""


class NonConvergence(RuntimeError):
    """Adaptive refinement hit the node budget before reaching tolerance."""

    def __init__(self, n: int, last_diff: float, value: complex):
        super().__init__(f"no convergence at n={n}, last refinement diff {last_diff:.3e}")
        self.n = n
        self.last_diff = last_diff
        self.value = value


class NonFinite(RuntimeError):
    """Integrand produced nan/inf at a quadrature node."""


@dataclass(frozen=True)
class Circle:
    center: complex
    radius: float

    def __post_init__(self):
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ContourError(f"circle radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class RayPair:
    anchor: float
    angle: float
    truncation: float

    def __post_init__(self):
        if not (math.pi / 4 < self.angle < math.pi / 2):
            raise ContourError(f"ray angle must lie in (pi/4, pi/2), got {self.angle}")
        if self.truncation < 0:
            raise ContourError("truncation must be nonnegative")


@dataclass(frozen=True)
class Cross:
    truncation: float
    angle: float = math.pi / 4

    def __post_init__(self):
        if not (0 < self.angle < math.pi / 2):
            raise ContourError(f"cross angle must lie in (0, pi/2), got {self.angle}")
        if self.truncation < 0:
            raise ContourError("truncation must be nonnegative")


@dataclass(frozen=True)
class VerticalLine:
    offset: float
    truncation: float

    def __post_init__(self):
        if self.truncation < 0:
            raise ContourError("truncation must be nonnegative")


@dataclass(frozen=True)
class Inverted:
    base: "Contour"

    def __post_init__(self):
        if isinstance(self.base, Circle):
            raise ContourError("inversion of a circle is not supported")
        if isinstance(self.base, Inverted):
            raise ContourError("nested inversion is not supported")


Contour = Union[Circle, RayPair, Cross, VerticalLine, Inverted]


@dataclass(frozen=True)
class QuadNode:
    point: complex
    weight: complex


_GL_POINTS, _GL_WEIGHTS = leggauss(16)
_PANEL_SIZE = 16
# deepest geometric refinement toward the origin endpoint of a graded segment
_MAX_GRADE_LEVELS = 12


def _graded_edges(T: float, panels: int) -> np.ndarray:
    """Panel edges on [0, T], geometrically refined toward 0."""
    if T == 0.0:
        return np.array([0.0, 0.0])
    if panels <= 1:
        return np.array([0.0, T])
    levels = min(panels - 1, _MAX_GRADE_LEVELS)
    edges = [0.0] + [T * 2.0 ** (-k) for k in range(levels, -1, -1)]
    edges = np.array(edges)
    if panels > levels + 1:
        # spend the remaining budget subdividing every panel uniformly
        q = int(math.ceil(panels / (levels + 1)))
        refined = [edges[0]]
        for a, b in zip(edges[:-1], edges[1:]):
            refined.extend(np.linspace(a, b, q + 1)[1:])
        edges = np.array(refined)
    return edges


def _uniform_edges(T: float, panels: int) -> np.ndarray:
    if T == 0.0:
        return np.array([0.0, 0.0])
    return np.linspace(0.0, T, max(panels, 1) + 1)


def _panel_nodes(edges: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights on the given panel edges."""
    a = edges[:-1]
    b = edges[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    s = (mid[:, None] + half[:, None] * _GL_POINTS[None, :]).ravel()
    w = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    return s, w


def _segment(edges: np.ndarray, start: complex, direction: complex,
             flip: bool) -> tuple[np.ndarray, np.ndarray]:
    """Nodes for the path start + s*direction, s on [0, T] (reversed if flip)."""
    s, w = _panel_nodes(edges)
    pts = start + s * direction
    wts = w * direction
    if flip:
        return pts[::-1], -wts[::-1]
    return pts, wts


def _node_arrays(contour: Contour, n: int) -> tuple[np.ndarray, np.ndarray]:
    if n < 4:
        raise ContourError(f"need at least 4 nodes, got {n}")
    if isinstance(contour, Circle):
        theta = 2.0 * math.pi * np.arange(n) / n
        unit = np.exp(1j * theta)
        pts = contour.center + contour.radius * unit
        wts = (2j * math.pi * contour.radius / n) * unit
        return pts, wts
    if isinstance(contour, RayPair):
        per_ray = max(1, (n // 2) // _PANEL_SIZE)
        edges = _uniform_edges(contour.truncation, per_ray)
        lo = _segment(edges, contour.anchor, np.exp(-1j * contour.angle), flip=True)
        hi = _segment(edges, contour.anchor, np.exp(1j * contour.angle), flip=False)
        return np.concatenate([lo[0], hi[0]]), np.concatenate([lo[1], hi[1]])
    if isinstance(contour, VerticalLine):
        per_half = max(1, (n // 2) // _PANEL_SIZE)
        edges = _graded_edges(contour.truncation, per_half)
        lo = _segment(edges, complex(contour.offset), -1j, flip=True)
        hi = _segment(edges, complex(contour.offset), 1j, flip=False)
        return np.concatenate([lo[0], hi[0]]), np.concatenate([lo[1], hi[1]])
    if isinstance(contour, Cross):
        per_ray = max(1, (n // 4) // _PANEL_SIZE)
        edges = _graded_edges(contour.truncation, per_ray)
        a = contour.angle
        # branch 1: in from angle a, out to angle pi - a
        b1_in = _segment(edges, 0.0, np.exp(1j * a), flip=True)
        b1_out = _segment(edges, 0.0, np.exp(1j * (math.pi - a)), flip=False)
        # branch 2: in from angle -(pi - a), out to angle -a
        b2_in = _segment(edges, 0.0, np.exp(-1j * (math.pi - a)), flip=True)
        b2_out = _segment(edges, 0.0, np.exp(-1j * a), flip=False)
        pts = np.concatenate([b1_in[0], b1_out[0], b2_in[0], b2_out[0]])
        wts = np.concatenate([b1_in[1], b1_out[1], b2_in[1], b2_out[1]])
        return pts, wts
    if isinstance(contour, Inverted):
        pts, wts = _node_arrays(contour.base, n)
        if np.any(pts == 0):
            raise ContourError("base contour passes through 0, cannot invert")
        return 1.0 / pts, -wts / pts**2
    raise ContourError(f"unknown contour type {type(contour).__name__}")


def nodes(contour: Contour, n: int) -> list[QuadNode]:
    """Quadrature nodes for a contour.

    Parameters
    ----------
    contour :
        Contour description.
    n :
        Requested node budget (at least 4).  Open contours round it to whole
        Gauss-Legendre panels, so the actual count can differ slightly.

    Returns
    -------
    list of QuadNode
        Points and complex weights; sum(f(point) * weight) approximates the
        contour integral of f with the contour's stated orientation.
    """
    pts, wts = _node_arrays(contour, n)
    return [QuadNode(complex(p), complex(w)) for p, w in zip(pts, wts)]


@dataclass(frozen=True)
class KernelValue:
    """A complex value together with a numerical error estimate."""

    value: complex
    err: float

    def __post_init__(self):
        if self.err < 0:
            raise ValueError("error estimate must be nonnegative")


def _quad_once(f: Callable[[np.ndarray], np.ndarray], contour: Contour, n: int) -> complex:
    pts, wts = _node_arrays(contour, n)
    vals = np.asarray(f(pts))
    if not np.all(np.isfinite(vals)):
        raise NonFinite(f"integrand not finite on {type(contour).__name__} at n={n}")
    return complex(np.sum(vals * wts))


def integrate_adaptive(
    f: Callable[[np.ndarray], np.ndarray],
    contour: Contour,
    tol: float = 1e-10,
    n0: int = 64,
    n_max: int = 2**17,
) -> KernelValue:
    """Integrate f along a contour, doubling nodes until two successive
    refinements agree.

    Parameters
    ----------
    f :
        Vectorized integrand; called with an ndarray of contour points.
    contour :
        Contour description.
    tol :
        Absolute agreement target between successive refinements.
    n0, n_max :
        Initial and maximal node budgets.

    Returns
    -------
    KernelValue
        Converged value and the last refinement difference as error estimate.

    Raises
    ------
    NonConvergence
        If n_max is reached without two refinements agreeing to tol.
    NonFinite
        If the integrand evaluates to nan/inf at any node.
    """
    if n0 < 4:
        raise ContourError("n0 must be at least 4")
    prev = _quad_once(f, contour, n0)
    n = 2 * n0
    last_diff = float("inf")
    while n <= n_max:
        cur = _quad_once(f, contour, n)
        last_diff = abs(cur - prev)
        if last_diff <= tol:
            return KernelValue(cur, last_diff)
        prev = cur
        n *= 2
    raise NonConvergence(n // 2, last_diff, prev)
