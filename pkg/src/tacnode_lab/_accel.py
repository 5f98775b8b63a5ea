"""Optional numba acceleration with a pure-numpy fallback.

Set TACNODE_NUMBA=0 to force the fallback path.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("TACNODE_NUMBA", "1") == "0"

try:
    if _DISABLED:
        raise ImportError("numba disabled via TACNODE_NUMBA=0")
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


def _cauchy_sum_numpy(A: np.ndarray, w: np.ndarray, B: np.ndarray, z: np.ndarray) -> complex:
    """sum_ij A_i B_j / (w_i - z_j), chunked over z columns."""
    total = 0.0 + 0.0j
    block = 256
    for j0 in range(0, z.size, block):
        zb = z[j0:j0 + block]
        Bb = B[j0:j0 + block]
        # (n_w, b) difference matrix per chunk keeps memory bounded
        col = A @ (1.0 / (w[:, None] - zb[None, :]))
        total += col @ Bb
    return total


@njit(cache=True)
def _cauchy_sum_jit(A, w, B, z):  # pragma: no cover - exercised when numba is on
    total = 0.0 + 0.0j
    for i in range(w.shape[0]):
        acc = 0.0 + 0.0j
        wi = w[i]
        for j in range(z.shape[0]):
            acc += B[j] / (wi - z[j])
        total += A[i] * acc
    return total


def cauchy_double_sum(A: np.ndarray, w: np.ndarray, B: np.ndarray, z: np.ndarray) -> complex:
    """Separable double-contour sum sum_ij A_i B_j / (w_i - z_j)."""
    if HAS_NUMBA:
        return complex(_cauchy_sum_jit(
            np.ascontiguousarray(A, dtype=np.complex128),
            np.ascontiguousarray(w, dtype=np.complex128),
            np.ascontiguousarray(B, dtype=np.complex128),
            np.ascontiguousarray(z, dtype=np.complex128),
        ))
    return complex(_cauchy_sum_numpy(A, w, B, z))


def _events_py(pos, tri, lev, idx, pright, waits, upart, udir, t, t_end, M):
    """Apply pre-drawn events to the flat position array until t_end.

    Returns (time, events consumed, finished flag).  Block and push rules:
    a right jump of particle k on level m is blocked when the k-th particle
    one level down sits a half-step right of it, and otherwise drags the
    maximal diagonal chain (m+l, k+l) sitting at pre-jump offsets l/2; the
    left rule mirrors it with the (k-1)-th particle below and the straight
    chain (m+l, k).
    """
    n = pos.shape[0]
    nb = waits.shape[0]
    for i in range(nb):
        t += waits[i]
        if t > t_end:
            return t, i + 1, True
        j = int(upart[i] * n)
        if j >= n:
            j = n - 1
        m = lev[j]
        k = idx[j]
        x2 = pos[j]
        if udir[i] < pright[j]:
            if k <= m - 1 and pos[tri[m - 2] + k - 1] == x2 + 1:
                continue
            pos[j] = x2 + 2
            l = 1
            while m + l <= M:
                s = tri[m + l - 1] + (k + l - 1)
                if pos[s] != x2 + l:
                    break
                pos[s] += 2
                l += 1
        else:
            if k >= 2 and pos[tri[m - 2] + k - 2] == x2 - 1:
                continue
            pos[j] = x2 - 2
            l = 1
            while m + l <= M:
                s = tri[m + l - 1] + (k - 1)
                if pos[s] != x2 - l:
                    break
                pos[s] -= 2
                l += 1
    return t, nb, False


_events_jit = njit(cache=True)(_events_py)


def consume_events(pos, tri, lev, idx, pright, waits, upart, udir, t, t_end, M):
    """Dispatch one batch of events to the jitted or fallback loop."""
    if HAS_NUMBA:
        return _events_jit(pos, tri, lev, idx, pright, waits, upart, udir,
                           float(t), float(t_end), M)
    return _events_py(pos, tri, lev, idx, pright, waits, upart, udir,
                      float(t), float(t_end), M)
