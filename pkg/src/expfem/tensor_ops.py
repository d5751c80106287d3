"""Dense tensor kernels: mode-k matrix products and entrywise maps.

Nodal fields and their transformed coefficients are plain C-contiguous
float64 arrays of rank 1 to 3.  All operations here are pure; inputs are
never modified.
"""

import numpy as np

MAX_RANK = 3


def _as_tensor(a):
    t = np.asarray(a, dtype=float)
    if not 1 <= t.ndim <= MAX_RANK:
        raise ValueError(f"tensor rank must be between 1 and {MAX_RANK}, got {t.ndim}")
    return t


def mode_multiply(matrix, tensor, axis):
    """Apply a square matrix to every line of `tensor` along `axis`.

    Returns a fresh tensor of the same shape; per-line summation order is
    fixed by the underlying dot product, so results are deterministic.
    """
    u = _as_tensor(tensor)
    m = np.asarray(matrix, dtype=float)
    if not 0 <= axis < u.ndim:
        raise ValueError(f"axis {axis} out of range for rank-{u.ndim} tensor")
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[1] != u.shape[axis]:
        raise ValueError(
            f"matrix side {m.shape[1]} does not match extent "
            f"{u.shape[axis]} of axis {axis}"
        )
    out = np.tensordot(m, u, axes=(1, axis))
    return np.ascontiguousarray(np.moveaxis(out, 0, axis))


def hadamard(a, b):
    """Entrywise product of two equally shaped tensors."""
    ta, tb = _as_tensor(a), _as_tensor(b)
    if ta.shape != tb.shape:
        raise ValueError(f"shape mismatch: {ta.shape} vs {tb.shape}")
    return ta * tb


def exp_entrywise(a):
    """Entrywise exponential e^{a_i}."""
    return np.exp(np.asarray(a, dtype=float))
