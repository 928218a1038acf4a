"""Pure numpy versions of the enumeration kernels.

Same signatures and output ordering as the compiled ``_ckernels``.
"""
import numpy as np

_CHUNK = 1 << 14


def norm_rows(z, kind, p):
    """Row-wise norm of a 2-d array; ``kind`` 0 is l_p, 1 is sup."""
    a = np.abs(z)
    if kind == 1:
        return a.max(axis=-1) if a.shape[-1] else np.zeros(a.shape[:-1])
    if p == 1.0:
        return a.sum(axis=-1)
    if p == 2.0:
        return np.sqrt((a * a).sum(axis=-1))
    return (a ** p).sum(axis=-1) ** (1.0 / p)


def gray_signs(idx, n):
    """Sign matrix for Gray-order indices; column 0 is always +1."""
    idx = np.asarray(idx, dtype=np.int64)
    g = idx ^ (idx >> 1)
    bits = (g[:, None] >> np.arange(n - 1, dtype=np.int64)) & 1
    signs = np.ones((idx.size, n))
    signs[:, 1:] = 1.0 - 2.0 * bits
    return signs


def torus_steps(idx, n, m):
    """Angle-step matrix for odometer indices; column 0 is always 0."""
    idx = np.asarray(idx, dtype=np.int64)
    steps = np.zeros((idx.size, n), dtype=np.int64)
    rest = idx.copy()
    for j in range(1, n):
        steps[:, j] = rest % m
        rest //= m
    return steps


def vertex_norms(re, im, kind, p):
    v = np.asarray(re) + 1j * np.asarray(im)
    n = v.shape[0]
    count = 1 << (n - 1)
    out = np.empty(count)
    for start in range(0, count, _CHUNK):
        idx = np.arange(start, min(count, start + _CHUNK))
        out[idx] = norm_rows(gray_signs(idx, n) @ v, kind, p)
    return out


def torus_norms(re, im, kind, p, m):
    v = np.asarray(re) + 1j * np.asarray(im)
    n = v.shape[0]
    count = m ** (n - 1)
    roots = np.exp(2j * np.pi * np.arange(m) / m)
    out = np.empty(count)
    for start in range(0, count, _CHUNK):
        idx = np.arange(start, min(count, start + _CHUNK))
        out[idx] = norm_rows(roots[torus_steps(idx, n, m)] @ v, kind, p)
    return out
