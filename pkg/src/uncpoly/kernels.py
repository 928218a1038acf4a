"""Backend selection for the enumeration kernels.

The compiled extension is used when it imports; otherwise the numpy
implementation takes over.  ``use_backend`` switches explicitly (tests and
the benchmark exercise both).
"""
import numpy as np

from . import _pykernels
from ._pykernels import gray_signs, norm_rows, torus_steps

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

_active = _BACKENDS.get("cython", _pykernels)

__all__ = [
    "available_backends",
    "backend_name",
    "gray_signs",
    "norm_rows",
    "torus_norms",
    "torus_steps",
    "use_backend",
    "vertex_norms",
]


def available_backends():
    return sorted(_BACKENDS)


def backend_name():
    return "cython" if _active is _ckernels and _ckernels is not None else "python"


def use_backend(name):
    """Select ``"cython"`` or ``"python"``; returns the previous name."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available; have {available_backends()}")
    previous = backend_name()
    _active = _BACKENDS[name]
    return previous


def _split(v):
    v = np.asarray(v)
    re = np.ascontiguousarray(v.real, dtype=np.float64)
    im = np.ascontiguousarray(v.imag if np.iscomplexobj(v) else np.zeros_like(re), dtype=np.float64)
    return re, im


def vertex_norms(v, kind, p):
    """Norms of sum_j s_j v_j for s in {±1}^N with s_0 = +1 (Gray order)."""
    re, im = _split(v)
    return np.asarray(_active.vertex_norms(re, im, int(kind), float(p)))


def torus_norms(v, kind, p, m):
    """Norms over the angular grid with the first angle pinned to 0."""
    re, im = _split(v)
    return np.asarray(_active.torus_norms(re, im, int(kind), float(p), int(m)))
