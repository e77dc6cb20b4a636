"""Backend selection for the bitmask kernels.

The compiled extension handles presheaves with at most 64 points; anything
larger, or a missing extension, falls back to the pure-Python module.
"""
from array import array

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

COMPILED_AVAILABLE = _ckernels is not None
WORD_BITS = 64

LOAD_VAR, LOAD_CONST, AND, OR, NEG, IMP, EQ = range(7)
HEYTING, COHEYTING, STAR = range(3)


def select(npoints, prefer="auto"):
    """Kernel module for a presheaf with ``npoints`` points."""
    if prefer not in ("auto", "python", "cython"):
        raise ValueError(f"unknown backend {prefer!r}")
    if prefer == "python":
        return _pykernels
    fits = npoints <= WORD_BITS
    if prefer == "cython":
        if not COMPILED_AVAILABLE:
            raise RuntimeError("compiled kernels are not built")
        if not fits:
            raise RuntimeError(f"{npoints} points do not fit a {WORD_BITS}-bit mask")
        return _ckernels
    return _ckernels if (COMPILED_AVAILABLE and fits) else _pykernels


def mask_array(values, compiled):
    return array("Q", values) if compiled else tuple(values)


def word_array(values, compiled):
    return array("q", values) if compiled else tuple(values)


def backend_name(module):
    return module.NAME
