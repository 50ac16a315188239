"""Kernel selection: compiled ``_ckernels`` when importable, else pure Python.

Set ``BRUNONF_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels as py

if os.environ.get("BRUNONF_PURE_PYTHON", "") not in ("", "0"):
    _impl = py
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = py

BACKEND = _impl.BACKEND
mul_terms = _impl.mul_terms
apply_terms = _impl.apply_terms
bracket_terms = _impl.bracket_terms
smul_terms = _impl.smul_terms
_omega_float = _impl.omega_shells_float
_omega_int = _impl.omega_shells_int

INT_KERNEL_BOUND = 2**31


def omega_shells_float(re, im, max_norm, allow_neg, eps):
    return _omega_float(list(re), list(im), max_norm, bool(allow_neg), float(eps))


def omega_shells_int(re, im, max_norm, allow_neg):
    bound = max([abs(x) for x in list(re) + list(im)] + [1]) * max(max_norm, 1) * len(re)
    if _impl is py or bound >= INT_KERNEL_BOUND:
        return py.omega_shells_int(list(re), list(im), max_norm, allow_neg)
    return _omega_int([int(x) for x in re], [int(x) for x in im], max_norm, bool(allow_neg))
