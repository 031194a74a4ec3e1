"""Kernel backend selection: compiled extension when available, numpy otherwise.

Set MGROBUST_PURE_PYTHON=1 to force the numpy fallback (used by the benchmark
and by tests that compare the two implementations).
"""

import os

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _ext
except ImportError:  # extension not built; fallback is fully equivalent
    _ext = None

_impl = _kernels_py if (_ext is None or os.environ.get("MGROBUST_PURE_PYTHON")) else _ext


def backend_name() -> str:
    return "numpy" if _impl is _kernels_py else "cython"


def _prep(totals, half_spread, mid_price, p):
    return (
        np.ascontiguousarray(totals, dtype=np.float64),
        np.ascontiguousarray(half_spread, dtype=np.float64),
        np.ascontiguousarray(mid_price, dtype=np.float64),
        np.ascontiguousarray(p, dtype=np.float64),
    )


def vertex_values(totals, half_spread, mid_price, p):
    return np.asarray(_impl.vertex_values(*_prep(totals, half_spread, mid_price, p)))


def worst_vertex(totals, half_spread, mid_price, p):
    idx, val = _impl.worst_vertex(*_prep(totals, half_spread, mid_price, p))
    return int(idx), float(val)
