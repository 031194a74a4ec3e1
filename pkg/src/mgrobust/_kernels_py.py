"""Pure-numpy implementations of the hot evaluation kernels.

These mirror the compiled extension in ``_kernels.pyx``; ``kernels`` picks one
implementation at import time.
"""

import numpy as np


def vertex_values(totals, half_spread, mid_price, p):
    """Transaction objective of every candidate row.

    Row v gets sum_t( half_spread[t] * |p[t] - totals[v, t]|
                      + mid_price[t] * (p[t] - totals[v, t]) ).
    """
    diff = p[None, :] - totals
    return np.abs(diff) @ half_spread + diff @ mid_price


def worst_vertex(totals, half_spread, mid_price, p):
    """Index (first maximizer) and value of the worst candidate row."""
    vals = vertex_values(totals, half_spread, mid_price, p)
    idx = int(np.argmax(vals))
    return idx, float(vals[idx])
