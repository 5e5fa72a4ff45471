"""Shared independent oracles for the test suite.

These deliberately avoid the batched evaluators and builders they referee:
the skip recursion is re-implemented as a per-sample straight-line
interpreter, and the square/product/monomial references are built from the
1D mesh oracle alone.
"""

from __future__ import annotations

import numpy as np

from relufem import hb1d


def skip_forward_reference(net, x) -> float:
    """Hand recursion of the skip definition for a single point."""
    x = np.asarray(x, dtype=np.float64)
    activations = []
    prev = None
    for layer in net.layers:
        z = layer.w_input @ x + layer.bias
        if layer.w_carry.shape[1]:
            z = z + layer.w_carry @ prev
        prev = np.maximum(z, 0.0)
        activations.append(prev)
    stacked = np.concatenate([x, *activations]) if activations else x
    return float((net.output.weights @ stacked + net.output.bias)[0])


def square_approx_reference(levels: int, t):
    """The square-net target: interpolant of t^2 at mesh 2**(1-levels) inside
    [-1, 1], |t| outside."""
    t = np.abs(np.asarray(t, dtype=np.float64))
    pts = hb1d.Grid1D(levels - 1).points
    interp = hb1d.interpolate_1d(pts * pts, levels - 1)
    inside = hb1d.pwl_eval(interp, np.minimum(t, 1.0))
    return np.where(t <= 1.0, inside, t)


def product_reference(levels: int, bound: float, u, v):
    """The three-block product combination built from the 1D oracle."""
    s = lambda t: square_approx_reference(levels, t / (2.0 * bound))
    return 2.0 * bound * bound * (s(u + v) - s(u) - s(v))


def monomial_reference(exponents, levels: int, pts: np.ndarray) -> np.ndarray:
    """Brute-force product recursion, peeling exponents in ascending coordinate order."""
    remaining = list(exponents)
    order = []
    while sum(remaining) > 1:
        u = next(i for i, e in enumerate(remaining) if e > 0)
        order.append(u)
        remaining[u] -= 1
    base = next(i for i, e in enumerate(remaining) if e > 0)
    val = pts[:, base].copy()
    for u in reversed(order):
        val = product_reference(levels, 1.0, pts[:, u], val)
    return val
