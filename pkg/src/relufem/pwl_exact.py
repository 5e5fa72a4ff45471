"""Exact piecewise-linear analysis of scalar networks on an interval.

Every network here is continuous and piecewise linear, so a 1-input network
restricted to an interval has an exact breakpoint representation: propagate
the breakpoint set layer by layer, adding the points where each neuron's
pre-activation changes sign (solved in closed form per segment).  On top of
that representation the sup-norm and first-derivative-sup errors against the
square function have closed-form exact values; for multivariate claims a
structured-plus-random sampler carries the measurements instead.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .hb1d import PiecewiseLinear1D
from .netcore import AffineMap, MlpNetwork, SkipLayer, SkipNetwork, evaluate

__all__ = [
    "SupReport",
    "extract_pwl",
    "linear_region_count",
    "restrict_to_line",
    "sup_error_sampled",
    "sup_error_vs_quadratic",
    "w1inf_error_vs_quadratic",
]


@dataclass
class SupReport:
    """A measured supremum together with the point attaining it."""

    value: float
    witness: tuple[float, ...]
    sample_count: int
    mode: str  # "exact" | "sampled"


def restrict_to_line(net, origin, direction):
    """The 1-input network t -> net(origin + t * direction), same family as net."""
    origin = np.asarray(origin, dtype=np.float64)
    direction = np.asarray(direction, dtype=np.float64)
    if origin.shape != (net.input_dim,) or direction.shape != (net.input_dim,):
        raise ValueError("origin and direction must match the network input dim")
    if isinstance(net, MlpNetwork):
        if not net.hidden:
            w = net.output.weights
            return MlpNetwork(
                1, [], AffineMap((w @ direction)[:, None], net.output.bias + w @ origin)
            )
        first = net.hidden[0]
        hidden = [
            AffineMap((first.weights @ direction)[:, None], first.bias + first.weights @ origin)
        ] + net.hidden[1:]
        return MlpNetwork(1, hidden, net.output)
    if isinstance(net, SkipNetwork):
        layers = [
            SkipLayer(
                (layer.w_input @ direction)[:, None],
                layer.w_carry,
                layer.bias + layer.w_input @ origin,
            )
            for layer in net.layers
        ]
        d = net.input_dim
        w = net.output.weights
        wx = w[:, :d]
        out = AffineMap(
            np.hstack([(wx @ direction)[:, None], w[:, d:]]),
            net.output.bias + wx @ origin,
        )
        return SkipNetwork(1, layers, out)
    raise TypeError(f"not a network: {type(net).__name__}")


def _preactivations(net, pts: np.ndarray, upto: int) -> np.ndarray:
    """Pre-activation matrix of hidden layer `upto` (0-based) at the given points."""
    x = pts[:, None]
    if isinstance(net, MlpNetwork):
        a = x
        for k in range(upto):
            a = np.maximum(net.hidden[k].apply(a), 0.0)
        return net.hidden[upto].apply(a)
    prev = None
    for k in range(upto + 1):
        layer = net.layers[k]
        z = x @ layer.w_input.T + layer.bias
        if layer.w_carry.shape[1]:
            z = z + prev @ layer.w_carry.T
        if k == upto:
            return z
        prev = np.maximum(z, 0.0)
    raise AssertionError("unreachable")


def _dedup(points: np.ndarray) -> np.ndarray:
    # distinct neurons of the constructions kink at identical dyadic points
    pts = np.sort(points)
    keep = [pts[0]]
    for p in pts[1:]:
        if p - keep[-1] > 1e-14 * max(1.0, abs(p)):
            keep.append(p)
    return np.asarray(keep)


def _one_sided_slope(net, x0: float, side: int) -> float:
    """Exact directional derivative at x0 from the left (side=-1) or right (+1).

    Forward-propagates (value, one-sided derivative) pairs; a neuron sitting
    exactly at zero is active one-sidedly iff its pre-activation grows into
    positive values on that side.
    """

    def relu_pair(v, g):
        active = (v > 0) | ((v == 0) & ((g * side) > 0))
        return np.maximum(v, 0.0), g * active

    if isinstance(net, MlpNetwork):
        v = np.array([x0])
        g = np.array([1.0])
        for layer in net.hidden:
            v, g = relu_pair(layer.weights @ v + layer.bias, layer.weights @ g)
        return float((net.output.weights @ g)[0])
    v_parts = [np.array([x0])]
    g_parts = [np.array([1.0])]
    for layer in net.layers:
        v = layer.w_input @ v_parts[0] + layer.bias
        g = layer.w_input @ g_parts[0]
        if layer.w_carry.shape[1]:
            v = v + layer.w_carry @ v_parts[-1]
            g = g + layer.w_carry @ g_parts[-1]
        v, g = relu_pair(v, g)
        v_parts.append(v)
        g_parts.append(g)
    return float((net.output.weights @ np.concatenate(g_parts))[0])


def extract_pwl(net, interval: tuple[float, float]) -> PiecewiseLinear1D:
    """Exact breakpoint representation of a 1-input network on [a, b].

    The breakpoints are the interval endpoints plus every point where some
    neuron's pre-activation crosses zero; the extension slopes are the exact
    one-sided derivatives of the network just outside the interval, so
    claims about behaviour beyond the hull stay checkable at its boundary.
    """
    if net.input_dim != 1:
        raise ValueError("exact extraction needs a 1-input network")
    a, b = float(interval[0]), float(interval[1])
    if not b > a:
        raise ValueError("interval must have positive length")
    pts = np.array([a, b])
    for layer_idx in range(net.depth):
        z = _preactivations(net, pts, layer_idx)
        z0, z1 = z[:-1], z[1:]
        crossing = (z0 * z1) < 0.0
        if crossing.any():
            seg, neuron = np.nonzero(crossing)
            t = z0[seg, neuron] / (z0[seg, neuron] - z1[seg, neuron])
            roots = pts[seg] + t * (pts[seg + 1] - pts[seg])
            pts = _dedup(np.concatenate([pts, roots]))
    values = evaluate(net, pts[:, None])
    return PiecewiseLinear1D(
        pts,
        values,
        left_slope=_one_sided_slope(net, a, -1),
        right_slope=_one_sided_slope(net, b, +1),
    )


def _segments(f: PiecewiseLinear1D, interval: tuple[float, float]):
    """Clipped (u, w, slope, value_at_u) per linear piece of f inside the interval."""
    a, b = float(interval[0]), float(interval[1])
    if a < f.breakpoints[0] - 1e-12 or b > f.breakpoints[-1] + 1e-12:
        raise ValueError("interval must lie inside the function's hull")
    if b <= a:
        return []
    out = []
    bp, vals = f.breakpoints, f.values
    for k in range(len(bp) - 1):
        u, w = max(a, float(bp[k])), min(b, float(bp[k + 1]))
        if w <= u:
            continue
        slope = (vals[k + 1] - vals[k]) / (bp[k + 1] - bp[k])
        fu = vals[k] + slope * (u - bp[k])
        out.append((u, w, float(slope), float(fu)))
    return out


def sup_error_vs_quadratic(f: PiecewiseLinear1D, interval: tuple[float, float]) -> SupReport:
    """Exact sup of |x^2 - f(x)| over the interval.

    On a segment with slope m the difference x^2 - (m x + c) is extremal at
    the endpoints or at x = m / 2, so finitely many closed-form candidates
    carry the supremum.
    """
    a, b = float(interval[0]), float(interval[1])
    if b == a:
        return SupReport(0.0, (a,), 1, "exact")
    best, arg = -1.0, a
    count = 0
    for u, w, slope, fu in _segments(f, interval):
        candidates = [u, w]
        vertex = slope / 2.0
        if u < vertex < w:
            candidates.append(vertex)
        for x in candidates:
            err = abs(x * x - (fu + slope * (x - u)))
            count += 1
            if err > best:
                best, arg = err, x
    return SupReport(best, (arg,), count, "exact")


def w1inf_error_vs_quadratic(f: PiecewiseLinear1D, interval: tuple[float, float]) -> SupReport:
    """Exact sup of |2x - f'(x)| over the interval (the derivative-sup seminorm).

    Per segment |2x - slope| is linear in x, so the maximum sits at a segment
    endpoint.
    """
    best, arg = -1.0, float(interval[0])
    count = 0
    for u, w, slope, _ in _segments(f, interval):
        for x in (u, w):
            err = abs(2.0 * x - slope)
            count += 1
            if err > best:
                best, arg = err, x
    return SupReport(best, (arg,), count, "exact")


def sup_error_sampled(
    f: Callable[[np.ndarray], np.ndarray],
    g: Callable[[np.ndarray], np.ndarray],
    domain,
    structured_points=None,
    n_random: int = 0,
    seed: int = 0,
) -> SupReport:
    """Max of |f - g| over structured points plus seeded uniform samples.

    ``domain`` is a (d, 2) array of per-coordinate bounds; evaluators take an
    (n, d) array of rows.  Deterministic for a fixed seed.  Where a proof
    identifies the maximizer, putting it in ``structured_points`` makes the
    sampled value exact.
    """
    box = np.asarray(domain, dtype=np.float64).reshape(-1, 2)
    pieces = []
    if structured_points is not None:
        struct = np.asarray(structured_points, dtype=np.float64)
        if struct.size:
            pieces.append(struct.reshape(-1, box.shape[0]))
    if n_random:
        rng = np.random.default_rng(seed)
        pieces.append(rng.uniform(box[:, 0], box[:, 1], size=(n_random, box.shape[0])))
    if not pieces:
        raise ValueError("no evaluation points: pass structured points or n_random > 0")
    pts = np.concatenate(pieces, axis=0)
    diff = np.abs(np.asarray(f(pts)) - np.asarray(g(pts)))
    k = int(np.argmax(diff))
    return SupReport(float(diff[k]), tuple(pts[k]), pts.shape[0], "sampled")


def linear_region_count(f: PiecewiseLinear1D) -> int:
    """Number of maximal affine pieces between the first and last breakpoint.

    Adjacent segments whose slopes differ by less than 1e-12 merge into one
    region.
    """
    bp, vals = f.breakpoints, f.values
    if len(bp) < 2:
        return 1
    slopes = np.diff(vals) / np.diff(bp)
    regions = 1
    for k in range(1, len(slopes)):
        if abs(slopes[k] - slopes[k - 1]) >= 1e-12:
            regions += 1
    return regions
