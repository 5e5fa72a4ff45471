"""Independent 1D finite-element oracle on the unit interval.

Dyadic grids, nodal hat bases, uniform piecewise-linear interpolation and
hierarchical surplus coefficients.  Contains no neural-network code, so it
can referee the constructive builders.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "Grid1D",
    "PiecewiseLinear1D",
    "hierarchical_coeffs",
    "interpolate_1d",
    "nodal_basis",
    "pwl_eval",
]


@dataclass(frozen=True)
class Grid1D:
    """Uniform dyadic grid on [0, 1]: points i * 2**-level for i = 0..2**level."""

    level: int

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("level must be non-negative")

    @property
    def h(self) -> float:
        return 2.0 ** -self.level

    @property
    def size(self) -> int:
        return 2 ** self.level + 1

    @property
    def points(self) -> np.ndarray:
        return np.arange(self.size) * self.h


@dataclass
class PiecewiseLinear1D:
    """Exact breakpoint/value representation of a continuous piecewise-linear function.

    Between breakpoints the function interpolates linearly; outside the hull
    it continues with the fixed slopes ``left_slope`` / ``right_slope``.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    left_slope: float = 0.0
    right_slope: float = 0.0

    def __post_init__(self):
        self.breakpoints = np.array(self.breakpoints, dtype=np.float64)
        self.values = np.array(self.values, dtype=np.float64)
        if self.breakpoints.ndim != 1 or self.values.ndim != 1:
            raise ValueError("breakpoints and values must be vectors")
        if self.breakpoints.shape != self.values.shape:
            raise ValueError("breakpoints and values must have equal length")
        if self.breakpoints.size == 0:
            raise ValueError("need at least one breakpoint")
        if self.breakpoints.size > 1:
            gaps = np.diff(self.breakpoints)
            floor = 1e-14 * np.maximum(1.0, np.abs(self.breakpoints[:-1]))
            if not np.all(gaps > floor):
                raise ValueError("breakpoints must be strictly increasing")
        if not (np.isfinite(self.breakpoints).all() and np.isfinite(self.values).all()):
            raise ValueError("breakpoints and values must be finite")
        self.left_slope = float(self.left_slope)
        self.right_slope = float(self.right_slope)


def pwl_eval(f: PiecewiseLinear1D, x):
    """Evaluate a piecewise-linear function at a point or array of points."""
    arr = np.asarray(x, dtype=np.float64)
    single = arr.ndim == 0
    pts = np.atleast_1d(arr)
    out = np.interp(pts, f.breakpoints, f.values)
    lo, hi = f.breakpoints[0], f.breakpoints[-1]
    left = pts < lo
    right = pts > hi
    if left.any():
        out[left] = f.values[0] + f.left_slope * (pts[left] - lo)
    if right.any():
        out[right] = f.values[-1] + f.right_slope * (pts[right] - hi)
    return float(out[0]) if single else out


def nodal_basis(level: int, i: int, x):
    """Value of the level-`level` nodal basis function centered at node i.

    For level >= 1 this is the hat of width 2*h around i*h, zero outside its
    support.  Level 0 uses the boundary convention 1 - x (i = 0) and x (i = 1)
    on the unit interval.
    """
    if level < 0:
        raise ValueError("level must be non-negative")
    if not 0 <= i <= 2 ** level:
        raise ValueError(f"node index {i} out of range 0..{2 ** level}")
    arr = np.asarray(x, dtype=np.float64)
    single = arr.ndim == 0
    pts = np.atleast_1d(arr)
    if level == 0:
        out = 1.0 - pts if i == 0 else pts.copy()
    else:
        h = 2.0 ** -level
        out = np.maximum(0.0, 1.0 - np.abs(pts - i * h) / h)
    return float(out[0]) if single else out


def interpolate_1d(samples, level: int) -> PiecewiseLinear1D:
    """Piecewise-linear interpolant through the given nodal samples at the dyadic grid.

    Exactly the grid points as breakpoints and the samples as values; outside
    [0, 1] the boundary segments continue linearly.
    """
    grid = Grid1D(level)
    vals = np.asarray(samples, dtype=np.float64)
    if vals.ndim != 1 or vals.size != grid.size:
        raise ValueError(f"expected {grid.size} samples for level {level}, got {vals.size}")
    pts = grid.points
    left = (vals[1] - vals[0]) / grid.h
    right = (vals[-1] - vals[-2]) / grid.h
    return PiecewiseLinear1D(pts, vals, left_slope=left, right_slope=right)


def hierarchical_coeffs(u: Callable[[float], float], max_level: int) -> list[np.ndarray]:
    """Hierarchical surplus coefficients of u on [0, 1] for levels 1..max_level.

    Entry ``result[l-1][k]`` is the surplus at the k-th odd node of level l:
    u at the node minus the mean of u at the two parent nodes.  The
    reconstruction I_0 u + sum of surpluses times hats reproduces the
    level-``max_level`` interpolant at all of its grid points.
    """
    if max_level < 1:
        raise ValueError("max_level must be >= 1")
    out = []
    for level in range(1, max_level + 1):
        pts = Grid1D(level).points
        vals = np.asarray([u(float(p)) for p in pts], dtype=np.float64)
        odd = np.arange(1, pts.size - 1, 2)
        out.append(vals[odd] - 0.5 * (vals[odd - 1] + vals[odd + 1]))
    return out
