"""2D finite-element oracle on uniform criss-triangulated meshes.

The mesh at level l covers a rectangle with square cells of side 2**-l; every
cell is split by its anti-diagonal (the line x + y = const), exactly the
orientation the constructive builders assume.  On the default [-1, 1]^2
domain the grid points are ((i - 2**l) * h, (j - 2**l) * h).

Provides point location, the closed-form interpolant of m(x, y) = x*y,
general nodal evaluation in barycentric form, and the reference hat
function used by the two-hidden-layer representation builders.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "FemFunction2D",
    "TriangleId",
    "UniformMesh2D",
    "fem_eval",
    "hat_ref",
    "interp_xy",
    "locate",
    "psi_ref",
]


class TriangleId(NamedTuple):
    """Identifies a triangle: level, anchor grid indices and orientation sign.

    '+' triangles hang up-right of their anchor corner (x + y below the cell
    anti-diagonal); '-' triangles hang down-left of theirs.
    """

    level: int
    i: int
    j: int
    sign: str


@dataclass(frozen=True)
class UniformMesh2D:
    """Square-celled criss mesh of mesh size 2**-level over a rectangle.

    The rectangle sides must be integer multiples of the mesh size.  All
    diagonals run along x + y = const; this orientation is part of the data
    model, not configurable.
    """

    level: int
    domain: tuple[float, float, float, float] = (-1.0, 1.0, -1.0, 1.0)

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("level must be non-negative")
        xmin, xmax, ymin, ymax = self.domain
        if not (xmax > xmin and ymax > ymin):
            raise ValueError("domain must have positive extent")
        for lo, hi, name in ((xmin, xmax, "x"), (ymin, ymax, "y")):
            cells = (hi - lo) / self.h
            if abs(cells - round(cells)) > 1e-9 or round(cells) < 1:
                raise ValueError(
                    f"{name}-extent {hi - lo} is not a positive multiple of mesh size {self.h}"
                )

    @property
    def h(self) -> float:
        return 2.0 ** -self.level

    @property
    def ncells_x(self) -> int:
        xmin, xmax, _, _ = self.domain
        return round((xmax - xmin) / self.h)

    @property
    def ncells_y(self) -> int:
        _, _, ymin, ymax = self.domain
        return round((ymax - ymin) / self.h)

    @property
    def xs(self) -> np.ndarray:
        return self.domain[0] + np.arange(self.ncells_x + 1) * self.h

    @property
    def ys(self) -> np.ndarray:
        return self.domain[2] + np.arange(self.ncells_y + 1) * self.h


def _cell_indices(mesh: UniformMesh2D, x: np.ndarray, y: np.ndarray):
    xmin, xmax, ymin, ymax = mesh.domain
    if np.any(x < xmin) or np.any(x > xmax) or np.any(y < ymin) or np.any(y > ymax):
        raise ValueError("point outside mesh hull")
    i = np.clip(np.floor((x - xmin) / mesh.h).astype(int), 0, mesh.ncells_x - 1)
    j = np.clip(np.floor((y - ymin) / mesh.h).astype(int), 0, mesh.ncells_y - 1)
    return i, j


def locate(mesh: UniformMesh2D, x: float, y: float) -> TriangleId:
    """Containing triangle of a point; ties on a hypotenuse resolve to '+'.

    '+' triangles are indexed by their lower-left cell corner, '-' triangles
    by their upper-right corner, so the two triangles of one cell carry
    different anchors.
    """
    xa = np.asarray([x], dtype=np.float64)
    ya = np.asarray([y], dtype=np.float64)
    i, j = _cell_indices(mesh, xa, ya)
    i0, j0 = int(i[0]), int(j[0])
    xi = mesh.domain[0] + i0 * mesh.h
    yj = mesh.domain[2] + j0 * mesh.h
    if x + y <= xi + yj + mesh.h:
        return TriangleId(mesh.level, i0, j0, "+")
    return TriangleId(mesh.level, i0 + 1, j0 + 1, "-")


def interp_xy(level: int, x, y):
    """Value of the level-`level` interpolant of m(x, y) = x*y on [-1, 1]^2.

    On each triangle the interpolant is x*yj + y*xi - xi*yj for the anchor
    corner (xi, yj); exact at every grid point.  Accepts scalars or arrays.
    """
    if level < 0:
        raise ValueError("level must be non-negative")
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    single = xa.ndim == 0 and ya.ndim == 0
    xa, ya = np.atleast_1d(xa), np.atleast_1d(ya)
    mesh = UniformMesh2D(level)
    i, j = _cell_indices(mesh, xa, ya)
    h = mesh.h
    xi = -1.0 + i * h
    yj = -1.0 + j * h
    plus = xa + ya <= xi + yj + h
    xc = np.where(plus, xi, xi + h)
    yc = np.where(plus, yj, yj + h)
    out = xa * yc + ya * xc - xc * yc
    return float(out[0]) if single else out


def psi_ref(level: int, x, y):
    """Reference detail function: level interpolant of x*y minus the coarser one."""
    if level < 1:
        raise ValueError("level must be >= 1")
    return interp_xy(level, x, y) - interp_xy(level - 1, x, y)


def hat_ref(x, y):
    """Reference hat: 4 * psi_ref(1) on [0, 1]^2 and zero everywhere else.

    The unit-height basis function of the level-1 criss mesh on [0, 1]^2,
    peaking at (1/2, 1/2).
    """
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    single = xa.ndim == 0 and ya.ndim == 0
    xa, ya = np.atleast_1d(xa), np.atleast_1d(ya)
    out = np.zeros(np.broadcast(xa, ya).shape)
    xb, yb = np.broadcast_arrays(xa, ya)
    inside = (xb >= 0.0) & (xb <= 1.0) & (yb >= 0.0) & (yb <= 1.0)
    if inside.any():
        out[inside] = 4.0 * psi_ref(1, xb[inside], yb[inside])
    return float(out[0]) if single else out


@dataclass
class FemFunction2D:
    """Nodal values on a criss mesh, evaluated barycentrically per triangle."""

    mesh: UniformMesh2D
    values: np.ndarray

    def __post_init__(self):
        ny = self.mesh.ncells_y + 1
        nx = self.mesh.ncells_x + 1
        vals = np.array(self.values, dtype=np.float64)
        if vals.ndim == 1:
            if vals.size != nx * ny:
                raise ValueError(f"expected {nx * ny} nodal values, got {vals.size}")
            vals = vals.reshape(ny, nx)
        elif vals.shape != (ny, nx):
            raise ValueError(f"expected value array of shape {(ny, nx)}, got {vals.shape}")
        if not np.isfinite(vals).all():
            raise ValueError("nodal values must be finite")
        self.values = vals

    @classmethod
    def from_dict(cls, doc: dict) -> "FemFunction2D":
        """Parse the structured input format {level, domain, values(row-major)}."""
        mesh = UniformMesh2D(int(doc["level"]), tuple(float(v) for v in doc["domain"]))
        return cls(mesh, np.asarray(doc["values"], dtype=np.float64))

    def to_dict(self) -> dict:
        return {
            "level": self.mesh.level,
            "domain": list(self.mesh.domain),
            "values": self.values.reshape(-1).tolist(),
        }


def fem_eval(f: FemFunction2D, x, y):
    """Barycentric evaluation: the affine interpolant of the three corner values.

    Values at (x_i, y_j) live at ``f.values[j, i]`` (row-major over y then x).
    """
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    single = xa.ndim == 0 and ya.ndim == 0
    xa, ya = np.atleast_1d(xa), np.atleast_1d(ya)
    mesh = f.mesh
    i, j = _cell_indices(mesh, xa, ya)
    h = mesh.h
    lx = (xa - (mesh.domain[0] + i * h)) / h
    ly = (ya - (mesh.domain[2] + j * h)) / h
    v = f.values
    plus = lx + ly <= 1.0
    val_plus = v[j, i] * (1.0 - lx - ly) + v[j, i + 1] * lx + v[j + 1, i] * ly
    mx = 1.0 - lx
    my = 1.0 - ly
    val_minus = v[j + 1, i + 1] * (1.0 - mx - my) + v[j + 1, i] * mx + v[j, i + 1] * my
    out = np.where(plus, val_plus, val_minus)
    return float(out[0]) if single else out
