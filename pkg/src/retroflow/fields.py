"""Scalar fields on the unit square with centered finite differences.

The grid has n points per side at spacing h = 1/n, so values[i, j] samples
(x, y) = (i*h, j*h).  All fields of interest vanish on and near the domain
boundary, so derivative stencils simply zero the outermost ring instead of
one-siding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

__all__ = [
    "GridSpec", "ScalarField", "ddx", "ddy", "laplacian",
    "velocity_from_stream", "vorticity_from_stream", "l2_norm", "inner",
    "apply_taper", "zero_ring", "sample",
]


@dataclass(frozen=True)
class GridSpec:
    """Uniform n-by-n grid on the unit square, h = 1/n."""

    n: int
    h: float = field(init=False)
    area: float = 1.0

    def __post_init__(self):
        n = self.n
        if n < 16 or (n & (n - 1)) != 0:
            raise ParameterError(f"grid size must be a power of two >= 16, got {n}")
        object.__setattr__(self, "h", 1.0 / n)
        assert abs(self.h * n - 1.0) < 1e-15

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Coordinate arrays X, Y with X[i, j] = i*h, Y[i, j] = j*h."""
        c = np.arange(self.n) * self.h
        return np.meshgrid(c, c, indexing="ij")


class ScalarField:
    """Immutable real-valued samples of a function on a GridSpec."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: GridSpec, values: np.ndarray):
        arr = np.array(values, dtype=np.float64)  # defensive copy
        if arr.shape != (grid.n, grid.n):
            raise ParameterError(
                f"field shape {arr.shape} does not match grid {grid.n}x{grid.n}")
        arr.setflags(write=False)
        self.grid = grid
        self.values = arr

    @classmethod
    def zeros(cls, grid: GridSpec) -> "ScalarField":
        return cls(grid, np.zeros((grid.n, grid.n)))

    @classmethod
    def full(cls, grid: GridSpec, value: float) -> "ScalarField":
        return cls(grid, np.full((grid.n, grid.n), float(value)))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def is_boundary_clean(self, tol: float = 0.0) -> bool:
        v = self.values
        ring = (np.abs(v[0, :]).max(), np.abs(v[-1, :]).max(),
                np.abs(v[:, 0]).max(), np.abs(v[:, -1]).max())
        return max(ring) <= tol

    def __repr__(self):
        return f"ScalarField(n={self.grid.n}, |f|_2={l2_norm(self):.6g})"


def sample(grid: GridSpec, fn) -> ScalarField:
    """Sample fn(x, y) on the grid nodes."""
    x, y = grid.mesh()
    return ScalarField(grid, fn(x, y))


def _zero_ring_inplace(v: np.ndarray) -> np.ndarray:
    v[0, :] = 0.0
    v[-1, :] = 0.0
    v[:, 0] = 0.0
    v[:, -1] = 0.0
    return v


def zero_ring(f: ScalarField) -> ScalarField:
    """Copy of f with the outermost ring set to zero."""
    return ScalarField(f.grid, _zero_ring_inplace(f.values.copy()))


def ddx(f: ScalarField) -> ScalarField:
    """Centered d/dx; outermost ring set to zero."""
    v = f.values
    out = np.zeros_like(v)
    out[1:-1, 1:-1] = (v[2:, 1:-1] - v[:-2, 1:-1]) / (2.0 * f.grid.h)
    return ScalarField(f.grid, out)


def ddy(f: ScalarField) -> ScalarField:
    """Centered d/dy; outermost ring set to zero."""
    v = f.values
    out = np.zeros_like(v)
    out[1:-1, 1:-1] = (v[1:-1, 2:] - v[1:-1, :-2]) / (2.0 * f.grid.h)
    return ScalarField(f.grid, out)


def laplacian(f: ScalarField) -> ScalarField:
    """Standard 5-point Laplacian; outermost ring set to zero."""
    v = f.values
    out = np.zeros_like(v)
    out[1:-1, 1:-1] = (
        v[2:, 1:-1] + v[:-2, 1:-1] + v[1:-1, 2:] + v[1:-1, :-2]
        - 4.0 * v[1:-1, 1:-1]
    ) / (f.grid.h * f.grid.h)
    return ScalarField(f.grid, out)


def velocity_from_stream(psi: ScalarField) -> tuple[ScalarField, ScalarField]:
    """u = psi_y, v = -psi_x."""
    u = ddy(psi)
    v = ScalarField(psi.grid, -ddx(psi).values)
    return u, v


def vorticity_from_stream(psi: ScalarField) -> ScalarField:
    """omega = -laplacian(psi)."""
    return ScalarField(psi.grid, -laplacian(psi).values)


def l2_norm(f: ScalarField) -> float:
    """Riemann approximation of the L2 norm over the unit square."""
    return float(np.sqrt(f.grid.h ** 2 * np.sum(f.values ** 2)))


def inner(f: ScalarField, g: ScalarField) -> float:
    """L2 scalar product h^2 * sum(f*g)."""
    return float(f.grid.h ** 2 * np.sum(f.values * g.values))


def _taper_ramp(n: int, width: int) -> np.ndarray:
    """1D raised-cosine ramp: 0 at the edges, 1 at distance >= width."""
    d = np.minimum(np.arange(n), np.arange(n)[::-1]).astype(np.float64)
    if width == 0:
        r = np.ones(n)
        r[0] = r[-1] = 0.0
        return r
    r = np.where(d >= width, 1.0, np.sin(0.5 * np.pi * d / width) ** 2)
    return r


def apply_taper(f: ScalarField, width: int) -> ScalarField:
    """Multiply by a separable raised-cosine ramp vanishing at the boundary.

    The ramp rises from 0 on the outer ring to 1 at `width` pixels in; width 0
    only zeroes the outer ring.
    """
    n = f.grid.n
    if not 0 <= width <= n // 4:
        raise ParameterError(f"taper width must be in [0, {n // 4}], got {width}")
    r = _taper_ramp(n, width)
    return ScalarField(f.grid, f.values * r[:, None] * r[None, :])
