"""Dirichlet Poisson solvers for the stream function: geometric multigrid
(V-cycles, red-black Gauss-Seidel, full weighting, bilinear prolongation)
plus an exact discrete-sine-basis solver used as an independent oracle.

The stored n-by-n field samples x = i*h, i = 0..n-1, h = 1/n; the node row
at x = 1 is implicit and holds the homogeneous boundary value, so the solvers
work on the extended (n+1)-node grid whose interior count n-1 per side
supports vertex-centered coarsening down to the coarsest level.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .errors import ParameterError, PoissonConvergenceError
from .fields import GridSpec, ScalarField, l2_norm, laplacian

__all__ = ["MultigridConfig", "solve_poisson_multigrid", "solve_poisson_spectral",
           "residual"]


@dataclass(frozen=True)
class MultigridConfig:
    pre_smooth: int = 2
    post_smooth: int = 2
    coarsest_n: int = 4
    tol: float = 1e-10
    max_cycles: int = 50

    def __post_init__(self):
        if self.tol <= 0:
            raise ParameterError(f"tol must be > 0, got {self.tol}")
        if self.coarsest_n < 2:
            raise ParameterError(f"coarsest_n must be >= 2, got {self.coarsest_n}")
        if self.pre_smooth < 1 or self.post_smooth < 1:
            raise ParameterError("smoothing sweeps must be >= 1")


def _rb_sweep(u: np.ndarray, f: np.ndarray, h2: float, sweeps: int) -> None:
    """Red-black Gauss-Seidel for -Lap(u) = f on the extended grid, in place."""
    for _ in range(sweeps):
        for blocks in (((1, 1), (2, 2)), ((1, 2), (2, 1))):  # red, then black
            for i0, j0 in blocks:
                u[i0:-1:2, j0:-1:2] = 0.25 * (
                    u[i0 - 1:-2:2, j0:-1:2] + u[i0 + 1::2, j0:-1:2]
                    + u[i0:-1:2, j0 - 1:-2:2] + u[i0:-1:2, j0 + 1::2]
                    + h2 * f[i0:-1:2, j0:-1:2])


def _residual(u: np.ndarray, f: np.ndarray, h2: float) -> np.ndarray:
    r = np.zeros_like(u)
    r[1:-1, 1:-1] = f[1:-1, 1:-1] + (
        u[2:, 1:-1] + u[:-2, 1:-1] + u[1:-1, 2:] + u[1:-1, :-2]
        - 4.0 * u[1:-1, 1:-1]) / h2
    return r


def _restrict(r: np.ndarray) -> np.ndarray:
    """Full weighting onto the coarse vertex grid (boundary stays zero)."""
    nc = (r.shape[0] - 1) // 2
    out = np.zeros((nc + 1, nc + 1))
    c = r[2:-2:2, 2:-2:2]
    edges = (r[1:-2:2, 2:-2:2] + r[3::2, 2:-2:2]
             + r[2:-2:2, 1:-2:2] + r[2:-2:2, 3::2])
    corners = (r[1:-2:2, 1:-2:2] + r[1:-2:2, 3::2]
               + r[3::2, 1:-2:2] + r[3::2, 3::2])
    out[1:-1, 1:-1] = 0.25 * c + 0.125 * edges + 0.0625 * corners
    return out


def _prolong_add(u: np.ndarray, e: np.ndarray) -> None:
    """Bilinear interpolation of the coarse correction, added in place."""
    u[::2, ::2] += e
    u[1::2, ::2] += 0.5 * (e[:-1, :] + e[1:, :])
    u[::2, 1::2] += 0.5 * (e[:, :-1] + e[:, 1:])
    u[1::2, 1::2] += 0.25 * (e[:-1, :-1] + e[1:, :-1] + e[:-1, 1:] + e[1:, 1:])


def _vcycle(u: np.ndarray, f: np.ndarray, h: float, cfg: MultigridConfig) -> None:
    n_cells = u.shape[0] - 1
    h2 = h * h
    if n_cells <= cfg.coarsest_n:
        _rb_sweep(u, f, h2, sweeps=50)
        return
    _rb_sweep(u, f, h2, cfg.pre_smooth)
    coarse_f = _restrict(_residual(u, f, h2))
    coarse_u = np.zeros_like(coarse_f)
    _vcycle(coarse_u, coarse_f, 2.0 * h, cfg)
    _prolong_add(u, coarse_u)
    _rb_sweep(u, f, h2, cfg.post_smooth)


def _extend(values: np.ndarray) -> np.ndarray:
    n = values.shape[0]
    ext = np.zeros((n + 1, n + 1))
    ext[:n, :n] = values
    return ext


def solve_poisson_multigrid(omega: ScalarField, cfg: MultigridConfig = MultigridConfig(),
                            initial_guess: ScalarField | None = None) -> ScalarField:
    """Solve Lap(psi) = -omega with psi = 0 on the square's boundary.

    V-cycles until the extended-grid relative residual drops below cfg.tol;
    raises PoissonConvergenceError if max_cycles is exhausted first.
    An initial_guess (e.g. the previous time step's psi) warm-starts the cycle.
    """
    grid = omega.grid
    h = grid.h
    f = _extend(omega.values)
    u = _extend(initial_guess.values) if initial_guess is not None else np.zeros_like(f)
    u[0, :] = u[-1, :] = u[:, 0] = u[:, -1] = 0.0

    rhs_norm = max(float(np.sqrt(h * h * np.sum(f[1:-1, 1:-1] ** 2))), 1e-300)
    for _ in range(cfg.max_cycles):
        r = _residual(u, f, h * h)
        rel = float(np.sqrt(h * h * np.sum(r[1:-1, 1:-1] ** 2))) / rhs_norm
        if rel <= cfg.tol:
            return ScalarField(grid, u[:grid.n, :grid.n])
        _vcycle(u, f, h, cfg)
    r = _residual(u, f, h * h)
    rel = float(np.sqrt(h * h * np.sum(r[1:-1, 1:-1] ** 2))) / rhs_norm
    if rel <= cfg.tol:
        return ScalarField(grid, u[:grid.n, :grid.n])
    raise PoissonConvergenceError(
        f"multigrid stalled at relative residual {rel:.3e} after "
        f"{cfg.max_cycles} cycles (target {cfg.tol:.3e})", rel, cfg.max_cycles)


def solve_poisson_spectral(omega: ScalarField) -> ScalarField:
    """Exact solve of the 5-point system via the discrete sine basis, which
    diagonalizes the Dirichlet Laplacian; independent oracle for multigrid."""
    grid = omega.grid
    n = grid.n
    w = omega.values[1:, 1:]  # interior nodes i, j = 1..n-1
    coeff = sfft.dstn(w, type=1)
    theta = np.pi * np.arange(1, n) / n
    eig1d = (2.0 - 2.0 * np.cos(theta)) / grid.h ** 2  # of -d2/dx2
    eig = eig1d[:, None] + eig1d[None, :]
    psi_int = sfft.idstn(coeff / eig, type=1)
    psi = np.zeros((n, n))
    psi[1:, 1:] = psi_int
    return ScalarField(grid, psi)


def residual(psi: ScalarField, omega: ScalarField) -> float:
    """L2 norm of Lap(psi) + omega over the stored interior points."""
    r = laplacian(psi).values + omega.values
    r = r.copy()
    r[0, :] = r[-1, :] = r[:, 0] = r[:, -1] = 0.0
    return l2_norm(ScalarField(psi.grid, r))
