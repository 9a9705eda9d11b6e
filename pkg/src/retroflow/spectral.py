"""Fourier-side machinery: transforms, diffusion eigenvalues, the smoothing
operator S = exp(-gamma*|dt|*lambda^p) applied mode-wise, the fractional
power operator P, the constant-coefficient advection-diffusion symbol, and
the stability cutoff/verification used to pick (gamma, p).

Transform convention: coefficients match the continuum Fourier series on the
unit square, i.e. coeffs[0, 0] is the mean of the field, so the eigenvalue
and smoothing formulas apply verbatim.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .errors import ConjugateSymmetryError, ParameterError, SymbolInfeasibleError
from .fields import GridSpec, ScalarField

__all__ = [
    "SpectralField", "SmootherConfig", "LinearSymbolConfig", "StabilityReport",
    "forward_transform", "inverse_transform", "lambda_coeff", "smoothing_factor",
    "apply_S", "apply_P", "apply_linear_symbol", "linear_symbol",
    "select_lambda_J", "gamma_floor", "verify_lemma1", "mode_numbers",
]

_FOUR_PI_SQ = 4.0 * np.pi ** 2


def mode_numbers(n: int) -> np.ndarray:
    """Centered integer wavenumbers -n/2 .. n/2-1."""
    return np.arange(-(n // 2), n // 2)


@dataclass(frozen=True)
class SpectralField:
    """Complex Fourier coefficients in centered (j, k) order.

    coeffs[j + n//2, k + n//2] is the coefficient of exp(2*pi*i*(j*x + k*y)).
    """

    grid: GridSpec
    coeffs: np.ndarray

    def coeff(self, j: int, k: int) -> complex:
        half = self.grid.n // 2
        return complex(self.coeffs[j + half, k + half])


def forward_transform(f: ScalarField) -> SpectralField:
    """DFT normalized so coeffs[0, 0] equals the mean of f."""
    c = np.fft.fftshift(np.fft.fft2(f.values, norm="forward"))
    return SpectralField(f.grid, c)


def inverse_transform(c: SpectralField) -> ScalarField:
    """Exact inverse of forward_transform; complains about large imaginary residue."""
    w = np.fft.ifft2(np.fft.ifftshift(c.coeffs), norm="forward")
    scale = max(float(np.linalg.norm(w)), 1e-300)
    residue = float(np.linalg.norm(w.imag)) / scale
    if residue > 1e-10:
        raise ConjugateSymmetryError(
            f"imaginary residue {residue:.3e} of field norm exceeds 1e-10; "
            "coefficients are not conjugate-symmetric")
    return ScalarField(c.grid, w.real)


def lambda_coeff(j: int, k: int, nu: float) -> float:
    """Diffusion eigenvalue 4*pi^2*nu*(j^2 + k^2)."""
    return _FOUR_PI_SQ * nu * (j * j + k * k)


@dataclass(frozen=True)
class SmootherConfig:
    """Parameters (gamma, p, nu, |dt|) of the smoothing multipliers sigma_{j,k}."""

    gamma: float
    p: float
    nu: float
    dt_abs: float

    def __post_init__(self):
        if self.gamma < 0:
            raise ParameterError(f"gamma must be >= 0, got {self.gamma}")
        if self.p <= 1:
            raise ParameterError(f"p must be > 1, got {self.p}")
        if self.nu <= 0:
            raise ParameterError(f"nu must be > 0, got {self.nu}")
        if self.dt_abs <= 0:
            raise ParameterError(f"dt_abs must be > 0, got {self.dt_abs}")


def smoothing_factor(j: int, k: int, cfg: SmootherConfig) -> float:
    """sigma_{j,k} = exp(-gamma*|dt|*lambda_{j,k}^p)."""
    lam = lambda_coeff(j, k, cfg.nu)
    return float(np.exp(-cfg.gamma * cfg.dt_abs * lam ** cfg.p))


# Multiplier grids on the half-spectrum (rfft2 layout, axis 0 full, axis 1
# nonnegative).  All multipliers are even in (j, k) so the real-transform
# path is exact for real fields.

@functools.lru_cache(maxsize=64)
def _rfft_mode_sq(n: int) -> np.ndarray:
    j = np.fft.fftfreq(n, d=1.0 / n)[:, None]
    k = np.fft.rfftfreq(n, d=1.0 / n)[None, :]
    out = j * j + k * k
    out.setflags(write=False)
    return out

@functools.lru_cache(maxsize=64)
def _sigma_grid(cfg: SmootherConfig, n: int) -> np.ndarray:
    lam = _FOUR_PI_SQ * cfg.nu * _rfft_mode_sq(n)
    with np.errstate(under="ignore"):
        out = np.exp(-cfg.gamma * cfg.dt_abs * lam ** cfg.p)
    out.setflags(write=False)
    return out

@functools.lru_cache(maxsize=64)
def _lambda_pow_grid(p: float, nu: float, n: int) -> np.ndarray:
    out = (_FOUR_PI_SQ * nu * _rfft_mode_sq(n)) ** p
    out.setflags(write=False)
    return out


def _apply_multiplier(f: ScalarField, mult: np.ndarray) -> ScalarField:
    c = sfft.rfft2(f.values)
    return ScalarField(f.grid, sfft.irfft2(c * mult, s=f.values.shape))


def apply_S(f: ScalarField, cfg: SmootherConfig) -> ScalarField:
    """Smooth f mode-wise by sigma_{j,k}; an L2 contraction (sigma <= 1)."""
    return _apply_multiplier(f, _sigma_grid(cfg, f.grid.n))


def apply_P(f: ScalarField, p: float, nu: float) -> ScalarField:
    """Multiply f's modes by lambda_{j,k}^p (annihilates the mean)."""
    return _apply_multiplier(f, _lambda_pow_grid(p, nu, f.grid.n))


@dataclass(frozen=True)
class LinearSymbolConfig:
    """Constant advection bounds (a, b) and viscosity of the frozen-coefficient
    operator L = nu*Lap - a*d/dx - b*d/dy."""

    a: float
    b: float
    nu: float

    def __post_init__(self):
        if self.nu <= 0:
            raise ParameterError(f"nu must be > 0, got {self.nu}")


def linear_symbol(j: int, k: int, cfg: LinearSymbolConfig) -> complex:
    """g_{j,k} = -(4*pi^2*nu*(j^2+k^2) + 2*pi*i*(a*j + b*k))."""
    return -(lambda_coeff(j, k, cfg.nu) + 2.0j * np.pi * (cfg.a * j + cfg.b * k))


@functools.lru_cache(maxsize=64)
def _symbol_grid(cfg: LinearSymbolConfig, n: int) -> np.ndarray:
    """g on the rfft2 half-spectrum (Hermitian, so the half-grid suffices)."""
    j = np.fft.fftfreq(n, d=1.0 / n)[:, None]
    k = np.fft.rfftfreq(n, d=1.0 / n)[None, :]
    out = -(_FOUR_PI_SQ * cfg.nu * (j * j + k * k)
            + 2.0j * np.pi * (cfg.a * j + cfg.b * k))
    out.setflags(write=False)
    return out


def apply_linear_symbol(f: ScalarField, cfg: LinearSymbolConfig) -> ScalarField:
    """Apply L spectrally: multiply modes by g_{j,k}."""
    return _apply_multiplier(f, _symbol_grid(cfg, f.grid.n))


def _centered_symbol_arrays(sym: LinearSymbolConfig, grid: GridSpec):
    m = mode_numbers(grid.n)
    j = m[:, None]
    k = m[None, :]
    r2 = j * j + k * k
    lam = _FOUR_PI_SQ * sym.nu * r2
    absg = np.abs(lam + 2.0j * np.pi * (sym.a * j + sym.b * k))
    return r2, lam, absg


def select_lambda_J(sym: LinearSymbolConfig, grid: GridSpec) -> tuple[int, float]:
    """Smallest positive integer J (and lambda_J = 4*pi^2*nu*J) such that over
    the grid's modes: max |g| over (j^2+k^2) <= J is at most 2*lambda_J, and
    |g_{j,k}| <= 2*lambda_{j,k} for every mode with (j^2+k^2) > J.

    Raises SymbolInfeasibleError if no J up to the largest representable
    squared radius works (advection dominates diffusion at all resolvable
    scales).
    """
    r2, lam, absg = _centered_symbol_arrays(sym, grid)
    r2f = r2.ravel()
    absgf = absg.ravel()

    # Every mode violating |g| <= 2*lambda must fall inside the <= J ball.
    bad = absgf > 2.0 * lam.ravel()
    j_lo = int(r2f[bad].max()) if bad.any() else 1
    j_lo = max(j_lo, 1)

    order = np.argsort(r2f, kind="stable")
    r2s = r2f[order]
    prefix_max = np.maximum.accumulate(absgf[order])
    uniq, last_idx = np.unique(r2s, return_index=True)
    # max |g| over modes with r^2 <= uniq[i]
    seg_end = np.r_[last_idx[1:] - 1, len(r2s) - 1]
    max_by_radius = prefix_max[seg_end]

    j_max = int(uniq[-1])
    coeff = 2.0 * _FOUR_PI_SQ * sym.nu  # bound side: 2*lambda_J = coeff * J
    for i, v in enumerate(uniq):
        lo = max(int(v), j_lo, int(np.ceil(max_by_radius[i] / coeff)))
        while coeff * lo < max_by_radius[i]:  # guard against ceil roundoff
            lo += 1
        hi = int(uniq[i + 1]) - 1 if i + 1 < len(uniq) else j_max
        if lo <= hi:
            return lo, coeff / 2.0 * lo
    raise SymbolInfeasibleError(
        f"no feasible cutoff J <= {j_max} for a={sym.a}, b={sym.b}, nu={sym.nu} "
        f"on n={grid.n}")


def gamma_floor(lambda_J: float, p: float) -> float:
    """Smallest stabilizing gamma, 4*lambda_J^(1-p)."""
    return 4.0 * lambda_J ** (1.0 - p)


@dataclass(frozen=True)
class StabilityReport:
    """Result of the exhaustive per-mode stability scan."""

    passed: bool
    max_lhs: float
    bound: float
    worst_mode: tuple[int, int]
    J: int
    lambda_J: float
    n_modes: int

    @property
    def margin(self) -> float:
        return self.bound - self.max_lhs

    def to_text(self) -> str:
        lines = [
            f"stability_scan_pass={str(self.passed).lower()}",
            f"max_amplification={self.max_lhs:.15g}",
            f"bound={self.bound:.15g}",
            f"margin={self.margin:.15g}",
            f"worst_mode_j={self.worst_mode[0]}",
            f"worst_mode_k={self.worst_mode[1]}",
            f"cutoff_J={self.J}",
            f"lambda_J={self.lambda_J:.15g}",
            f"modes_scanned={self.n_modes}",
        ]
        return "\n".join(lines) + "\n"


def verify_lemma1(cfg: SmootherConfig, sym: LinearSymbolConfig,
                  grid: GridSpec) -> StabilityReport:
    """Scan every grid mode for sigma*(1 + 2|dt||g|) <= 1 + 4|dt|*lambda_J."""
    if abs(cfg.nu - sym.nu) > 1e-15 * max(cfg.nu, sym.nu):
        raise ParameterError("smoother and symbol disagree on nu")
    J, lam_J = select_lambda_J(sym, grid)
    r2, lam, absg = _centered_symbol_arrays(sym, grid)
    with np.errstate(under="ignore"):
        sigma = np.exp(-cfg.gamma * cfg.dt_abs * lam ** cfg.p)
    lhs = sigma * (1.0 + 2.0 * cfg.dt_abs * absg)
    bound = 1.0 + 4.0 * cfg.dt_abs * lam_J
    worst_flat = int(np.argmax(lhs))
    wj, wk = np.unravel_index(worst_flat, lhs.shape)
    half = grid.n // 2
    return StabilityReport(
        passed=bool(lhs.max() <= bound),
        max_lhs=float(lhs.max()),
        bound=float(bound),
        worst_mode=(int(wj) - half, int(wk) - half),
        J=J,
        lambda_J=float(lam_J),
        n_modes=lhs.size,
    )
