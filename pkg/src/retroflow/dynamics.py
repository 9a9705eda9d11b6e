"""Stabilized, RAW-filtered leapfrog marching of the vorticity equation,
forward or backward in time, plus the frozen-coefficient linear marcher and
exact solution used to verify the stability/error theory numerically.

State convention: a LeapfrogState after n-1 steps holds the filtered pair
(theta^n, omega^n) where omega^n approximates the vorticity at time
t0 + n*dt and theta^n lags one step behind; psi/u/v are derived from the
current omega by the Poisson solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DivergenceError, ParameterError
from .fields import (GridSpec, ScalarField, ddx, ddy, l2_norm, laplacian,
                     velocity_from_stream, zero_ring)
from .poisson import MultigridConfig, solve_poisson_multigrid
from .spectral import (LinearSymbolConfig, SmootherConfig, apply_S,
                       apply_linear_symbol, _symbol_grid)

__all__ = [
    "MarchConfig", "LeapfrogState", "FlowState", "NormRow", "Trajectory",
    "eval_L", "init_march", "raw_filter", "step", "march",
    "linear_exact_solution", "linear_march", "linear_operator_norm",
]


@dataclass(frozen=True)
class MarchConfig:
    """Full parameterization of one time march."""

    direction: str                      # "forward" | "backward"
    t_final: float
    steps: int                          # N+1; |dt| = t_final/steps
    smoother: SmootherConfig
    nu: float
    raw_xi: float = 0.53
    raw_eta: float = 0.1
    blowup_threshold: float = 1e8
    taper_width: int = 8
    poisson: MultigridConfig = MultigridConfig()
    snapshot_stride: int = 0            # 0 = final state only

    def __post_init__(self):
        if self.direction not in ("forward", "backward"):
            raise ParameterError(f"direction must be forward/backward, got {self.direction!r}")
        if self.t_final <= 0:
            raise ParameterError(f"t_final must be > 0, got {self.t_final}")
        if self.steps < 2:
            raise ParameterError(f"steps must be >= 2, got {self.steps}")
        if not 0.0 <= self.raw_eta <= 0.2:
            raise ParameterError(f"raw_eta must lie in [0, 0.2], got {self.raw_eta}")
        if self.blowup_threshold <= 0:
            raise ParameterError("blowup_threshold must be > 0")
        if abs(self.smoother.dt_abs * self.steps - self.t_final) > 1e-12 * self.t_final:
            raise ParameterError(
                f"smoother.dt_abs*steps = {self.smoother.dt_abs * self.steps} "
                f"differs from t_final = {self.t_final}")
        if abs(self.smoother.nu - self.nu) > 1e-15 * max(self.nu, self.smoother.nu):
            raise ParameterError("smoother and march disagree on nu")

    @classmethod
    def create(cls, direction: str, t_final: float, steps: int, gamma: float,
               p: float, nu: float, **kwargs) -> "MarchConfig":
        sm = SmootherConfig(gamma=gamma, p=p, nu=nu, dt_abs=t_final / steps)
        return cls(direction=direction, t_final=t_final, steps=steps,
                   smoother=sm, nu=nu, **kwargs)

    @property
    def dt(self) -> float:
        """Signed time step."""
        mag = self.t_final / self.steps
        return mag if self.direction == "forward" else -mag

    @property
    def t_start(self) -> float:
        return 0.0 if self.direction == "forward" else self.t_final


@dataclass(frozen=True)
class FlowState:
    """A snapshot of the flow variables at one instant."""

    time: float
    omega: ScalarField
    psi: ScalarField | None = None
    u: ScalarField | None = None
    v: ScalarField | None = None
    theta: ScalarField | None = None


@dataclass(frozen=True)
class LeapfrogState:
    theta: ScalarField
    omega: ScalarField
    psi: ScalarField | None
    u: ScalarField | None
    v: ScalarField | None
    step_index: int
    time: float

    def flow_state(self) -> FlowState:
        return FlowState(time=self.time, omega=self.omega, psi=self.psi,
                         u=self.u, v=self.v, theta=self.theta)


@dataclass(frozen=True)
class NormRow:
    """Per-step norm log entry."""

    step: int
    time: float
    omega: float
    theta: float
    vec: float                     # sqrt(|theta|^2 + |omega|^2)
    psi: float | None = None
    u: float | None = None
    v: float | None = None
    speed_max: float | None = None


@dataclass
class Trajectory:
    direction: str
    dt: float
    norm_history: list[NormRow] = field(default_factory=list)
    snapshots: list[FlowState] = field(default_factory=list)
    final: FlowState | None = None

    @property
    def speed_max(self) -> float:
        vals = [r.speed_max for r in self.norm_history if r.speed_max is not None]
        return max(vals) if vals else 0.0

    @property
    def times(self) -> list[float]:
        return [r.time for r in self.norm_history]


def eval_L(omega: ScalarField, u: ScalarField, v: ScalarField,
           nu: float) -> ScalarField:
    """nu*Lap(omega) - u*omega_x - v*omega_y with centered stencils."""
    out = (nu * laplacian(omega).values
           - u.values * ddx(omega).values
           - v.values * ddy(omega).values)
    return ScalarField(omega.grid, out)


def raw_filter(theta_next: ScalarField, omega_next: ScalarField,
               theta_bar_prev: ScalarField, xi: float,
               eta: float) -> tuple[ScalarField, ScalarField]:
    """Robert-Asselin-Williams update; the second line uses the freshly
    filtered theta."""
    grid = theta_next.grid
    d = omega_next.values - 2.0 * theta_next.values + theta_bar_prev.values
    theta_bar = theta_next.values + 0.5 * xi * eta * d
    d2 = omega_next.values - 2.0 * theta_bar + theta_bar_prev.values
    omega_bar = omega_next.values - 0.5 * eta * (1.0 - xi) * d2
    return ScalarField(grid, theta_bar), ScalarField(grid, omega_bar)


def _check_blowup(omega: ScalarField, cfg: MarchConfig, step_index: int) -> float:
    norm = l2_norm(omega)
    if not (math.isfinite(norm) and omega.is_finite()):
        raise DivergenceError(
            f"non-finite vorticity at step {step_index}", step_index, [])
    if norm > cfg.blowup_threshold:
        raise DivergenceError(
            f"vorticity norm {norm:.3e} exceeded threshold "
            f"{cfg.blowup_threshold:.3e} at step {step_index}", step_index, [])
    return norm


def _derive_velocity(omega: ScalarField, cfg: MarchConfig,
                     psi_guess: ScalarField | None,
                     velocity_override) -> tuple[ScalarField | None, ...]:
    if velocity_override is not None:
        u, v = velocity_override
        return None, u, v
    psi = solve_poisson_multigrid(omega, cfg.poisson, initial_guess=psi_guess)
    u, v = velocity_from_stream(psi)
    return psi, u, v


def init_march(data: ScalarField, cfg: MarchConfig,
               velocity_override=None) -> LeapfrogState:
    """Build the starting pair: theta^1 = data, omega^1 = data + dt*L(data),
    with velocities from the Poisson solve on data (or the override)."""
    theta1 = zero_ring(data)
    psi0, u0, v0 = _derive_velocity(theta1, cfg, None, velocity_override)
    ell = eval_L(theta1, u0, v0, cfg.nu)
    omega1 = ScalarField(data.grid, theta1.values + cfg.dt * ell.values)
    _check_blowup(omega1, cfg, 1)
    psi1, u1, v1 = _derive_velocity(omega1, cfg, psi0, velocity_override)
    return LeapfrogState(theta=theta1, omega=omega1, psi=psi1, u=u1, v=v1,
                         step_index=1, time=cfg.t_start + cfg.dt)


def step(state: LeapfrogState, cfg: MarchConfig,
         velocity_override=None) -> LeapfrogState:
    """One stabilized leapfrog step followed by the RAW filter and boundary
    re-zeroing; solves the Poisson problem for the produced state."""
    dt = cfg.dt
    sm = cfg.smoother
    grid = state.omega.grid

    u_adv, v_adv = (velocity_override if velocity_override is not None
                    else (state.u, state.v))
    theta_next = apply_S(state.omega, sm)
    ell = eval_L(state.omega, u_adv, v_adv, cfg.nu)
    omega_next = apply_S(
        ScalarField(grid, state.theta.values + 2.0 * dt * ell.values), sm)
    theta_bar, omega_bar = raw_filter(theta_next, omega_next, state.theta,
                                      cfg.raw_xi, cfg.raw_eta)
    theta_bar = zero_ring(theta_bar)
    omega_bar = zero_ring(omega_bar)
    _check_blowup(omega_bar, cfg, state.step_index + 1)
    psi, u, v = _derive_velocity(omega_bar, cfg, state.psi, velocity_override)
    return LeapfrogState(theta=theta_bar, omega=omega_bar, psi=psi, u=u, v=v,
                         step_index=state.step_index + 1, time=state.time + dt)


def _norm_row(state: LeapfrogState) -> NormRow:
    tn = l2_norm(state.theta)
    on = l2_norm(state.omega)
    row = NormRow(step=state.step_index, time=state.time, omega=on, theta=tn,
                  vec=math.hypot(tn, on))
    if state.psi is not None:
        speed = np.sqrt(state.u.values ** 2 + state.v.values ** 2)
        row = replace(row, psi=l2_norm(state.psi), u=l2_norm(state.u),
                      v=l2_norm(state.v), speed_max=float(speed.max()))
    return row


def march(data: ScalarField, cfg: MarchConfig, velocity_override=None,
          on_step=None) -> Trajectory:
    """Run init plus steps-1 leapfrog steps; on divergence the partial
    trajectory is attached to the raised DivergenceError."""
    traj = Trajectory(direction=cfg.direction, dt=cfg.dt)
    try:
        state = init_march(data, cfg, velocity_override)
        traj.norm_history.append(_norm_row(state))
        if on_step:
            on_step(state, traj.norm_history[-1])
        for _ in range(cfg.steps - 1):
            state = step(state, cfg, velocity_override)
            traj.norm_history.append(_norm_row(state))
            if on_step:
                on_step(state, traj.norm_history[-1])
            if cfg.snapshot_stride and state.step_index % cfg.snapshot_stride == 0:
                traj.snapshots.append(state.flow_state())
    except DivergenceError as err:
        err.norm_tail = [r.omega for r in traj.norm_history[-10:]]
        err.trajectory = traj
        raise
    traj.final = state.flow_state()
    return traj


def linear_exact_solution(data: ScalarField, sym: LinearSymbolConfig,
                          t: float) -> ScalarField:
    """Exact solution of the constant-coefficient problem: modes scaled by
    exp(g_{j,k} * t) under periodic extension."""
    import scipy.fft as sfft
    g = _symbol_grid(sym, data.grid.n)
    c = sfft.rfft2(data.values) * np.exp(g * t)
    return ScalarField(data.grid, sfft.irfft2(c, s=data.values.shape))


def linear_march(data: ScalarField, sym: LinearSymbolConfig, cfg: MarchConfig,
                 use_raw: bool = False, on_step=None) -> Trajectory:
    """March the frozen-coefficient problem with L applied spectrally.

    No boundary handling and (by default) no RAW filter, so the run matches
    the stability/error theory exactly on grid-representable modes.
    """
    dt = cfg.dt
    sm = cfg.smoother
    grid = data.grid

    def make_state(theta, omega, idx, time):
        return LeapfrogState(theta=theta, omega=omega, psi=None, u=None,
                             v=None, step_index=idx, time=time)

    traj = Trajectory(direction=cfg.direction, dt=dt)
    try:
        omega1 = ScalarField(
            grid, data.values + dt * apply_linear_symbol(data, sym).values)
        _check_blowup(omega1, cfg, 1)
        state = make_state(data, omega1, 1, cfg.t_start + dt)
        traj.norm_history.append(_norm_row(state))
        if on_step:
            on_step(state, traj.norm_history[-1])
        for _ in range(cfg.steps - 1):
            theta_next = apply_S(state.omega, sm)
            ell = apply_linear_symbol(state.omega, sym)
            omega_next = apply_S(
                ScalarField(grid, state.theta.values + 2.0 * dt * ell.values), sm)
            if use_raw:
                theta_next, omega_next = raw_filter(
                    theta_next, omega_next, state.theta, cfg.raw_xi, cfg.raw_eta)
            _check_blowup(omega_next, cfg, state.step_index + 1)
            state = make_state(theta_next, omega_next, state.step_index + 1,
                               state.time + dt)
            traj.norm_history.append(_norm_row(state))
            if on_step:
                on_step(state, traj.norm_history[-1])
            if cfg.snapshot_stride and state.step_index % cfg.snapshot_stride == 0:
                traj.snapshots.append(state.flow_state())
    except DivergenceError as err:
        err.norm_tail = [r.omega for r in traj.norm_history[-10:]]
        err.trajectory = traj
        raise
    traj.final = state.flow_state()
    return traj


def linear_operator_norm(sm: SmootherConfig, sym: LinearSymbolConfig,
                         grid: GridSpec) -> float:
    """Exact L2 operator norm of one linear stabilized leapfrog step.

    The step is diagonal per mode with 2x2 block sigma*[[0,1],[1,z]],
    z = 2*dt*g, whose norm is sigma*(|z| + sqrt(|z|^2 + 4))/2; the overall
    norm is the max over the grid's modes.
    """
    from .spectral import _centered_symbol_arrays
    r2, lam, absg = _centered_symbol_arrays(sym, grid)
    with np.errstate(under="ignore"):
        sigma = np.exp(-sm.gamma * sm.dt_abs * lam ** sm.p)
    z = 2.0 * sm.dt_abs * absg
    norms = sigma * 0.5 * (z + np.sqrt(z * z + 4.0))
    return float(norms.max())
