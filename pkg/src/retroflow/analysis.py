"""Scalar analytics: flow diagnostics (U_max, Reynolds number), the
logarithmic-convexity uncertainty calculator for backward continuation,
the error-budget constants of the linear marching theory, and the
three-column norm report produced by an assimilation run.

The uncertainty factors straddle many orders of magnitude, so mu/Gamma/bound
arithmetic is done in the log domain with expm1/log1p compensation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import FlowState
from .errors import ParameterError
from .fields import ScalarField, l2_norm

__all__ = [
    "KnopsPayneInput", "KnopsPayneOutput", "ErrorBudget", "AssimilationReport",
    "u_max", "reynolds", "knops_payne", "uncertainty_bound", "k_constants",
    "lemma2_B", "total_error_bound", "theorem_error_bound", "norm_report",
]

_EXP_MAX = 709.0  # largest safe argument to math.exp


def u_max(u: ScalarField, v: ScalarField) -> float:
    """Max over grid nodes of sqrt(u^2 + v^2)."""
    return float(np.sqrt(u.values ** 2 + v.values ** 2).max())


def reynolds(u_max_value: float, nu: float, area: float = 1.0) -> float:
    """RE = sqrt(A) * U_max / nu."""
    return math.sqrt(area) * u_max_value / nu


@dataclass(frozen=True)
class KnopsPayneInput:
    """Bounds feeding the backward-uncertainty calculator: velocity-class and
    full-class sup bounds E^2, Q^2, viscosity, horizon T, a-priori size M of
    the initial discrepancy and data error delta at T."""

    E_sq: float
    Q_sq: float
    nu: float
    T: float
    M: float
    delta: float

    def __post_init__(self):
        for name in ("E_sq", "Q_sq", "nu", "T", "M", "delta"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be > 0")

    @property
    def m_exceeds_delta(self) -> bool:
        """The bound is only informative when M >> delta."""
        return self.M > self.delta


def _log_expm1(x: float) -> float:
    if x > _EXP_MAX:
        return x  # expm1(x) ~ exp(x)
    return math.log(math.expm1(x))


@dataclass(frozen=True)
class KnopsPayneOutput:
    a: float
    b: float
    c: float
    T: float
    M: float
    delta: float

    def mu(self, t: float) -> float:
        """mu(t) = (e^{at} - 1)/(e^{aT} - 1), evaluated overflow-safely."""
        if t <= 0.0:
            return 0.0
        if t >= self.T:
            return 1.0
        return math.exp(_log_expm1(self.a * t) - _log_expm1(self.a * self.T))

    def log_gamma(self, t: float) -> float:
        """log of the amplification factor Gamma(t) = exp(c*(t - mu(t)*T))."""
        return self.c * (t - self.mu(t) * self.T)

    def gamma(self, t: float) -> float:
        lg = self.log_gamma(t)
        return math.exp(lg) if lg <= _EXP_MAX else math.inf

    def bound(self, t: float) -> float:
        """Gamma(t) * M^(1-mu) * delta^mu with the stored M, delta."""
        return uncertainty_bound(self, self.M, self.delta, t)


def knops_payne(inp: KnopsPayneInput) -> KnopsPayneOutput:
    """a = 2(E^2+1)/nu, b = Q^2(1 + a/nu), c = b/a, plus the mu/Gamma/bound
    evaluators built on them."""
    a = 2.0 * (inp.E_sq + 1.0) / inp.nu
    b = inp.Q_sq * (1.0 + a / inp.nu)
    c = b / a
    return KnopsPayneOutput(a=a, b=b, c=c, T=inp.T, M=inp.M, delta=inp.delta)


def uncertainty_bound(out: KnopsPayneOutput, M: float, delta: float,
                      t: float) -> float:
    """Log-domain evaluation of Gamma(t) * M^(1-mu(t)) * delta^mu(t)."""
    if M <= 0 or delta <= 0:
        raise ParameterError("M and delta must be > 0")
    mu = out.mu(t)
    log_b = out.log_gamma(t) + (1.0 - mu) * math.log(M) + mu * math.log(delta)
    return math.exp(log_b) if log_b <= _EXP_MAX else math.inf


@dataclass(frozen=True)
class ErrorBudget:
    """Constants K1..K4 of the marching error bounds."""

    lambda_J: float
    p: float
    T: float
    dt_abs: float
    B: float
    K1: float
    K2: float
    K3: float
    K4: float | None = None
    norm_P_omega: float | None = None
    norm_omega_ttt: float | None = None


def lemma2_B(dt_abs: float, norm_PL_omega: float, norm_P_omega: float) -> float:
    """B = sqrt(1 + (8/3)*dt^2 * |||PLw||| / |||Pw|||)."""
    if norm_P_omega <= 0:
        raise ParameterError("norm_P_omega must be > 0")
    return math.sqrt(1.0 + (8.0 / 3.0) * dt_abs ** 2 * norm_PL_omega / norm_P_omega)


def k_constants(lambda_J: float, p: float, T: float, dt_abs: float,
                B: float = 1.0, norm_P_omega: float | None = None,
                norm_omega_ttt: float | None = None) -> ErrorBudget:
    """K1 = e^{4*lambda_J*T}, K2 = sqrt(3)*B*lambda_J^{-p}*(K1-1),
    K3 = (24*lambda_J)^{-1}*dt^2*(K1-1); K4 needs the two norm inputs."""
    if lambda_J <= 0:
        raise ParameterError(f"lambda_J must be > 0, got {lambda_J}")
    x = 4.0 * lambda_J * T
    K1 = math.exp(x) if x <= _EXP_MAX else math.inf
    em1 = math.expm1(x) if x <= _EXP_MAX else math.inf
    K2 = math.sqrt(3.0) * B * lambda_J ** (-p) * em1
    K3 = dt_abs ** 2 * em1 / (24.0 * lambda_J)
    K4 = None
    if norm_P_omega is not None and norm_omega_ttt is not None:
        K4 = K2 * norm_P_omega + K3 * norm_omega_ttt
    return ErrorBudget(lambda_J=lambda_J, p=p, T=T, dt_abs=dt_abs, B=B,
                       K1=K1, K2=K2, K3=K3, K4=K4,
                       norm_P_omega=norm_P_omega, norm_omega_ttt=norm_omega_ttt)


def total_error_bound(delta: float, budget: ErrorBudget) -> float:
    """delta*(1 + K1^2) + K4*(1 + K1): total data-assimilation error at T."""
    if budget.K4 is None:
        raise ParameterError("budget.K4 unavailable; supply the norm inputs")
    return delta * (1.0 + budget.K1 ** 2) + budget.K4 * (1.0 + budget.K1)


def theorem_error_bound(n: int, budget: ErrorBudget, delta: float,
                        direction: str) -> float:
    """Right-hand side of the forward/backward marching error bound after n
    leapfrog steps (exponent 4*n*|dt|*lambda_J).

    For the forward theorem `delta` plays the role of the initial error
    |E^1|; for the backward theorem it is the data error at time T.  The two
    penalty terms need |||P w||| and |||w_ttt||| in the budget (K4 inputs).
    """
    if direction not in ("forward", "backward"):
        raise ParameterError(f"direction must be forward/backward, got {direction!r}")
    if budget.norm_P_omega is None or budget.norm_omega_ttt is None:
        raise ParameterError("budget lacks the norm inputs |||Pw|||, |||w_ttt|||")
    lam = budget.lambda_J
    x = 4.0 * n * budget.dt_abs * lam
    e = math.exp(x) if x <= _EXP_MAX else math.inf
    em1 = math.expm1(x) if x <= _EXP_MAX else math.inf
    penalty = (math.sqrt(3.0) * budget.B * lam ** (-budget.p) * em1
               * budget.norm_P_omega
               + budget.dt_abs ** 2 * em1 * budget.norm_omega_ttt
               / (24.0 * lam))
    return e * delta + penalty


@dataclass(frozen=True)
class AssimilationReport:
    """Desired-at-T / computed-at-0 / evolved-at-T L2 norms plus diagnostics."""

    rows: dict  # variable -> (desired_T, computed_0, evolved_T)
    u_max: float | None = None
    reynolds: float | None = None
    runtime_s: float | None = None
    params: dict = field(default_factory=dict)

    VARIABLES = ("psi", "u", "v", "omega")

    def to_text(self) -> str:
        head = f"{'variable':<10}{'desired@T':>16}{'computed@0':>16}{'evolved@T':>16}"
        lines = [head, "-" * len(head)]
        for var in self.VARIABLES:
            d, c, e = self.rows[var]
            lines.append(f"{var:<10}{d:>16.6g}{c:>16.6g}{e:>16.6g}")
        if self.u_max is not None:
            lines.append(f"U_max = {self.u_max:.6g}")
        if self.reynolds is not None:
            lines.append(f"RE = {self.reynolds:.6g}")
        if self.runtime_s is not None:
            lines.append(f"runtime_s = {self.runtime_s:.3f}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "rows": {k: list(v) for k, v in self.rows.items()},
            "u_max": self.u_max,
            "reynolds": self.reynolds,
            "params": self.params,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _state_norms(s: FlowState) -> dict:
    return {
        "psi": l2_norm(s.psi) if s.psi is not None else 0.0,
        "u": l2_norm(s.u) if s.u is not None else 0.0,
        "v": l2_norm(s.v) if s.v is not None else 0.0,
        "omega": l2_norm(s.omega),
    }


def norm_report(desired_T: FlowState, computed_0: FlowState,
                evolved_T: FlowState, u_max_value: float | None = None,
                reynolds_value: float | None = None,
                runtime_s: float | None = None,
                params: dict | None = None) -> AssimilationReport:
    """Assemble the 4x3 norm table; U_max/RE default to the desired state's
    values when not supplied from a trajectory scan."""
    nd, nc, ne = (_state_norms(s) for s in (desired_T, computed_0, evolved_T))
    rows = {var: (nd[var], nc[var], ne[var]) for var in AssimilationReport.VARIABLES}
    if u_max_value is None and desired_T.u is not None:
        u_max_value = u_max(desired_T.u, desired_T.v)
    if reynolds_value is None and u_max_value is not None and params:
        nu = params.get("nu")
        if nu:
            reynolds_value = reynolds(u_max_value, nu)
    return AssimilationReport(rows=rows, u_max=u_max_value,
                              reynolds=reynolds_value, runtime_s=runtime_s,
                              params=params or {})
