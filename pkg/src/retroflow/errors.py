"""Exception types shared across the package."""


class RetroflowError(Exception):
    """Base class for all package errors."""


class ParameterError(RetroflowError, ValueError):
    """A configuration value is outside its documented range."""


class IngestionError(RetroflowError):
    """An input image does not meet the expected format/dimensions."""


class ConjugateSymmetryError(RetroflowError):
    """Inverse transform of coefficients left a non-negligible imaginary part."""


class PoissonConvergenceError(RetroflowError):
    """Multigrid failed to reach the residual target within max_cycles."""

    def __init__(self, msg: str, achieved_residual: float, cycles: int):
        super().__init__(msg)
        self.achieved_residual = achieved_residual
        self.cycles = cycles


class SymbolInfeasibleError(RetroflowError):
    """No cutoff index satisfies the stability conditions on the grid's modes
    (advection dominates diffusion at all resolvable scales)."""


class DivergenceError(RetroflowError):
    """A time march blew up (non-finite field or vorticity norm over threshold)."""

    def __init__(self, msg: str, step_index: int, norm_tail: list[float],
                 trajectory=None):
        super().__init__(msg)
        self.step_index = step_index
        self.norm_tail = norm_tail
        self.trajectory = trajectory
