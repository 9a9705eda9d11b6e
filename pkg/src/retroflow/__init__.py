"""2D incompressible Navier-Stokes (stream-function/vorticity) marched
forward and backward in time with a stabilized, RAW-filtered leapfrog scheme,
plus the uncertainty/stability analytics and an image-based assimilation
pipeline."""

from .errors import (ConjugateSymmetryError, DivergenceError, IngestionError,
                     ParameterError, PoissonConvergenceError, RetroflowError,
                     SymbolInfeasibleError)
from .fields import (GridSpec, ScalarField, apply_taper, ddx, ddy, inner,
                     l2_norm, laplacian, sample, velocity_from_stream,
                     vorticity_from_stream, zero_ring)
from .spectral import (LinearSymbolConfig, SmootherConfig, SpectralField,
                       StabilityReport, apply_P, apply_S, forward_transform,
                       gamma_floor, inverse_transform, lambda_coeff,
                       linear_symbol, select_lambda_J, smoothing_factor,
                       verify_lemma1)
from .poisson import (MultigridConfig, residual, solve_poisson_multigrid,
                      solve_poisson_spectral)
from .dynamics import (FlowState, LeapfrogState, MarchConfig, Trajectory,
                       eval_L, init_march, linear_exact_solution,
                       linear_march, linear_operator_norm, march, raw_filter,
                       step)
from .analysis import (AssimilationReport, ErrorBudget, KnopsPayneInput,
                       KnopsPayneOutput, k_constants, knops_payne, lemma2_B,
                       norm_report, reynolds, theorem_error_bound,
                       total_error_bound, u_max, uncertainty_bound)
from .imageio import (IntensityImage, field_to_image, intensity_to_stream,
                      load_image, save_pgm, save_png)
from .pipeline import AssimilationResult, desired_state, run_assimilation

__version__ = "0.1.0"
