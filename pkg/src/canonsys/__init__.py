"""Inverse spectral problems for even diagonal canonical systems via periodization."""

from .convergence import (REFERENCES, ConvergenceReport, EligibilityReport, HatFunction,
                          ReferenceSolution, eligibility, psi_T, run_ladder)
from .expr import DensityExpr, EvaluationError, ExprSyntaxError, parse_density, to_source
from .measure import (BUILTINS, InvalidMeasureError, MeasureError, MeasureSpec, builtin,
                      load_measure, measure_from_dict, measure_to_dict, pw_diagnostic,
                      validate_even_positive)
from .moments import MomentSequence, compute_moments, moment_count
from .opuc import SzegoData, szego_from_moments, verify_step_identity
from .quadrature import QuadratureError, quadrature
from .recovery import (PiecewiseConstant, RecoveryBreakdown, StepFunction, convolution_residual,
                       h11_from_kernel, h22, kernel_transform, kernel_value_at_zero,
                       recover_from_moments, recover_hamiltonian)
from .toeplitz import NestedToeplitzSolve, ToeplitzBreakdown, dense_oracle_solve, solve_nested

__version__ = "0.1.0"
