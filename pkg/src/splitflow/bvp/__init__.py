"""First-order systems on a circle split into two arcs."""

from .boundary import (SplitConditions, arc_transfer, cauchy_data_space,
                       circle_cauchy_data, circle_kernel_dim, expm_batch,
                       periodic_kernel_dim, split_boundary_conditions,
                       transfer_matrix, transmission_lagrangian)
from .flow import (FlowResult, cauchy_path, diagonal_times, maslov_side,
                   minus_only, plus_after, spectral_flow_bvp, track)
from .galerkin import galerkin_eigenvalues, galerkin_matrix, galerkin_spectral_flow
from .problem import (Coefficients, ModelProblem, Piece, ProblemError, bulk_shift,
                      demo_problem, two_parameter_family, zero_family)
from .spectrum import Realization, SpectrumError, SpectrumReport, spectrum
from .theorems import VerificationReport, local_formula, verify_theorems

__all__ = [
    "SplitConditions", "arc_transfer", "cauchy_data_space", "circle_cauchy_data",
    "circle_kernel_dim", "expm_batch", "periodic_kernel_dim",
    "split_boundary_conditions", "transfer_matrix", "transmission_lagrangian",
    "FlowResult", "cauchy_path", "diagonal_times", "maslov_side", "minus_only",
    "plus_after", "spectral_flow_bvp", "track", "galerkin_eigenvalues",
    "galerkin_matrix", "galerkin_spectral_flow", "Coefficients", "ModelProblem",
    "Piece", "ProblemError", "bulk_shift", "demo_problem", "two_parameter_family",
    "zero_family", "Realization", "SpectrumError", "SpectrumReport", "spectrum",
    "VerificationReport", "local_formula", "verify_theorems",
]
