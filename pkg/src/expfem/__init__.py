"""Exponential-integrator finite element solver for semilinear parabolic
equations u_t = D*lap(u) + f(t, u) on rectangular tensor-product grids.

The spatial mass/stiffness pairs diagonalize simultaneously in sine or
Fourier bases, so each time step costs a handful of fast transforms plus
entrywise work.  See the README for the CLI and config format.
"""

from .analysis import (StudyReport, StudyRow, TimeSeriesObserver,
                       convergence_study, discrete_energy, error_norms,
                       sup_norm, timing_study)
from .assembly import (LoadContext, dense_semidiscrete_rhs, initial_state,
                       transformed_load)
from .mesh import (BoundaryKind, Dirichlet, HomogeneousDirichlet, Partition1D,
                   Periodic, TensorMesh, dof_shape, make_mesh,
                   node_coordinates)
from .operator import DiagonalizedOperator, build_operator, phi, phi_tensor
from .problems import (NonlinearityDomainError, Problem,
                       builtin_allen_cahn_wave, builtin_flory_huggins,
                       builtin_linear_rd, mesh_for)
from .stepper import (SchemeConfig, SolverState, exp_euler_step, exp_rk2_step,
                      run)
from .tensor_ops import exp_entrywise, hadamard, mode_multiply
from .transforms import (AxisSpectrum, axis_spectrum, basis_matrix,
                         build_axis_matrices, forward_transform,
                         inverse_transform)

__version__ = "0.1.0"

__all__ = [
    "AxisSpectrum", "BoundaryKind", "Dirichlet", "DiagonalizedOperator",
    "HomogeneousDirichlet", "LoadContext", "NonlinearityDomainError",
    "Partition1D", "Periodic", "Problem", "SchemeConfig", "SolverState",
    "StudyReport", "StudyRow", "TensorMesh", "TimeSeriesObserver",
    "axis_spectrum", "basis_matrix", "build_axis_matrices", "build_operator",
    "builtin_allen_cahn_wave", "builtin_flory_huggins", "builtin_linear_rd",
    "convergence_study", "dense_semidiscrete_rhs", "discrete_energy",
    "dof_shape", "error_norms", "exp_entrywise", "exp_euler_step",
    "exp_rk2_step", "forward_transform", "hadamard", "initial_state",
    "inverse_transform", "make_mesh", "mesh_for", "mode_multiply",
    "node_coordinates", "phi", "phi_tensor", "run", "sup_norm",
    "timing_study", "transformed_load",
]
