"""Boundary control of an elliptic obstacle problem on a fixed disk.

The state is the solution of a discrete obstacle problem (a QP); the
control is a periodic shape-preserving cubic Hermite interpolant of knot
values on the circle; the cost measures the area where the state is
negative plus penalties for missing the target contact region and for
leaving the control box.  Gradients come from one adjoint solve with the
contact set frozen, and two BFGS variants drive the minimization.
"""

from .bfgs import OptimizerConfig, OptRunTrace, compare_runs, minimize
from .config import RunConfig
from .fem import (DiscreteObstacleProblem, assemble_load, assemble_stiffness,
                  build_problem, interpolate_nodal, unconstrained_dirichlet_solve)
from .mesh import TriMesh, boundary_parameterization, generate_disk_mesh, load_mesh, save_mesh
from .objective import EvalRecord, ObjectiveConfig, ReducedObjective, evaluate, gradient, heaviside_smooth
from .obstacle import ObstacleSolveError, StateSolution, contact_nodes, psor_oracle, solve_obstacle
from .pchip import ControlVector, control_jacobian, control_trace, fc_slopes, kink_sweep, pchip_eval

__all__ = [
    "OptimizerConfig", "OptRunTrace", "compare_runs", "minimize",
    "RunConfig",
    "DiscreteObstacleProblem", "assemble_load", "assemble_stiffness",
    "build_problem", "interpolate_nodal", "unconstrained_dirichlet_solve",
    "TriMesh", "boundary_parameterization", "generate_disk_mesh", "load_mesh", "save_mesh",
    "EvalRecord", "ObjectiveConfig", "ReducedObjective", "evaluate", "gradient", "heaviside_smooth",
    "ObstacleSolveError", "StateSolution", "contact_nodes", "psor_oracle", "solve_obstacle",
    "ControlVector", "control_jacobian", "control_trace", "fc_slopes", "kink_sweep", "pchip_eval",
]

__version__ = "0.1.0"
