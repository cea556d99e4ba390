"""High-order finite-difference and WENO solvers for 1D reaction-diffusion traveling waves."""

from .config import PRESETS, ConfigError, RunConfig, parse_config
from .diagnostics import ErrorNorms, FrontTrack, convergence_order, error_norms, front_position, front_speed
from .grid import BoundarySpec, DomainError, Grid, StateField, apply_dirichlet, extend_with_ghosts, make_grid
from .integrator import Status, StepOutcome, TimeSpec, advance, rhs, rk3_step
from .kernels import Scheme, SchemeSpec, second_derivative, weno_flux
from .reactions import ModelKind, ReactionModel, exact_solution, exact_speed, reaction_term
from .runner import RunReport, run, run_table

__version__ = "0.1.0"
