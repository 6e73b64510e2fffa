"""
Forward and viability-tracking Euler solvers, the solution residual and the
certificate checks run on finished solves.
"""
from .config import SolveConfig, FORWARD, VIABLE, MODES
from .result import SolveResult
from .schemes import EulerScheme, ForwardSelectorScheme, ViableTrackingScheme
from .schemes import make_scheme, solve_forward, solve_viable
from .residual import solution_residual
from .certificates import Certificate, run_certificates
