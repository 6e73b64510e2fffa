"""
Viability tools for mean-field type differential inclusions over finitely
supported measures on the flat torus.
"""
from .geometry import TorusPoint, Velocity, torus_distance, translate
from .measures import AtomicMeasure, TransportPlan, wasserstein1, pushforward, dist_to_measure_set
from .lifted import LiftedMeasure, lifted_metric, lifted_metric_joint_oracle
from .lifted import shift, rescale, compose
from .dynamics import ControlSystem, VectogramVertices, vectogram, dist_to_vectogram
from .dynamics import feasibility_residual, dist_to_step_aumann
from .paths import Trajectory, PathBundle, evaluate, concatenate, bundle_distance
from .paths import difference_quotient
from .viability import SetOracle, FiniteSetOracle, ParametricCurveOracle, DiracPairFamilyOracle
from .viability import TangencyReport, tangency_estimate, viability_condition_check
from .solver import SolveConfig, SolveResult, solve_forward, solve_viable, solution_residual

__version__ = '0.1.0'
