"""
Controlled dynamics: vectograms, projections onto them and step Aumann
integrals.
"""
from .control_system import ControlSystem, ValidationReport, VectogramVertices
from .control_system import vectogram, dist_to_vectogram, project_to_vectogram
from .control_system import feasibility_residual
from .aumann import dist_to_step_aumann, step_aumann_generators, integrated_aumann_bound
from .catalog import BUILTIN_SYSTEMS, BUILTIN_SELECTORS, build_system, build_selector
from .projection import min_norm_point, distance_to_hull
