"""
Path bundles: probabilities over polygonal trajectories on T^d.
"""
from .trajectory import Trajectory
from .bundle import PathBundle
from .bundle import evaluate, concatenate, bundle_distance, difference_quotient
from .trace import write_particle_trace, read_particle_trace
