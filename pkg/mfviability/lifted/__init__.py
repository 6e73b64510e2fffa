"""
Distributions on the tangent bundle with pinned base marginal: the space
L(m), its metric, the shift and rescaling operators and plan composition.
"""
from .lifted_measure import LiftedMeasure, zero_lift
from .operations import shift, rescale, compose
from .metric import lifted_metric, lifted_metric_joint_oracle, same_base
