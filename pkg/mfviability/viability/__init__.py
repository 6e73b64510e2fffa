"""
Constraint sets, the tangency estimator and the viability condition check.
"""
from .oracles import SetOracle, FiniteSetOracle, ParametricCurveOracle, DiracPairFamilyOracle
from .oracles import TranslationCurveOracle
from .tangency import TangencyReport, tangency_estimate, tau_ladder, shift_ratio, judge
from .tangency import TANGENT, NOT_TANGENT, INCONCLUSIVE
from .condition import ConditionResult, viability_condition_check
