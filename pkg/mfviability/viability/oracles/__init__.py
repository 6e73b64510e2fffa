"""
Constraint-set oracles. Each kind is selectable by name in configs.
"""
from .base import SetOracle
from .finite_set import FiniteSetOracle
from .parametric_curve import ParametricCurveOracle
from .dirac_pair import DiracPairFamilyOracle
from .translation import TranslationCurveOracle
