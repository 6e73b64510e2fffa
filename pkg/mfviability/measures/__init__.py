"""
Finitely supported probabilities on the torus, exact W1 and transport plans.
"""
from .atomic import AtomicMeasure, merge_support
from .transport import TransportPlan
from .transport import wasserstein1, wasserstein1_value, circle_wasserstein1
from .transport import exact_emd, pushforward, dist_to_measure_set
