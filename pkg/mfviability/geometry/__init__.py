"""
Flat torus geometry: canonical representatives, the wraparound metric and
the shift map.
"""
from .torus import TorusPoint, Velocity
from .torus import torus_distance, translate
from .torus import canonicalize, displacement, distance_array, pairwise_distances, point_key
