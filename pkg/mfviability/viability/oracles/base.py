"""
This module defines an abstract class for constraint-set oracles.
Any description of a set K of measures used by the tangency test, the
condition check or the viable solver must inherit from this class.
"""
from abc import ABC, abstractmethod

from ...measures import wasserstein1_value


class SetOracle(ABC):
    """
    Distance and projection interface for a set K of atomic measures.
    :attributes
        kind: the oracle family name used in configs
        dim: ambient dimension of the measures in K
        resolution: declared accuracy of the reported distance; 0 means
            the distance is exact
        accuracy: absolute round-off of a reported distance on top of the
            resolution
    """

    kind = None
    accuracy = 1e-12

    def __init__(self, dim, resolution=0.0):
        if resolution < 0:
            raise ValueError("oracle resolution must be nonnegative")
        self.dim = int(dim)
        self.resolution = float(resolution)

    @abstractmethod
    def distance(self, measure):
        """
        Approximate dist(measure, K) and a member of K attaining it.
        :return: (distance, AtomicMeasure in K)
        """
        pass

    @abstractmethod
    def samples(self):
        """A finite list of members of K."""
        pass

    @abstractmethod
    def to_dict(self):
        pass

    def contains(self, measure, tol=None):
        if tol is None:
            tol = self.resolution
        return self.distance(measure)[0] <= tol + 1e-12

    @staticmethod
    def measure_distance(m1, m2):
        return wasserstein1_value(m1, m2)

    def __repr__(self):
        return "{}(d={}, resolution={:g})".format(type(self).__name__, self.dim,
                                                  self.resolution)
