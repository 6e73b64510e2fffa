import numpy as np

from ...errors import OracleError
from ...measures import AtomicMeasure
from .parametric_curve import ParametricCurveOracle


class DiracPairFamilyOracle(ParametricCurveOracle):
    """
    K = {1/2 delta_{c - t e} + 1/2 delta_{c + t e} : t in [0, epsilon]}.
    At t = 0 the pair collapses to delta_c. The curve moves at W1 speed |e|.
    """

    kind = 'dirac-pair-family'

    def __init__(self, center, epsilon, resolution, direction=None):
        center = np.atleast_1d(np.asarray(center, dtype=float))
        if direction is None:
            direction = np.zeros_like(center)
            direction[0] = 1.0
        direction = np.atleast_1d(np.asarray(direction, dtype=float))
        if direction.shape != center.shape:
            raise OracleError("pair direction and center differ in dimension")
        if epsilon < 0:
            raise OracleError("pair family needs epsilon >= 0")
        self.center = center
        self.direction = direction
        self.epsilon = float(epsilon)
        super().__init__(self.pair, 0.0, self.epsilon, float(np.linalg.norm(direction)),
                         resolution, center.shape[0], name='dirac-pair')

    def pair(self, t):
        offset = t * self.direction
        return AtomicMeasure([self.center - offset, self.center + offset], [0.5, 0.5])

    def to_dict(self):
        return {'kind': self.kind, 'resolution': self.resolution,
                'center': self.center.tolist(), 'epsilon': self.epsilon,
                'direction': self.direction.tolist()}
