import logging

import numpy as np

from ...errors import DimensionMismatchError, OracleError
from .base import SetOracle

logger = logging.getLogger(__name__)


class FiniteSetOracle(SetOracle):
    """K = {m_1, ..., m_k}; distances are exact."""

    kind = 'finite-set'

    def __init__(self, measures, resolution=0.0):
        if not measures:
            raise OracleError("a finite-set oracle needs at least one measure")
        dims = {m.dim for m in measures}
        if len(dims) != 1:
            raise DimensionMismatchError("finite-set members of different dimensions")
        super().__init__(dims.pop(), resolution)
        self.measures = list(measures)

    def distance(self, measure):
        if measure.dim != self.dim:
            raise DimensionMismatchError(
                "measure of dimension {} against K in dimension {}".format(
                    measure.dim, self.dim))
        values = [self.measure_distance(measure, member) for member in self.measures]
        best = int(np.argmin(values))
        return float(values[best]), self.measures[best]

    def samples(self):
        return list(self.measures)

    def to_dict(self):
        return {'kind': self.kind, 'resolution': self.resolution,
                'measures': [m.to_dict() for m in self.measures]}
