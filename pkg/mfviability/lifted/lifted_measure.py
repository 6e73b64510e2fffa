"""
Probabilities on the tangent bundle T^d x R^d with a pinned base marginal,
the space L(m). A lifted measure is stored as its base measure plus one
fiber (conditional velocity distribution) per base atom.
"""
import logging

import numpy as np

from ..config import setting
from ..errors import DimensionMismatchError, InvalidMeasureError
from ..measures import AtomicMeasure, merge_support
from ..measures.atomic import as_point_array

logger = logging.getLogger(__name__)


def _normalize_fiber(velocities, weights, dim):
    velocities = np.asarray(velocities, dtype=float)
    if velocities.ndim == 1:
        velocities = velocities.reshape(-1, dim)
    weights = np.atleast_1d(np.asarray(weights, dtype=float))
    if velocities.shape[0] != weights.shape[0] or velocities.shape[0] == 0:
        raise InvalidMeasureError("fiber needs matching, non-empty velocities and weights")
    if velocities.shape[1] != dim:
        raise DimensionMismatchError(
            "fiber velocity dimension {} differs from base dimension {}".format(
                velocities.shape[1], dim))
    if not np.all(np.isfinite(velocities)) or np.any(weights <= 0.0):
        raise InvalidMeasureError("fiber velocities must be finite and weights positive")
    total = float(np.sum(weights))
    if abs(total - 1.0) > setting('weight_tolerance'):
        raise InvalidMeasureError("fiber weights sum to {!r}, expected 1".format(total))
    unique, merged, _ = merge_support(velocities, weights / total, periodic=False)
    return unique, merged


class LiftedMeasure:
    """
    beta in L(m): the base measure m and, for each base atom x_i, a finite
    distribution of velocities (the fiber at x_i). The marginal on T^d is the
    base by construction.
    """

    def __init__(self, base, fibers):
        """
        :param base: AtomicMeasure
        :param fibers: one (velocities, weights) pair per base atom, in the
            base's atom order
        """
        if len(fibers) != base.size:
            raise InvalidMeasureError(
                "{} fibers for {} base atoms".format(len(fibers), base.size))
        self.base = base
        self._fibers = []
        for velocities, weights in fibers:
            v, w = _normalize_fiber(velocities, weights, base.dim)
            v.setflags(write=False)
            w.setflags(write=False)
            self._fibers.append((v, w))

    @classmethod
    def from_support(cls, points, velocities, weights):
        """
        Build from flat support: the i-th support point is (points[i],
        velocities[i]) with mass weights[i]. Points are merged into the base.
        """
        base, inverse = AtomicMeasure.with_index(points, weights)
        velocities = as_point_array(velocities, base.dim)
        weights = np.asarray(weights, dtype=float) / float(np.sum(weights))
        fibers = []
        for i in range(base.size):
            members = np.flatnonzero(inverse == i)
            fiber_w = weights[members]
            fibers.append((velocities[members], fiber_w / fiber_w.sum()))
        return cls(base, fibers)

    @property
    def dim(self):
        return self.base.dim

    @property
    def fibers(self):
        return list(self._fibers)

    def fiber(self, i):
        """(velocities, weights) of the fiber at base atom i."""
        return self._fibers[i]

    def support(self):
        """
        Flat support of beta.
        :return: (positions (N, d), velocities (N, d), masses (N,))
        """
        positions, velocities, masses = [], [], []
        for x, m, (v, w) in zip(self.base.atoms, self.base.weights, self._fibers):
            positions.append(np.repeat(x[None, :], v.shape[0], axis=0))
            velocities.append(v)
            masses.append(m * w)
        return np.vstack(positions), np.vstack(velocities), np.concatenate(masses)

    @property
    def support_size(self):
        return sum(v.shape[0] for v, _ in self._fibers)

    def first_moment(self):
        """Integral of |v| against beta."""
        _, velocities, masses = self.support()
        return float(np.dot(masses, np.linalg.norm(velocities, axis=1)))

    def is_close(self, other, tol=1e-10):
        if not self.base.is_close(other.base, tol):
            return False
        for (v1, w1), (v2, w2) in zip(self._fibers, other._fibers):
            if v1.shape != v2.shape:
                return False
            if np.max(np.abs(v1 - v2)) > tol or np.max(np.abs(w1 - w2)) > tol:
                return False
        return True

    def to_dict(self):
        data = self.base.to_dict()
        data['fibers'] = [
            {'atom': i, 'velocities': v.tolist(), 'weights': w.tolist()}
            for i, (v, w) in enumerate(self._fibers)]
        return data

    @classmethod
    def from_dict(cls, data):
        base = AtomicMeasure.from_dict(data)
        try:
            by_atom = {int(f['atom']): (f['velocities'], f['weights'])
                       for f in data['fibers']}
        except (KeyError, TypeError) as e:
            raise InvalidMeasureError("malformed lifted measure literal: {}".format(e))
        if sorted(by_atom) != list(range(base.size)):
            raise InvalidMeasureError(
                "lifted measure literal needs one fiber per (merged) base atom")
        return cls(base, [by_atom[i] for i in range(base.size)])

    def __repr__(self):
        return "LiftedMeasure(d={}, atoms={}, support={})".format(
            self.dim, self.base.size, self.support_size)


def zero_lift(measure):
    """The lift of m with every fiber a Dirac at the zero velocity."""
    zero = np.zeros((1, measure.dim))
    return LiftedMeasure(measure, [(zero, [1.0])] * measure.size)
