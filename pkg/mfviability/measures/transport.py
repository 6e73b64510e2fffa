"""
Transport plans between atomic measures, the exact 1-Wasserstein distance,
pushforwards and distance to a set of measures.

W1 is computed exactly with the network simplex of POT (``ot.emd``) on the
torus cost matrix. On the circle (d = 1) a closed form is also available and
is used for value-only queries.
"""
import logging

import numpy as np
import ot

from ..config import setting
from ..errors import (DimensionMismatchError, InstanceTooLargeError,
                      MarginalMismatchError)
from ..geometry import TorusPoint, pairwise_distances
from .atomic import AtomicMeasure

logger = logging.getLogger(__name__)


class TransportPlan:
    """
    A coupling between two atomic measures, stored as the mass matrix indexed
    by (source atom, target atom) in the measures' atom ordering.
    """

    def __init__(self, source, target, mass, tol=None):
        mass = np.array(mass, dtype=float)
        if mass.shape != (source.size, target.size):
            raise MarginalMismatchError(
                "plan shape {} does not match measures ({}, {})".format(
                    mass.shape, source.size, target.size))
        if tol is None:
            tol = setting('plan_tolerance')
        if np.any(mass < -tol):
            raise MarginalMismatchError("plan has negative mass")
        mass = np.clip(mass, 0.0, None)
        row_err = np.max(np.abs(mass.sum(axis=1) - source.weights))
        col_err = np.max(np.abs(mass.sum(axis=0) - target.weights))
        if row_err > tol or col_err > tol:
            raise MarginalMismatchError(
                "plan marginals off by {:.3e} / {:.3e}".format(row_err, col_err))
        mass.setflags(write=False)
        self.source = source
        self.target = target
        self.mass = mass

    @classmethod
    def identity(cls, measure):
        return cls(measure, measure, np.diag(measure.weights))

    def cost(self, cost_matrix=None):
        """Integral of the ground cost (torus distance by default)."""
        if cost_matrix is None:
            cost_matrix = pairwise_distances(self.source.atoms, self.target.atoms)
        return float(np.sum(self.mass * cost_matrix))

    def conditional(self, i):
        """Conditional distribution over target atoms given source atom i."""
        return self.mass[i] / self.source.weights[i]

    def transpose(self):
        return TransportPlan(self.target, self.source, self.mass.T)

    def compose(self, other):
        """
        Composition pi_12 * pi_23 through the shared middle marginal:
        (pi_12 * pi_23)(i, k) = sum_j pi_12(i, j) pi_23(k | j).
        """
        if not self.target.is_close(other.source, tol=setting('plan_tolerance')):
            raise MarginalMismatchError(
                "composition requires the middle marginals to coincide")
        kernel = other.mass / other.source.weights[:, None]
        return TransportPlan(self.source, other.target, self.mass @ kernel)

    def __repr__(self):
        return "TransportPlan({}x{})".format(*self.mass.shape)


def _check_dims(m1, m2):
    if m1.dim != m2.dim:
        raise DimensionMismatchError(
            "dimension mismatch: {} vs {}".format(m1.dim, m2.dim))


def exact_emd(a, b, cost, cap=None):
    """
    Exact discrete OT between weight vectors a and b with the given cost.
    Among several optimal plans the network simplex returns a fixed one for a
    given row and column order; measures store their atoms in a canonical
    order, so plans between measures do not depend on input order.
    :return: (value, plan matrix)
    """
    if cap is None:
        cap = setting('wasserstein_max_atoms')
    size = max(len(a), len(b))
    if size > cap:
        raise InstanceTooLargeError(size, cap)
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    if len(a) == 1 or len(b) == 1:
        plan = np.outer(a, b)
    else:
        plan, log = ot.emd(a, b, cost, numItermax=10000000, log=True)
        if log.get('warning'):
            logger.warning("network simplex: %s", log['warning'])
    return float(np.sum(plan * cost)), plan


def wasserstein1(m1, m2):
    """
    Exact W1 between two atomic measures on T^d and an optimal plan.
    :return: (value, TransportPlan)
    """
    _check_dims(m1, m2)
    cost = pairwise_distances(m1.atoms, m2.atoms)
    value, plan = exact_emd(m1.weights, m2.weights, cost)
    return value, TransportPlan(m1, m2, plan)


def circle_wasserstein1(m1, m2):
    """
    Closed-form W1 on the circle T^1: min over alpha of the integral of
    |F1 - F2 - alpha|, attained at a length-weighted median of F1 - F2.
    """
    _check_dims(m1, m2)
    if m1.dim != 1:
        raise DimensionMismatchError("circle formula needs d = 1")
    z = np.concatenate([m1.atoms[:, 0], m2.atoms[:, 0]])
    signed = np.concatenate([m1.weights, -m2.weights])
    order = np.argsort(z, kind='stable')
    z = z[order]
    jumps = np.cumsum(signed[order])
    lengths = np.diff(np.append(z, z[0] + 1.0))
    keep = lengths > 0.0
    jumps, lengths = jumps[keep], lengths[keep]
    if jumps.size == 0:
        return 0.0
    by_value = np.argsort(jumps, kind='stable')
    cum = np.cumsum(lengths[by_value])
    alpha = jumps[by_value][np.searchsorted(cum, 0.5 * cum[-1])]
    return float(np.dot(lengths, np.abs(jumps - alpha)))


def wasserstein1_value(m1, m2):
    """W1 value only; uses the closed form on the circle."""
    if m1.dim == 1 and m2.dim == 1:
        return circle_wasserstein1(m1, m2)
    return wasserstein1(m1, m2)[0]


def pushforward(measure, h):
    """
    Image measure h#m. Colliding images are merged with summed weights.
    :param h: map TorusPoint -> TorusPoint (or array-like coordinates)
    """
    images = []
    for point in measure.points:
        image = h(point)
        images.append(image.coords if isinstance(image, TorusPoint)
                      else np.atleast_1d(np.asarray(image, dtype=float)))
    return AtomicMeasure(np.vstack(images), measure.weights)


def dist_to_measure_set(measure, oracle):
    """
    Distance from a measure to the set described by a SetOracle.
    :return: (distance, witness measure in the set)
    """
    return oracle.distance(measure)
