"""
Aumann integrals of piecewise-constant vectograms.

Over a step grid the integral of t -> F(x(t), m(t)) is the Minkowski sum of
duration-scaled hulls; its generating set is the set of all sums of scaled
vertex selections, pruned to its convex hull vertices after every piece.
"""
import logging

import numpy as np
from scipy.spatial import ConvexHull

try:
    from scipy.spatial import QhullError
except ImportError:  # scipy < 1.11
    from scipy.spatial.qhull import QhullError

from ..config import setting
from ..errors import InstanceTooLargeError
from ..measures import merge_support
from .projection import distance_to_hull

logger = logging.getLogger(__name__)


def _prune(points):
    points, _, _ = merge_support(points, np.ones(points.shape[0]), periodic=False)
    if points.shape[0] <= points.shape[1] + 1:
        return points
    if points.shape[1] == 1:
        return np.array([[points.min()], [points.max()]])
    try:
        hull = ConvexHull(points)
    except QhullError:
        # flat sum set, keep every generator
        return points
    return points[np.sort(hull.vertices)]


def step_aumann_generators(pieces):
    """
    Generators of sum_i duration_i * co(verts_i).
    :param pieces: list of (duration, VectogramVertices)
    :return: array (k, d)
    """
    max_pieces = setting('aumann_max_pieces')
    max_vertices = setting('aumann_max_vertices')
    if not pieces:
        raise ValueError("an Aumann integral needs at least one piece")
    if len(pieces) > max_pieces:
        raise InstanceTooLargeError(len(pieces), max_pieces)
    total = None
    for duration, verts in pieces:
        if duration <= 0:
            raise ValueError("piece durations must be positive, got {}".format(duration))
        if len(verts) > max_vertices:
            raise InstanceTooLargeError(len(verts), max_vertices)
        scaled = duration * verts.vertices
        if total is None:
            total = scaled
        else:
            total = (total[:, None, :] + scaled[None, :, :]).reshape(-1, scaled.shape[1])
        total = _prune(total)
    return total


def dist_to_step_aumann(dx, pieces):
    """
    Distance from the displacement dx to the step Aumann integral.
    :param dx: displacement vector (d,)
    :param pieces: list of (duration, VectogramVertices)
    """
    generators = step_aumann_generators(pieces)
    dx = np.atleast_1d(np.asarray(getattr(dx, 'comps', dx), dtype=float))
    return distance_to_hull(dx, generators)[0]


def integrated_aumann_bound(dy, durations, position_gaps, measure_gaps, lipschitz_L):
    """
    Upper bound on |dist(y, int F(x, m)) - dist(y', int F(x', m'))| for two
    step paths: |y - y'| + L sum_k duration_k (rho(x_k, x'_k) + W1(m_k, m'_k)).
    :param dy: |y - y'|
    :param durations: piece durations
    :param position_gaps: rho(x_k, x'_k) per piece
    :param measure_gaps: W1(m_k, m'_k) per piece
    """
    durations = np.asarray(durations, dtype=float)
    gaps = np.asarray(position_gaps, dtype=float) + np.asarray(measure_gaps, dtype=float)
    return float(dy + lipschitz_L * np.dot(durations, gaps))
