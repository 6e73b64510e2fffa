"""
Minimum-norm point of a polytope given by its generating points (Wolfe's
active-set method). Distances from a vector to a convex hull are computed by
shifting the generators and taking the norm of their minimum-norm point.
"""
import logging

import numpy as np

from ..config import setting

logger = logging.getLogger(__name__)

# distances below this are reported as exact zeros
_ZERO_SNAP = 1e-13


def _affine_minimizer(active_points):
    """
    Barycentric coordinates of the minimum-norm point of the affine hull of
    the given points: min |S^T a| subject to sum(a) = 1.
    """
    m = active_points.shape[0]
    kkt = np.zeros((m + 1, m + 1))
    kkt[:m, :m] = active_points @ active_points.T
    kkt[:m, m] = 1.0
    kkt[m, :m] = 1.0
    rhs = np.zeros(m + 1)
    rhs[m] = 1.0
    solution = np.linalg.lstsq(kkt, rhs, rcond=None)[0]
    return solution[:m]


def min_norm_point(points, tol=None, max_iter=None):
    """
    Wolfe's algorithm for the point of co(points) closest to the origin.
    :param points: array (k, d)
    :return: (point (d,), barycentric weights (k,))
    """
    if tol is None:
        tol = setting('projection_tolerance')
    if max_iter is None:
        max_iter = setting('projection_max_iterations')
    points = np.atleast_2d(np.asarray(points, dtype=float))
    k = points.shape[0]
    norms2 = np.einsum('ij,ij->i', points, points)
    scale = max(1.0, float(norms2.max()))
    gap_tol = max(tol * tol, 64.0 * np.finfo(float).eps) * scale

    start = int(np.argmin(norms2))
    active = [start]
    lam = np.array([1.0])
    x = points[start].copy()

    for iteration in range(max_iter):
        if x @ x <= tol * tol:
            break
        gaps = points @ x
        j = int(np.argmin(gaps))
        if x @ x - gaps[j] <= gap_tol or j in active:
            break
        active.append(j)
        lam = np.append(lam, 0.0)
        while True:
            alpha = _affine_minimizer(points[active])
            if np.all(alpha > 0.0):
                lam = alpha
                break
            falling = alpha < lam
            ratios = np.full(lam.shape, np.inf)
            ratios[falling] = lam[falling] / (lam[falling] - alpha[falling])
            blocking = int(np.argmin(ratios))
            theta = min(1.0, float(ratios[blocking]))
            lam = theta * alpha + (1.0 - theta) * lam
            lam[blocking] = 0.0
            keep = lam > 0.0
            active = [a for a, flag in zip(active, keep) if flag]
            lam = lam[keep] / lam[keep].sum()
            if len(active) == 1:
                lam = np.array([1.0])
                break
        x = lam @ points[active]
    else:
        logger.warning("min-norm point stopped after %d iterations", max_iter)

    weights = np.zeros(k)
    weights[active] = lam
    return x, weights


def distance_to_hull(v, vertices, tol=None):
    """
    Euclidean distance from v to co(vertices).
    :return: (distance, closest point of the hull)
    """
    vertices = np.atleast_2d(np.asarray(vertices, dtype=float))
    v = np.asarray(v, dtype=float)
    x, _ = min_norm_point(vertices - v, tol=tol)
    dist = float(np.linalg.norm(x))
    if dist <= _ZERO_SNAP:
        return 0.0, v.copy()
    return dist, v + x
