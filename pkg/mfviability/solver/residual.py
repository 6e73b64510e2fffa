"""
Integrated defect of a solve: how far each trajectory's displacement over
[s, r] is from the step Aumann integral of F along the trajectory and the
flow.
"""
import logging

import numpy as np

from ..config import setting
from ..dynamics import dist_to_step_aumann, vectogram
from ..errors import PathError
from ..geometry import canonicalize

logger = logging.getLogger(__name__)


def _grid_index(grid, t):
    k = int(np.argmin(np.abs(grid - t)))
    if abs(grid[k] - t) > 1e-12:
        raise PathError("time {} is not a grid time".format(t))
    return k


def windows(a, b, width):
    """Split the step range [a, b) into consecutive windows of at most width steps."""
    return [(lo, min(lo + width, b)) for lo in range(a, b, width)]


def solution_residual(result, sys, s, r):
    """
    Sum over trajectories (weighted) of the distance from x(r) - x(s) to
    sum_k dt_k F(x(t_k), m(t_k)). Long ranges are cut into windows of at
    most aumann_max_pieces steps and the window residuals summed.
    """
    grid = result.bundle.grid
    a, b = _grid_index(grid, s), _grid_index(grid, r)
    if a >= b:
        raise PathError("solution residual needs s < r")
    width = setting('aumann_max_pieces')
    cover = result.bundle.cover_positions()
    dts = np.diff(grid)
    verts_cache = {}
    total = 0.0
    for k, weight in enumerate(result.bundle.weights):
        path_total = 0.0
        for lo, hi in windows(a, b, width):
            pieces = []
            for j in range(lo, hi):
                x = canonicalize(cover[k, j])
                key = (j, x.tobytes())
                if key not in verts_cache:
                    verts_cache[key] = vectogram(sys, x, result.flow[j])
                pieces.append((dts[j], verts_cache[key]))
            path_total += dist_to_step_aumann(cover[k, hi] - cover[k, lo], pieces)
        total += weight * path_total
    logger.debug("solution residual on [%g, %g]: %.3e", s, r, total)
    return float(total)
