"""
Polygonal trajectories on T^d over a time grid.

A trajectory is its canonical start point plus one displacement per grid
segment, read in the universal cover R^d, so wrapping segments stay
unambiguous. Positions are canonicalized only when read out.
"""
import numpy as np

from ..errors import PathError
from ..geometry import TorusPoint, canonicalize

# grid times closer than this to the span ends are clamped
TIME_SLACK = 1e-12


def check_grid(grid):
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.shape[0] < 2:
        raise PathError("a time grid needs at least two nodes")
    if not np.all(np.isfinite(grid)) or np.any(np.diff(grid) <= 0.0):
        raise PathError("time grid must be finite and strictly increasing")
    return grid


def locate(grid, t):
    """
    Segment index k and local fraction s with t = t_k + s (t_{k+1} - t_k).
    """
    if t < grid[0] - TIME_SLACK or t > grid[-1] + TIME_SLACK:
        raise PathError("time {} outside the grid span [{}, {}]".format(t, grid[0], grid[-1]))
    t = min(max(t, grid[0]), grid[-1])
    k = int(np.searchsorted(grid, t, side='right')) - 1
    k = min(max(k, 0), grid.shape[0] - 2)
    s = (t - grid[k]) / (grid[k + 1] - grid[k])
    return k, s


class Trajectory:
    """
    x(.) in C([t_0, t_M]; T^d), piecewise linear in the cover.
    :attributes
        grid: times t_0 < ... < t_M
        start: canonical x(t_0)
        displacements: (M, d) cover displacement of each segment
    """

    def __init__(self, grid, start, displacements):
        self.grid = check_grid(grid)
        self.start = canonicalize(np.atleast_1d(np.asarray(start, dtype=float)))
        displacements = np.asarray(displacements, dtype=float).reshape(
            self.grid.shape[0] - 1, self.start.shape[0])
        if not np.all(np.isfinite(displacements)):
            raise PathError("segment displacements must be finite")
        self.displacements = displacements

    @property
    def dim(self):
        return self.start.shape[0]

    def cover_positions(self):
        """Positions at the grid nodes in the universal cover, (M + 1, d)."""
        return np.vstack([self.start, self.start + np.cumsum(self.displacements, axis=0)])

    @property
    def points(self):
        return [TorusPoint(x) for x in self.cover_positions()]

    def position(self, t):
        """x(t) as a TorusPoint."""
        k, s = locate(self.grid, t)
        cover = self.cover_positions()
        return TorusPoint(cover[k] + s * self.displacements[k])

    def speeds(self):
        """Per-segment speeds |displacement| / dt."""
        return np.linalg.norm(self.displacements, axis=1) / np.diff(self.grid)

    def __repr__(self):
        return "Trajectory(d={}, t=[{:g}, {:g}], segments={})".format(
            self.dim, self.grid[0], self.grid[-1], self.displacements.shape[0])
