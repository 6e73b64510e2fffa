"""
Finitely supported probabilities on trajectory space (path bundles), with
the evaluation maps, concatenation, the sup-metric W1 and the difference
quotient Delta^tau.
"""
import logging

import numpy as np

from ..config import setting
from ..errors import ConcatenationError, InvalidMeasureError, PathError
from ..geometry import canonicalize, distance_array
from ..lifted import LiftedMeasure
from ..measures import AtomicMeasure, exact_emd, merge_support
from .trajectory import TIME_SLACK, Trajectory, check_grid, locate

logger = logging.getLogger(__name__)


class PathBundle:
    """
    chi: N weighted polygonal trajectories on a shared grid.
    Stored as arrays: starts (N, d), displacements (N, M, d), weights (N,).
    """

    def __init__(self, grid, starts, displacements, weights):
        self.grid = check_grid(grid)
        starts = np.atleast_2d(np.asarray(starts, dtype=float))
        n, d = starts.shape
        displacements = np.asarray(displacements, dtype=float).reshape(
            n, self.grid.shape[0] - 1, d)
        weights = np.atleast_1d(np.asarray(weights, dtype=float))
        if weights.shape[0] != n or n == 0:
            raise InvalidMeasureError("{} trajectories but {} weights".format(n, weights.shape[0]))
        if not np.all(np.isfinite(displacements)) or np.any(weights <= 0.0):
            raise InvalidMeasureError("displacements must be finite and weights positive")
        total = float(np.sum(weights))
        if abs(total - 1.0) > setting('weight_tolerance'):
            raise InvalidMeasureError("bundle weights sum to {!r}, expected 1".format(total))
        self.starts = canonicalize(starts)
        self.displacements = displacements
        self.weights = weights / total
        for arr in (self.grid, self.starts, self.displacements, self.weights):
            arr.setflags(write=False)

    @classmethod
    def from_trajectories(cls, trajectories, weights):
        grid = trajectories[0].grid
        for path in trajectories[1:]:
            if path.grid.shape != grid.shape or np.max(np.abs(path.grid - grid)) > TIME_SLACK:
                raise PathError("trajectories of a bundle must share the grid")
        return cls(grid, np.vstack([p.start for p in trajectories]),
                   np.stack([p.displacements for p in trajectories]), weights)

    @classmethod
    def stationary(cls, measure, grid):
        """Every atom of the measure held still over the grid."""
        grid = check_grid(grid)
        return cls(grid, measure.atoms,
                   np.zeros((measure.size, grid.shape[0] - 1, measure.dim)), measure.weights)

    @property
    def size(self):
        return self.starts.shape[0]

    @property
    def dim(self):
        return self.starts.shape[1]

    def __len__(self):
        return self.size

    def trajectory(self, k):
        return Trajectory(self.grid, self.starts[k], self.displacements[k])

    @property
    def trajectories(self):
        return [self.trajectory(k) for k in range(self.size)]

    def cover_positions(self):
        """(N, M + 1, d) positions at the grid nodes in the cover."""
        cumulative = np.cumsum(self.displacements, axis=1)
        return np.concatenate([self.starts[:, None, :],
                               self.starts[:, None, :] + cumulative], axis=1)

    def cover_at(self, t):
        """(N, d) cover positions at time t, linear on segments."""
        k, s = locate(self.grid, t)
        nodes = self.starts + np.sum(self.displacements[:, :k, :], axis=1)
        return nodes + s * self.displacements[:, k, :]

    def positions_at(self, t):
        return canonicalize(self.cover_at(t))

    def evaluate(self, t):
        """e_t # chi."""
        return AtomicMeasure(self.positions_at(t), self.weights)

    def speeds(self):
        """(N, M) per-segment speeds."""
        return np.linalg.norm(self.displacements, axis=2) / np.diff(self.grid)[None, :]

    def max_speed(self):
        return float(np.max(self.speeds()))

    def merge_to_cap(self, cap):
        """
        Reduce the trajectory count to at most ``cap`` by folding the lightest
        paths into the heaviest path that ends at the same point. The final
        marginal is unchanged; earlier marginals move by at most the
        returned merge error (sum of folded weight times sup distance).
        :return: (PathBundle, merge error)
        """
        if self.size <= cap:
            return self, 0.0
        _, _, group = merge_support(self.positions_at(self.grid[-1]), self.weights)
        heaviest = {}
        for k in np.argsort(-self.weights, kind='stable'):
            heaviest.setdefault(int(group[k]), int(k))
        keepers = set(heaviest.values())
        candidates = [int(k) for k in np.argsort(self.weights, kind='stable')
                      if int(k) not in keepers]
        excess = self.size - cap
        if excess > len(candidates):
            logger.warning("cannot merge below %d trajectories (%d distinct endpoints)",
                           self.size - len(candidates), len(keepers))
            excess = len(candidates)
        folded = candidates[:excess]
        weights = self.weights.copy()
        cover = self.cover_positions()
        error = 0.0
        for k in folded:
            target = heaviest[int(group[k])]
            weights[target] += weights[k]
            sup = float(np.max(distance_array(cover[k], cover[target])))
            error += weights[k] * sup
        keep = np.setdiff1d(np.arange(self.size), folded)
        logger.info("merged %d trajectories, merge error %.3e", len(folded), error)
        return (PathBundle(self.grid, self.starts[keep], self.displacements[keep],
                           weights[keep]), error)

    def __repr__(self):
        return "PathBundle(d={}, trajectories={}, t=[{:g}, {:g}], nodes={})".format(
            self.dim, self.size, self.grid[0], self.grid[-1], self.grid.shape[0])


def evaluate(chi, t):
    """e_t # chi as an AtomicMeasure."""
    return chi.evaluate(t)


def concatenate(chi1, chi2):
    """
    chi1 (on [s, r]) spliced with chi2 (on [r, theta]): the mass of chi1
    arriving at a point y continues along the chi2 paths leaving y, in
    proportion to their conditional weights.
    """
    r = chi1.grid[-1]
    if abs(chi2.grid[0] - r) > TIME_SLACK:
        raise ConcatenationError("grids meet at {} and {}".format(r, chi2.grid[0]))
    if chi1.dim != chi2.dim:
        raise ConcatenationError("dimensions {} and {}".format(chi1.dim, chi2.dim))
    if not chi1.evaluate(r).is_close(chi2.evaluate(r), tol=setting('plan_tolerance')):
        raise ConcatenationError()

    ends = chi1.positions_at(r)
    both = np.vstack([ends, chi2.starts])
    _, _, group = merge_support(both, np.ones(both.shape[0]))
    end_group, start_group = group[:chi1.size], group[chi1.size:]
    group_mass = np.bincount(start_group, weights=chi2.weights,
                             minlength=int(group.max()) + 1)

    starts, displacements, weights = [], [], []
    for i in range(chi1.size):
        followers = np.flatnonzero(start_group == end_group[i])
        for j in followers:
            starts.append(chi1.starts[i])
            displacements.append(np.concatenate(
                [chi1.displacements[i], chi2.displacements[j]], axis=0))
            weights.append(chi1.weights[i] * chi2.weights[j] / group_mass[end_group[i]])
    grid = np.concatenate([chi1.grid, chi2.grid[1:]])
    return PathBundle(grid, np.vstack(starts), np.stack(displacements), weights)


def bundle_distance(chi1, chi2):
    """
    W1 between path bundles for the uniform metric, taken as the max torus
    distance over the union of both grids (exact for paths that are linear
    between those nodes).
    """
    if (abs(chi1.grid[0] - chi2.grid[0]) > TIME_SLACK or
            abs(chi1.grid[-1] - chi2.grid[-1]) > TIME_SLACK):
        raise PathError("bundle distance needs the same time span")
    cap = setting('bundle_max_trajectories')
    times = np.union1d(chi1.grid, chi2.grid)
    p1 = np.stack([chi1.positions_at(t) for t in times], axis=1)
    p2 = np.stack([chi2.positions_at(t) for t in times], axis=1)
    cost = np.max(distance_array(p1[:, None, :, :], p2[None, :, :, :]), axis=2)
    value, _ = exact_emd(chi1.weights, chi2.weights, cost, cap=cap)
    return value


def difference_quotient(chi, tau):
    """
    Delta^tau # chi: each path x(.) goes to (x(t_0), (x(t_0 + tau) - x(t_0)) / tau)
    with the displacement read in the cover.
    :return: LiftedMeasure over evaluate(chi, t_0)
    """
    if tau <= 0:
        raise PathError("difference quotient needs tau > 0, got {}".format(tau))
    t0 = chi.grid[0]
    velocities = (chi.cover_at(t0 + tau) - chi.starts) / tau
    return LiftedMeasure.from_support(chi.starts, velocities, chi.weights)
