"""
Euler-type schemes producing path bundles.

Both schemes advance the current measure mu_j by a lifted measure beta_j
over it: every (x, v) in the support of beta_j becomes a segment
x -> x + dt v, and the segments are spliced onto the bundle built so far.
They differ in how beta_j is chosen: a selector in F(x, mu_j) for the
forward scheme, a tangent witness transported from the projection of mu_j
onto K for the viable scheme. Each finished step is published on
``subject``.
"""
import logging
from abc import ABC, abstractmethod
from collections import defaultdict

import numpy as np
from rx.subject import Subject

from ..config import setting
from ..dynamics import dist_to_step_aumann, dist_to_vectogram, feasibility_residual, vectogram
from ..errors import SelectorError, ViabilityViolation
from ..geometry import pairwise_distances
from ..lifted import LiftedMeasure, compose
from ..measures import wasserstein1
from ..paths import PathBundle, concatenate
from ..viability import viability_condition_check
from .config import FORWARD, VIABLE, SolveConfig
from .result import SolveResult

logger = logging.getLogger(__name__)


class EulerScheme(ABC):
    """
    Base class of the solvers.
    :attributes
        sys: the ControlSystem
        cfg: the SolveConfig
        subject: emits one dict per finished step
    """

    def __init__(self, sys, cfg):
        self.sys = sys
        self.cfg = cfg
        self.subject = Subject()
        self.diagnostics = defaultdict(list)

    @abstractmethod
    def step(self, j, t, mu):
        """
        Choose the lift that moves mu over [t, t + dt].
        :return: (LiftedMeasure over mu, dict of step diagnostics)
        """
        pass

    def prepare(self, m0):
        pass

    def finish(self, mu):
        pass

    def on_step(self, record):
        for key, value in record.items():
            if key not in ('step', 't'):
                self.diagnostics[key].append(value)
        self.subject.on_next(record)

    def run(self, m0):
        cfg = self.cfg.validate(self.sys)
        times = cfg.times
        self.prepare(m0)
        mu = m0
        bundle = None
        merge_error = 0.0
        for j in range(cfg.steps):
            beta, record = self.step(j, times[j], mu)
            positions, velocities, masses = beta.support()
            piece = PathBundle([times[j], times[j + 1]], positions,
                               cfg.dt * velocities[:, None, :], masses)
            bundle = piece if bundle is None else concatenate(bundle, piece)
            bundle, error = bundle.merge_to_cap(cfg.max_trajectories)
            merge_error += error
            mu = bundle.evaluate(times[j + 1])
            record.update(step=j, t=times[j], trajectories=bundle.size)
            logger.debug("step %d: %s", j, record)
            self.on_step(record)
        self.finish(mu)
        diagnostics = dict(self.diagnostics)
        diagnostics['merge_error'] = merge_error
        if merge_error > 0:
            logger.warning("trajectory cap merged paths, accumulated error %.3e", merge_error)
        result = SolveResult(bundle, cfg.mode, diagnostics)
        logger.info("solve finished: %r", result)
        return result


class ForwardSelectorScheme(EulerScheme):
    """Particles move by dt w(x, mu_j) with w a selector of F."""

    def step(self, j, t, mu):
        dt = self.cfg.dt
        tol = setting('selector_tolerance')
        fibers = []
        residual = 0.0
        for i, x in enumerate(mu.atoms):
            verts = vectogram(self.sys, x, mu)
            w = np.atleast_1d(np.asarray(self.cfg.selector(x, mu), dtype=float))
            gap = dist_to_vectogram(w, verts)
            if gap > tol:
                raise SelectorError(j, i, gap)
            residual += mu.weights[i] * dist_to_step_aumann(dt * w, [(dt, verts)])
            fibers.append((w[None, :], [1.0]))
        record = {'residual': residual}
        if self.cfg.oracle is not None:
            record['dist_to_K'] = self.cfg.oracle.distance(mu)[0]
        return LiftedMeasure(mu, fibers), record

    def finish(self, mu):
        if self.cfg.oracle is not None:
            self.diagnostics['dist_to_K'].append(self.cfg.oracle.distance(mu)[0])


class ViableTrackingScheme(EulerScheme):
    """
    At each step: nu = projection of mu onto K, beta = tangent witness in
    F(nu), mu+ = Theta^dt # (pi * beta) with pi an optimal plan mu -> nu.
    """

    @property
    def oracle(self):
        return self.cfg.oracle

    @property
    def tau0(self):
        # the ladder ends at dt
        return self.cfg.dt * 2.0 ** (self.cfg.levels - 1)

    def check(self, nu, hints=None):
        return viability_condition_check(nu, self.oracle, self.sys, self.tau0,
                                         levels=self.cfg.levels, seed=self.cfg.seed,
                                         hints=hints)

    def hints(self, mu, plan):
        """
        Per atom of the plan target, the mean velocity of the previous step
        arriving at its sources, or None on the first step.
        """
        if self.arrivals is None:
            return None
        ends, velocities, masses = self.arrivals
        nearest = np.argmin(pairwise_distances(ends, mu.atoms), axis=1)
        total = np.bincount(nearest, weights=masses, minlength=mu.size)
        mean = np.zeros((mu.size, velocities.shape[1]))
        np.add.at(mean, nearest, masses[:, None] * velocities)
        mean /= np.where(total > 0.0, total, 1.0)[:, None]
        column = plan.mass.sum(axis=0)
        return list((plan.mass.T @ mean) / column[:, None])

    def prepare(self, m0):
        self.arrivals = None
        gap = self.oracle.distance(m0)[0]
        if gap > self.oracle.resolution + 1e-9:
            logger.warning("initial measure is %.3e away from K", gap)
        samples = self.oracle.samples()
        if self.cfg.precheck_samples > 0 and samples:
            picks = np.unique(np.linspace(0, len(samples) - 1,
                                          self.cfg.precheck_samples).round().astype(int))
            for k in picks:
                if not self.check(samples[k]).found:
                    logger.warning("viability condition fails at K sample %d", k)

    def step(self, j, t, mu):
        dist, nu = self.oracle.distance(mu)
        coupling, plan = wasserstein1(mu, nu)
        found, witness, score = self.check(nu, self.hints(mu, plan))
        if not found:
            raise ViabilityViolation(j, nu, score)
        beta = compose(plan, witness)
        positions, velocities, masses = beta.support()
        self.arrivals = (positions + self.cfg.dt * velocities, velocities, masses)
        return beta, {
            'dist_to_K': dist,
            'witness_score': score,
            'coupling': coupling,
            'residual': feasibility_residual(beta, self.sys),
        }

    def finish(self, mu):
        self.diagnostics['dist_to_K'].append(self.oracle.distance(mu)[0])
        times = self.cfg.times
        rates = [c / times[j] for j, c in enumerate(self.diagnostics['coupling']) if j > 0]
        self.diagnostics['coupling_rate'] = max(rates) if rates else 0.0


SCHEMES = {
    FORWARD: ForwardSelectorScheme,
    VIABLE: ViableTrackingScheme,
}


def make_scheme(sys, cfg):
    return SCHEMES[cfg.mode](sys, cfg)


def solve_forward(m0, sys, cfg):
    """
    Explicit Euler with a selector.
    :raise SelectorError: when the selector leaves the vectogram
    """
    if cfg.mode != FORWARD:
        cfg = SolveConfig(cfg.horizon, cfg.steps, FORWARD, selector=cfg.selector,
                          oracle=cfg.oracle, levels=cfg.levels, seed=cfg.seed,
                          max_trajectories=cfg.max_trajectories)
    return ForwardSelectorScheme(sys, cfg).run(m0)


def solve_viable(m0, sys, oracle, cfg):
    """
    The viability-tracking construction.
    :raise ViabilityViolation: when no tangent witness exists at a step
    """
    cfg = SolveConfig(cfg.horizon, cfg.steps, VIABLE, oracle=oracle, levels=cfg.levels,
                      seed=cfg.seed, max_trajectories=cfg.max_trajectories,
                      precheck_samples=cfg.precheck_samples)
    return ViableTrackingScheme(sys, cfg).run(m0)
