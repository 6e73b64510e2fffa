"""
Checks a finished solve can be held to: kinematic bounds, consistency of
the flow with the bundle, the necessity bounds of the difference quotient,
and the error bounds of the viable construction.
"""
import logging
from collections import namedtuple

import numpy as np

from ..dynamics import feasibility_residual
from ..lifted import shift
from ..measures import wasserstein1_value
from ..paths import difference_quotient
from .config import VIABLE
from .residual import solution_residual

logger = logging.getLogger(__name__)

Certificate = namedtuple('Certificate', ['name', 'value', 'bound', 'passed'])

SPEED_SLACK = 1e-12
FLOW_SLACK = 1e-9
CONSISTENCY_SLACK = 1e-10
NECESSITY_SLACK = 1e-6
SHIFT_SLACK = 1e-12


def _certificate(name, value, bound):
    passed = bool(value <= bound)
    if not passed:
        logger.warning("certificate %s failed: %.6g > %.6g", name, value, bound)
    return Certificate(name, float(value), float(bound), passed)


def speed_cap(result, sys):
    """Every segment speed is at most R."""
    return _certificate('speed_cap', result.bundle.max_speed(), sys.bound_R + SPEED_SLACK)


def flow_lipschitz(result, sys):
    """max over grid pairs of W1(m(t'), m(t'')) - R |t' - t''|."""
    grid = result.times
    excess = 0.0
    for a in range(len(grid)):
        for b in range(a + 1, len(grid)):
            gap = result.flow_gap(a, b) - sys.bound_R * (grid[b] - grid[a])
            excess = max(excess, gap)
    return _certificate('flow_lipschitz', excess, FLOW_SLACK)


def flow_consistency(result):
    """The stored flow is the evaluation of the bundle."""
    worst = max(wasserstein1_value(m, result.bundle.evaluate(t))
                for t, m in zip(result.times, result.flow))
    return _certificate('flow_consistency', worst, CONSISTENCY_SLACK)


def necessity(result, sys, tau):
    """
    beta_tau = Delta^tau # chi lies within L R tau of F(m(0)), and
    Theta^tau # beta_tau = m(tau).
    :return: two certificates
    """
    beta = difference_quotient(result.bundle, tau)
    residual = feasibility_residual(beta, sys)
    t = result.times[0] + tau
    identity = wasserstein1_value(shift(beta, tau), result.flow_at(t))
    return [
        _certificate('necessity_residual(tau={:g})'.format(tau), residual,
                     sys.lipschitz_L * sys.bound_R * tau + NECESSITY_SLACK),
        _certificate('shift_identity(tau={:g})'.format(tau), identity, SHIFT_SLACK),
    ]


def _merge_error(result):
    return float(result.diagnostics.get('merge_error', 0.0))


def dist_bound(result, sys, oracle):
    """
    max_t dist(m(t), K) <= (T + R) / n + resolution + merge error, the last
    term being the W1 cost accumulated by the trajectory cap.
    """
    worst = max(oracle.distance(m)[0] for m in result.flow)
    bound = ((result.horizon + sys.bound_R) / result.steps + oracle.resolution
             + _merge_error(result))
    return _certificate('dist_bound', worst, bound)


def residual_bound(result, sys):
    """
    solution_residual(0, T) <= T (1 + 2LT + 2LR) / n + 2 (1 + LT) merge error
    + 1e-6.
    """
    T, n = result.horizon, result.steps
    L, R = sys.lipschitz_L, sys.bound_R
    value = solution_residual(result, sys, result.times[0], result.times[-1])
    bound = T * (1 + 2 * L * T + 2 * L * R) / n + 2 * (1 + L * T) * _merge_error(result)
    return _certificate('residual_bound', value, bound + 1e-6)


def coupling_rate(result):
    """The achieved per-step coupling rate is finite."""
    rate = float(result.diagnostics.get('coupling_rate', 0.0))
    return Certificate('coupling_rate', rate, np.inf, bool(np.isfinite(rate)))


def run_certificates(result, sys, oracle=None):
    """
    All applicable checks. Necessity is checked at tau in {dt, 2dt, 4dt}
    (those within the horizon); the K bounds need an oracle.
    :return: list of Certificate
    """
    certificates = [speed_cap(result, sys), flow_lipschitz(result, sys),
                    flow_consistency(result)]
    dt = result.horizon / result.steps
    for factor in (1, 2, 4):
        if factor <= result.steps:
            certificates.extend(necessity(result, sys, factor * dt))
    if result.mode == VIABLE:
        if oracle is not None:
            certificates.append(dist_bound(result, sys, oracle))
        certificates.append(residual_bound(result, sys))
        if 'coupling_rate' in result.diagnostics:
            certificates.append(coupling_rate(result))
    passed = sum(c.passed for c in certificates)
    logger.info("%d of %d certificates passed", passed, len(certificates))
    return certificates
