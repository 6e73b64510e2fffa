"""
Shift, rescaling and plan composition on lifted measures.
"""
import numpy as np

from ..config import setting
from ..errors import MarginalMismatchError
from ..measures import AtomicMeasure
from .lifted_measure import LiftedMeasure


def shift(beta, tau):
    """
    Theta^tau # beta: the pushforward of beta under (x, v) -> x + tau v.
    :return: AtomicMeasure
    """
    if tau < 0:
        raise ValueError("shift expects tau >= 0, got {}".format(tau))
    positions, velocities, masses = beta.support()
    return AtomicMeasure(positions + tau * velocities, masses)


def rescale(beta, a):
    """S^a # beta: every fiber velocity v becomes a v, the base is kept."""
    return LiftedMeasure(beta.base, [(a * v, w) for v, w in beta.fibers])


def compose(plan, beta):
    """
    pi * beta for a plan pi from m' to m and beta in L(m). The fiber at x'
    mixes the fibers of beta at x with weights pi(x' -> x) / m'(x').
    :return: LiftedMeasure over plan.source
    """
    if not plan.target.is_close(beta.base, tol=setting('plan_tolerance')):
        raise MarginalMismatchError(
            "composition requires the plan's target to be the lifted base")
    fibers = []
    for i in range(plan.source.size):
        conditional = plan.conditional(i)
        velocities, weights = [], []
        for j in np.flatnonzero(conditional > 0.0):
            v, w = beta.fiber(j)
            velocities.append(v)
            weights.append(conditional[j] * w)
        mixed = np.concatenate(weights)
        fibers.append((np.vstack(velocities), mixed / mixed.sum()))
    return LiftedMeasure(plan.source, fibers)
