"""
Tangency of a lifted measure to K: the ratios dist(Theta^tau # beta, K) / tau
on a geometric ladder tau_k = tau0 2^-k, and a verdict read off the tail of
the ladder.
"""
import json
import logging

from ..config import setting
from ..errors import DimensionMismatchError
from ..lifted import shift

logger = logging.getLogger(__name__)

TANGENT = 'tangent'
NOT_TANGENT = 'not-tangent'
INCONCLUSIVE = 'inconclusive'
VERDICTS = (TANGENT, NOT_TANGENT, INCONCLUSIVE)

# ratios judged for monotonicity
TAIL = 3


class TangencyReport:

    def __init__(self, taus, ratios, verdict, threshold, diagnostic=None):
        if verdict not in VERDICTS:
            raise ValueError("unknown verdict {!r}".format(verdict))
        self.taus = [float(t) for t in taus]
        self.ratios = [float(r) for r in ratios]
        self.verdict = verdict
        self.threshold = float(threshold)
        self.diagnostic = diagnostic

    @property
    def is_tangent(self):
        return self.verdict == TANGENT

    def to_dict(self):
        data = {'taus': self.taus, 'ratios': self.ratios,
                'verdict': self.verdict, 'threshold': self.threshold}
        if self.diagnostic:
            data['diagnostic'] = self.diagnostic
        return data

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, data):
        return cls(data['taus'], data['ratios'], data['verdict'], data['threshold'],
                   data.get('diagnostic'))

    def __repr__(self):
        return "TangencyReport({}, final ratio {:.3e})".format(
            self.verdict, self.ratios[-1])


def tau_ladder(tau0, levels):
    if tau0 <= 0:
        raise ValueError("tau0 must be positive, got {}".format(tau0))
    if levels < TAIL:
        raise ValueError("the tau ladder needs at least {} levels".format(TAIL))
    return [tau0 * 2.0 ** -k for k in range(levels)]


def shift_ratio(beta, oracle, tau):
    """dist(Theta^tau # beta, K) / tau."""
    return oracle.distance(shift(beta, tau))[0] / tau


def judge(ratios, threshold, slack=None, taus=None, accuracy=0.0):
    """
    Tangent iff the last ratio is below the threshold and the last TAIL
    ratios do not increase. Two neighbouring ratios may differ by slack plus
    the oracle accuracy divided by each of their taus, since a distance
    error e turns into a ratio error e / tau.
    """
    if slack is None:
        slack = setting('tangency_monotone_slack')
    if taus is None:
        taus = [1.0] * len(ratios)
    tail = list(zip(ratios[-TAIL:], taus[-TAIL:]))
    monotone = all(b <= a + slack + accuracy / ta + accuracy / tb
                   for (a, ta), (b, tb) in zip(tail[:-1], tail[1:]))
    return TANGENT if (ratios[-1] < threshold and monotone) else NOT_TANGENT


def tangency_estimate(beta, oracle, tau0, levels=6, threshold=None):
    """
    :param beta: LiftedMeasure
    :param oracle: SetOracle describing K
    :return: TangencyReport
    """
    if threshold is None:
        threshold = setting('tangency_threshold')
    if beta.dim != oracle.dim:
        raise DimensionMismatchError(
            "lifted measure in dimension {} against K in dimension {}".format(
                beta.dim, oracle.dim))
    taus = tau_ladder(tau0, levels)
    ratios = [shift_ratio(beta, oracle, tau) for tau in taus]
    for tau, ratio in zip(taus, ratios):
        logger.debug("tau=%.6g ratio=%.6g", tau, ratio)

    if oracle.resolution > taus[-1]:
        diagnostic = ("oracle resolution {:g} is coarser than the smallest tau {:g}"
                      .format(oracle.resolution, taus[-1]))
        logger.warning("tangency inconclusive: %s", diagnostic)
        return TangencyReport(taus, ratios, INCONCLUSIVE, threshold, diagnostic)
    verdict = judge(ratios, threshold, taus=taus, accuracy=oracle.accuracy)
    logger.info("tangency verdict %s (final ratio %.3e)", verdict, ratios[-1])
    return TangencyReport(taus, ratios, verdict, threshold)
