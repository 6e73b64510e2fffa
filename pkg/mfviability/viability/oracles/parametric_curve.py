"""
Sets K given as a curve t -> c(t) of measures, t in [t_min, t_max], with a
declared W1 speed (Lipschitz constant of the curve in W1).

The distance is the minimum of W1(m, c(t)) over a grid of step
resolution / speed, found exactly by coarse-to-fine search with the
Lipschitz lower bound, refined by a bounded scalar minimization around the
grid minimizer and polished by golden-section search down to adjacent
floats, so an exact member of K off the grid is found to round-off.
"""
import logging
import math

import numpy as np
from scipy.optimize import minimize_scalar

from ...errors import DimensionMismatchError, OracleError
from .base import SetOracle

logger = logging.getLogger(__name__)

REFINE_XATOL = 1e-14
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
POLISH_ITERATIONS = 200


class ParametricCurveOracle(SetOracle):

    kind = 'parametric-curve'
    # absolute accuracy assumed for a refined curve distance
    accuracy = 1e-10

    def __init__(self, curve, t_min, t_max, speed, resolution, dim, name='curve'):
        """
        :param curve: callable t -> AtomicMeasure
        :param speed: W1(c(s), c(t)) <= speed |s - t|
        :param resolution: positive grid accuracy in W1
        """
        if t_max < t_min:
            raise OracleError("curve parameter range is empty")
        if speed < 0:
            raise OracleError("curve speed must be nonnegative")
        if resolution <= 0 and speed > 0 and t_max > t_min:
            raise OracleError("a curve oracle needs a positive resolution")
        super().__init__(dim, resolution)
        self.curve = curve
        self.t_min = float(t_min)
        self.t_max = float(t_max)
        self.speed = float(speed)
        self.name = name

    def grid(self):
        span = self.t_max - self.t_min
        if span == 0 or self.speed == 0:
            return np.array([self.t_min])
        count = int(math.ceil(span * self.speed / self.resolution)) + 1
        return np.linspace(self.t_min, self.t_max, count)

    def member(self, t):
        measure = self.curve(float(t))
        if measure.dim != self.dim:
            raise OracleError("curve {} produced a measure of dimension {}".format(
                self.name, measure.dim))
        return measure

    def _grid_minimum(self, objective, ts):
        n = ts.shape[0]
        stride = max(1, int(math.sqrt(n)))
        coarse = np.unique(np.append(np.arange(0, n, stride), n - 1))
        values = {int(i): objective(ts[i]) for i in coarse}
        best = min(values, key=lambda i: (values[i], i))
        for a, b in zip(coarse[:-1], coarse[1:]):
            if b - a <= 1:
                continue
            # no grid value inside (a, b) can fall below this
            bound = 0.5 * (values[a] + values[b] - self.speed * (ts[b] - ts[a]))
            if bound >= values[best]:
                continue
            for i in range(a + 1, b):
                values[i] = objective(ts[i])
                if values[i] < values[best]:
                    best = i
        return best, values[best]

    def minimize(self, objective):
        """
        Minimize a speed-Lipschitz objective of the curve parameter.
        :return: (t, value)
        """
        ts = self.grid()
        best, value = self._grid_minimum(objective, ts)
        t_best = float(ts[best])
        if ts.shape[0] > 1 and value > 0.0:
            step = ts[1] - ts[0]
            lo, hi = max(self.t_min, t_best - step), min(self.t_max, t_best + step)
            refined = minimize_scalar(objective, bounds=(lo, hi), method='bounded',
                                      options={'xatol': REFINE_XATOL})
            if refined.fun < value:
                t_best, value = float(refined.x), float(refined.fun)
            if value > 0.0:
                t_best, value = self._polish(objective, t_best, value, step)
        return t_best, value

    def _polish(self, objective, t_best, value, step):
        """Golden-section search in a small bracket around t_best; never worsens the value."""
        width = min(step, 1e-6 * max(1.0, abs(t_best)))
        a, b = max(self.t_min, t_best - width), min(self.t_max, t_best + width)
        c, d = b - GOLDEN * (b - a), a + GOLDEN * (b - a)
        fc, fd = objective(c), objective(d)
        for _ in range(POLISH_ITERATIONS):
            for t, f in ((c, fc), (d, fd)):
                if f < value:
                    t_best, value = float(t), float(f)
            if value == 0.0 or b - a <= 4 * np.spacing(max(abs(a), abs(b))):
                break
            if fc <= fd:
                b, d, fd = d, c, fc
                c = b - GOLDEN * (b - a)
                fc = objective(c)
            else:
                a, c, fc = c, d, fd
                d = a + GOLDEN * (b - a)
                fd = objective(d)
        return t_best, value

    def distance(self, measure):
        if measure.dim != self.dim:
            raise DimensionMismatchError(
                "measure of dimension {} against K in dimension {}".format(
                    measure.dim, self.dim))

        def objective(t):
            return self.measure_distance(measure, self.member(t))

        t_best, value = self.minimize(objective)
        logger.debug("%s: distance %.3e at t=%.12g", self.name, value, t_best)
        return float(value), self.member(t_best)

    def samples(self):
        return [self.member(t) for t in self.grid()]

    def to_dict(self):
        return {'kind': self.kind, 'name': self.name, 'resolution': self.resolution,
                't_min': self.t_min, 't_max': self.t_max, 'speed': self.speed}
