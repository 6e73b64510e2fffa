import logging

from ..config import setting
from ..errors import ConfigError

logger = logging.getLogger(__name__)

FORWARD = 'forward-selector'
VIABLE = 'viable-tracking'
MODES = (FORWARD, VIABLE)


class SolveConfig:
    """
    Settings of one Euler solve.
    :attributes
        horizon: final time T
        steps: number n of uniform steps, dt = T / n
        mode: forward-selector or viable-tracking
        selector: (x coords, AtomicMeasure) -> velocity, forward mode
        oracle: SetOracle for K, viable mode
        levels: tau ladder length of the per-step witness search; the
            ladder ends at dt
        precheck_samples: K members at which the condition is checked
            before a viable solve
    """

    def __init__(self, horizon, steps, mode, selector=None, oracle=None, levels=4,
                 seed=None, max_trajectories=None, precheck_samples=2):
        self.horizon = float(horizon)
        self.steps = int(steps)
        self.mode = mode
        self.selector = selector
        self.oracle = oracle
        self.levels = int(levels)
        self.seed = setting('seed') if seed is None else int(seed)
        self.max_trajectories = (setting('max_trajectories') if max_trajectories is None
                                 else int(max_trajectories))
        self.precheck_samples = int(precheck_samples)

    @property
    def dt(self):
        return self.horizon / self.steps

    @property
    def times(self):
        return [self.horizon * j / self.steps for j in range(self.steps + 1)]

    def validate(self, sys):
        """
        :raise ConfigError: on inconsistent settings, including a step that
            does not resolve a positive oracle resolution (dt <= resolution / 2R)
        """
        if self.horizon <= 0 or self.steps < 1:
            raise ConfigError("solve needs T > 0 and n >= 1")
        if self.mode not in MODES:
            raise ConfigError("unknown solve mode {!r}, expected one of {}".format(
                self.mode, MODES))
        if self.levels < 1:
            raise ConfigError("levels must be positive")
        if self.mode == FORWARD and self.selector is None:
            raise ConfigError("forward-selector mode needs a selector")
        if self.mode == VIABLE:
            if self.oracle is None:
                raise ConfigError("viable-tracking mode needs a constraint set K")
            resolution = self.oracle.resolution
            if resolution > 0 and sys.bound_R > 0:
                limit = 0.5 * resolution / sys.bound_R
                if self.dt > limit * (1 + 1e-12):
                    raise ConfigError(
                        "step T/n = {:g} exceeds resolution / 2R = {:g}".format(self.dt, limit))
        return self

    def to_dict(self):
        data = {'horizon': self.horizon, 'steps': self.steps, 'mode': self.mode,
                'levels': self.levels, 'seed': self.seed,
                'max_trajectories': self.max_trajectories,
                'precheck_samples': self.precheck_samples}
        if self.oracle is not None:
            data['oracle'] = self.oracle.to_dict()
        return data
