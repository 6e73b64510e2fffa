"""
Experiment configs: JSON documents tagged with ``"schema": "mfviability/1"``
and validated into an ExperimentConfig.

    {
      "schema": "mfviability/1",
      "seed": 0,
      "system": {"name": "constant-controls", "dim": 1,
                 "params": {"controls": [[-1.0], [1.0]]}},
      "K": {"kind": "dirac-pair-family", "center": [0.5], "epsilon": 0.25,
            "resolution": 0.02},
      "m0": {"d": 1, "atoms": [[0.5]], "weights": [1.0]},
      "beta": {... lifted measure literal ...},
      "tangency": {"tau0": 0.1, "levels": 6},
      "check": {"tau0": 0.04, "levels": 4},
      "solve": {"mode": "viable-tracking", "horizon": 0.2, "steps": 40}
    }

Only the blocks a command needs have to be present.
"""
import copy
import logging

from ..config import setting
from ..dynamics import build_selector, build_system
from ..errors import ConfigError, MFViabilityError
from ..lifted import LiftedMeasure
from ..measures import AtomicMeasure
from ..solver import FORWARD, MODES, SolveConfig
from ..viability import (DiracPairFamilyOracle, FiniteSetOracle, ParametricCurveOracle,
                         TranslationCurveOracle)

logger = logging.getLogger(__name__)

SCHEMA = 'mfviability/1'
ORACLE_KINDS = (FiniteSetOracle.kind, DiracPairFamilyOracle.kind, ParametricCurveOracle.kind)


def _block(data, key, required=True):
    value = data.get(key)
    if value is None:
        if required:
            raise ConfigError("config is missing the '{}' block".format(key))
        return None
    if not isinstance(value, dict):
        raise ConfigError("'{}' must be a JSON object".format(key))
    return value


def parse_measure(literal, what='measure'):
    try:
        return AtomicMeasure.from_dict(literal)
    except (MFViabilityError, ValueError, TypeError) as e:
        raise ConfigError("malformed {} literal: {}".format(what, e))


def parse_lifted(literal, what='lifted measure'):
    try:
        return LiftedMeasure.from_dict(literal)
    except (MFViabilityError, ValueError, TypeError) as e:
        raise ConfigError("malformed {} literal: {}".format(what, e))


def parse_curve(spec):
    """Curves available from configs; other curves are built in code."""
    curve = spec.get('curve')
    if curve != TranslationCurveOracle.curve_name:
        raise ConfigError("unknown curve {!r}, expected '{}'".format(
            curve, TranslationCurveOracle.curve_name))
    return TranslationCurveOracle(parse_measure(spec['measure'], 'curve measure'),
                                  spec['velocity'], float(spec.get('t_min', 0.0)),
                                  float(spec['t_max']), float(spec['resolution']))


def parse_oracle(spec):
    kind = spec.get('kind')
    try:
        if kind == FiniteSetOracle.kind:
            measures = [parse_measure(m, 'K member') for m in spec['measures']]
            return FiniteSetOracle(measures, resolution=float(spec.get('resolution', 0.0)))
        if kind == DiracPairFamilyOracle.kind:
            return DiracPairFamilyOracle(spec['center'], float(spec['epsilon']),
                                         float(spec['resolution']),
                                         direction=spec.get('direction'))
        if kind == ParametricCurveOracle.kind:
            return parse_curve(spec)
    except KeyError as e:
        raise ConfigError("K of kind '{}' needs the field {}".format(kind, e))
    except ConfigError:
        raise
    except (MFViabilityError, ValueError, TypeError) as e:
        raise ConfigError("bad K specification: {}".format(e))
    raise ConfigError("unknown K kind {!r}, expected one of {}".format(kind, ORACLE_KINDS))


class ExperimentConfig:
    """
    A validated experiment document. Blocks are parsed on construction; the
    raw document (with the effective seed) is kept for the run manifest.
    """

    def __init__(self, data, seed=None):
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        if data.get('schema') != SCHEMA:
            raise ConfigError("config schema must be '{}', got {!r}".format(
                SCHEMA, data.get('schema')))
        self.document = copy.deepcopy(data)
        if seed is not None:
            self.document['seed'] = int(seed)
        self.document.setdefault('seed', setting('seed'))
        try:
            self.seed = int(self.document['seed'])
        except (TypeError, ValueError):
            raise ConfigError("seed must be an integer")

        self.system = None
        system = _block(data, 'system', required=False)
        if system is not None:
            if 'name' not in system or 'dim' not in system:
                raise ConfigError("'system' needs 'name' and 'dim'")
            self.system = build_system(system['name'], int(system['dim']),
                                       system.get('params', {}))

        oracle = _block(data, 'K', required=False)
        self.oracle = parse_oracle(oracle) if oracle is not None else None

        self.m0 = parse_measure(data['m0'], 'm0') if 'm0' in data else None
        self.beta = parse_lifted(data['beta'], 'beta') if 'beta' in data else None

        self.tangency = _block(data, 'tangency', required=False)
        self.check = _block(data, 'check', required=False)
        self.solve = _block(data, 'solve', required=False)

    def require(self, *names):
        for name in names:
            if getattr(self, name) is None:
                raise ConfigError("this command needs '{}' in the config".format(
                    'K' if name == 'oracle' else name))

    def solve_config(self):
        """The SolveConfig described by the 'solve' block."""
        self.require('solve', 'system')
        block = self.solve
        mode = block.get('mode')
        if mode not in MODES:
            raise ConfigError("solve mode must be one of {}, got {!r}".format(MODES, mode))
        try:
            horizon, steps = float(block['horizon']), int(block['steps'])
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError("solve block needs numeric 'horizon' and 'steps': {}".format(e))
        selector = None
        if mode == FORWARD:
            spec = block.get('selector')
            if not isinstance(spec, dict) or 'name' not in spec:
                raise ConfigError("forward-selector mode needs a 'selector' with a 'name'")
            selector = build_selector(spec['name'], self.system, spec.get('params', {}))
        cfg = SolveConfig(horizon, steps, mode, selector=selector, oracle=self.oracle,
                          levels=int(block.get('levels', 4)), seed=self.seed,
                          max_trajectories=block.get('max_trajectories'),
                          precheck_samples=int(block.get('precheck_samples', 2)))
        return cfg.validate(self.system)
