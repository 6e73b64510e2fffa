"""
Built-in control systems and selectors, looked up by name from experiment
configs.
"""
import logging

import numpy as np

from ..errors import ConfigError
from .control_system import ControlSystem

logger = logging.getLogger(__name__)


def _control_list(controls, dim):
    rows = [np.atleast_1d(np.asarray(u, dtype=float)) for u in controls]
    for u in rows:
        if u.shape != (dim,):
            raise ConfigError("control {} does not have dimension {}".format(u.tolist(), dim))
    return rows


def constant_controls(dim, controls, lipschitz_L=None, bound_R=None):
    """f(x, m, u) = u."""
    controls = _control_list(controls, dim)
    if bound_R is None:
        bound_R = max(float(np.linalg.norm(u)) for u in controls)
    if lipschitz_L is None:
        lipschitz_L = 0.0
    return ControlSystem(lambda x, m, u: u, controls, lipschitz_L, bound_R, dim,
                         name='constant-controls')


def mean_drift(dim, controls, kappa=1.0, lipschitz_L=None, bound_R=None):
    """
    f(x, m, u) = u + kappa * int sin(2 pi (y - x)) m(dy), coordinatewise.
    Defaults: L = 2 pi kappa sqrt(d), R = max |u| + kappa sqrt(d).
    """
    controls = _control_list(controls, dim)
    kappa = float(kappa)
    if bound_R is None:
        bound_R = max(float(np.linalg.norm(u)) for u in controls) + abs(kappa) * np.sqrt(dim)
    if lipschitz_L is None:
        lipschitz_L = 2.0 * np.pi * abs(kappa) * np.sqrt(dim)

    def f(x, m, u):
        drift = m.weights @ np.sin(2.0 * np.pi * (m.atoms - x))
        return u + kappa * drift

    return ControlSystem(f, controls, lipschitz_L, bound_R, dim, name='mean-drift')


BUILTIN_SYSTEMS = {
    'constant-controls': constant_controls,
    'mean-drift': mean_drift,
}


def build_system(name, dim, params):
    """
    :param name: a key of BUILTIN_SYSTEMS
    :param params: keyword parameters of the builder (controls, kappa, ...)
    """
    try:
        builder = BUILTIN_SYSTEMS[name]
    except KeyError:
        raise ConfigError("unknown system '{}', expected one of {}".format(
            name, sorted(BUILTIN_SYSTEMS)))
    try:
        return builder(dim, **params)
    except TypeError as e:
        raise ConfigError("bad parameters for system '{}': {}".format(name, e))


def vertex_selector(sys, index=0):
    """w(x, m) = f(x, m, u_index)."""
    if not 0 <= index < len(sys.controls):
        raise ConfigError("vertex selector index {} out of range".format(index))
    u = sys.controls[index]
    return lambda x, m: sys.velocity(x, m, u)


def constant_selector(sys, velocity):
    """w(x, m) = velocity."""
    velocity = np.atleast_1d(np.asarray(velocity, dtype=float))
    if velocity.shape != (sys.dim,):
        raise ConfigError("constant selector needs a vector of dimension {}".format(sys.dim))
    return lambda x, m: velocity


BUILTIN_SELECTORS = {
    'vertex': vertex_selector,
    'constant': constant_selector,
}


def build_selector(name, sys, params):
    try:
        builder = BUILTIN_SELECTORS[name]
    except KeyError:
        raise ConfigError("unknown selector '{}', expected one of {}".format(
            name, sorted(BUILTIN_SELECTORS)))
    try:
        return builder(sys, **params)
    except TypeError as e:
        raise ConfigError("bad parameters for selector '{}': {}".format(name, e))
