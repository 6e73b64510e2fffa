"""
Library settings. Values come from ``config.json`` at the repository root
(or the file named by ``MFVIABILITY_CONFIG``); missing keys fall back to
``DEFAULTS``.
"""
import os
import logging

import json_config

logger = logging.getLogger(__name__)

TOP_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CONFIG_FILE = os.environ.get('MFVIABILITY_CONFIG',
                             os.path.join(TOP_DIR, 'config.json'))

DEFAULTS = {
    'merge_tolerance': 1e-12,
    'weight_tolerance': 1e-9,
    'plan_tolerance': 1e-10,
    'wasserstein_max_atoms': 512,
    'joint_oracle_max_support': 64,
    'bundle_max_trajectories': 128,
    'projection_tolerance': 1e-9,
    'projection_max_iterations': 500,
    'aumann_max_pieces': 8,
    'aumann_max_vertices': 8,
    'tangency_threshold': 1e-3,
    'tangency_monotone_slack': 1e-8,
    'witness_restarts': 20,
    'witness_sweeps': 8,
    'max_trajectories': 4096,
    'selector_tolerance': 1e-9,
    'seed': 0,
}

if os.path.exists(CONFIG_FILE):
    config = json_config.connect(CONFIG_FILE)
else:
    logger.warning("Settings file %s not found, using defaults", CONFIG_FILE)
    config = {}


def setting(key):
    """
    Look up a library setting.
    :param key: one of the keys of DEFAULTS
    :return: the configured value, or the default when the file omits it
    """
    if key in config:
        return config[key]
    return DEFAULTS[key]
