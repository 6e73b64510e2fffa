"""
File formats of the command line: JSON documents written with sorted keys,
CSV traces with repr floats, so identical runs give identical bytes.
"""
import csv
import json
import logging
import os

from ..errors import ConfigError

logger = logging.getLogger(__name__)

FLOW_TRACE = 'flow_trace.csv'
PARTICLE_TRACE = 'particles.csv'
MANIFEST = 'manifest.json'


def read_json(path):
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError("{} is not valid JSON: {}".format(path, e))


def dumps(data):
    return json.dumps(data, sort_keys=True, indent=2) + '\n'


def write_json(path, data):
    with open(path, 'w') as f:
        f.write(dumps(data))
    logger.info("wrote %s", path)


def measure_literal(document):
    """A measure file holds a bare literal or {"measure": literal}."""
    if isinstance(document, dict) and 'measure' in document:
        return document['measure']
    return document


def _cell(value):
    return '' if value is None else repr(float(value))


def write_flow_trace(result, path):
    """Rows t, dist_to_K, residual; the last grid time has no step residual."""
    dists = result.diagnostics.get('dist_to_K')
    residuals = result.diagnostics.get('residual', [])
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(['t', 'dist_to_K', 'residual'])
        for j, t in enumerate(result.times):
            dist = dists[j] if dists is not None else None
            residual = residuals[j] if j < len(residuals) else None
            writer.writerow([repr(float(t)), _cell(dist), _cell(residual)])
    logger.info("wrote %s", path)


def ensure_dir(path):
    os.makedirs(path, exist_ok=True)
    return path
