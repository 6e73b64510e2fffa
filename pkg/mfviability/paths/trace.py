"""
CSV export and import of path bundles.

One row per (trajectory, grid time): traj_id, weight, t, x_1..x_d, with the
canonical position. Reading a trace back recovers the segment displacements
as minimal torus displacements, which is exact while every segment moves
less than half a period per coordinate.
"""
import csv
import logging

import numpy as np

from ..errors import PathError
from ..geometry import canonicalize, displacement
from .bundle import PathBundle

logger = logging.getLogger(__name__)


def trace_header(dim):
    return ['traj_id', 'weight', 't'] + ['x_{}'.format(i + 1) for i in range(dim)]


def write_particle_trace(bundle, path):
    """Write the bundle to ``path``; floats use repr so reruns are byte-identical."""
    positions = bundle.cover_positions()
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(trace_header(bundle.dim))
        for k in range(bundle.size):
            weight = repr(float(bundle.weights[k]))
            for t, x in zip(bundle.grid, positions[k]):
                writer.writerow([k, weight, repr(float(t))] +
                                [repr(float(c)) for c in canonicalize(x)])


def read_particle_trace(path):
    """
    Rebuild a PathBundle from a particle trace.
    :raise PathError: on malformed or inconsistent rows
    """
    rows = {}
    weights = {}
    with open(path, newline='') as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise PathError("empty particle trace {}".format(path))
        dim = len(header) - 3
        if dim < 1 or header != trace_header(dim):
            raise PathError("unexpected particle trace header {}".format(header))
        for line in reader:
            if not line:
                continue
            try:
                k = int(line[0])
                weights.setdefault(k, float(line[1]))
                rows.setdefault(k, []).append([float(c) for c in line[2:]])
            except (ValueError, IndexError) as e:
                raise PathError("malformed particle trace row {}: {}".format(line, e))
    if not rows:
        raise PathError("particle trace {} has no rows".format(path))

    ids = sorted(rows)
    tables = [np.asarray(rows[k]) for k in ids]
    grid = tables[0][:, 0]
    for table in tables[1:]:
        if table.shape != tables[0].shape or np.any(table[:, 0] != grid):
            raise PathError("trajectories in {} do not share a grid".format(path))
    points = np.stack([table[:, 1:] for table in tables])
    steps = displacement(points[:, :-1, :], points[:, 1:, :])
    logger.debug("read %d trajectories over %d nodes from %s", len(ids), grid.shape[0], path)
    return PathBundle(grid, points[:, 0, :], steps, [weights[k] for k in ids])
