"""
Geometry of the flat torus T^d = R^d / Z^d.

Points are stored by their canonical representative in [0, 1)^d, distances
use the Euclidean quotient metric (per-coordinate minimal displacement, then
the l2 norm).
"""
import logging

import numpy as np

from ..config import setting
from ..errors import DimensionMismatchError, InvalidMeasureError

logger = logging.getLogger(__name__)


def canonicalize(coords):
    """
    Map real coordinates to their representative in the half-open cube.
    Works on a single point or on an array of points (last axis = d).
    """
    coords = np.asarray(coords, dtype=float)
    wrapped = coords - np.floor(coords)
    # x - floor(x) rounds up to 1.0 for tiny negative x
    return np.where(wrapped >= 1.0, 0.0, wrapped)


def point_key(coords, step=None):
    """
    Integer key of a point on the grid of the merge tolerance, wrapping at 1.
    Coordinates that round to the same grid node share a key.
    """
    if step is None:
        step = setting('merge_tolerance')
    keys = np.round(canonicalize(coords) / step).astype(np.int64)
    return np.mod(keys, np.int64(round(1.0 / step)))


def displacement(a, b):
    """
    Minimal displacement from a to b, per coordinate in [-1/2, 1/2).
    Broadcasts over leading axes.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape[-1] != b.shape[-1]:
        raise DimensionMismatchError(
            "dimension mismatch: {} vs {}".format(a.shape[-1], b.shape[-1]))
    delta = b - a
    return delta - np.floor(delta + 0.5)


def distance_array(a, b):
    """Torus distance between points (or broadcast arrays of points)."""
    return np.linalg.norm(displacement(a, b), axis=-1)


def pairwise_distances(a, b):
    """
    Cost matrix of torus distances between two point clouds.
    :param a: array (n, d)
    :param b: array (k, d)
    :return: array (n, k)
    """
    a = np.atleast_2d(np.asarray(a, dtype=float))
    b = np.atleast_2d(np.asarray(b, dtype=float))
    return distance_array(a[:, None, :], b[None, :, :])


def _finite_vector(values, what):
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidMeasureError("{} must be a non-empty vector".format(what))
    if not np.all(np.isfinite(arr)):
        raise InvalidMeasureError("{} must have finite entries".format(what))
    return arr


class TorusPoint:
    """
    A point of T^d held by its canonical representative.
    Immutable: the coordinate array is read-only.
    """

    __slots__ = ('_coords',)

    def __init__(self, coords):
        arr = canonicalize(_finite_vector(coords, "torus point"))
        arr.setflags(write=False)
        self._coords = arr

    @property
    def coords(self):
        return self._coords

    @property
    def dim(self):
        return self._coords.shape[0]

    @property
    def key(self):
        return point_key(self._coords)

    def __iter__(self):
        return iter(self._coords.tolist())

    def __eq__(self, other):
        if not isinstance(other, TorusPoint):
            return NotImplemented
        return np.array_equal(self.key, other.key)

    def __hash__(self):
        return hash(self.key.tobytes())

    def __repr__(self):
        return "TorusPoint({})".format(self._coords.tolist())


class Velocity:
    """A free vector of R^d, the tangent space of T^d."""

    __slots__ = ('_comps',)

    def __init__(self, comps):
        arr = _finite_vector(comps, "velocity").copy()
        arr.setflags(write=False)
        self._comps = arr

    @property
    def comps(self):
        return self._comps

    @property
    def dim(self):
        return self._comps.shape[0]

    def norm(self):
        return float(np.linalg.norm(self._comps))

    def __eq__(self, other):
        if not isinstance(other, Velocity):
            return NotImplemented
        return np.array_equal(self._comps, other._comps)

    def __hash__(self):
        return hash(self._comps.tobytes())

    def __repr__(self):
        return "Velocity({})".format(self._comps.tolist())


def _coords_of(x):
    if isinstance(x, TorusPoint):
        return x.coords
    return np.asarray(x, dtype=float)


def _comps_of(v):
    if isinstance(v, Velocity):
        return v.comps
    return np.asarray(v, dtype=float)


def torus_distance(a, b):
    """
    Distance on T^d: Euclidean length of the per-coordinate minimal
    displacement min(|delta|, 1 - |delta|).
    :param a: TorusPoint
    :param b: TorusPoint of the same dimension
    :return: float
    """
    return float(distance_array(_coords_of(a), _coords_of(b)))


def translate(x, v, tau):
    """
    The shift map (x, v) -> x + tau v on T^d x R^d.
    :param x: TorusPoint
    :param v: Velocity of the same dimension
    :param tau: nonnegative time
    :return: TorusPoint
    """
    xc = _coords_of(x)
    vc = _comps_of(v)
    if xc.shape[-1] != vc.shape[-1]:
        raise DimensionMismatchError(
            "dimension mismatch: {} vs {}".format(xc.shape[-1], vc.shape[-1]))
    if tau < 0:
        raise ValueError("translate expects tau >= 0, got {}".format(tau))
    return TorusPoint(xc + tau * vc)
