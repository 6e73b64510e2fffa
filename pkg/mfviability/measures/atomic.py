"""
Finitely supported probability measures on T^d.
"""
import logging

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from ..config import setting
from ..errors import DimensionMismatchError, InvalidMeasureError
from ..geometry import TorusPoint, canonicalize, distance_array

logger = logging.getLogger(__name__)


def merge_support(values, weights, periodic=True, tol=None):
    """
    Merge support points that lie within ``tol`` of each other in every
    coordinate (wrapping at 1 when ``periodic``). Chains of close points
    form one group. Representatives keep the coordinates of the first
    occurrence; groups are ordered lexicographically by representative,
    which fixes the atom ordering.
    :return: (unique values, summed weights, inverse index into the groups)
    """
    if tol is None:
        tol = setting('merge_tolerance')
    values = np.asarray(values, dtype=float)
    weights = np.asarray(weights, dtype=float)
    n = values.shape[0]
    coords = canonicalize(values) if periodic else values
    tree = cKDTree(coords, boxsize=1.0 if periodic else None)
    pairs = np.asarray(tree.query_pairs(tol, p=np.inf, output_type='ndarray'),
                       dtype=np.intp).reshape(-1, 2)
    links = coo_matrix((np.ones(pairs.shape[0]), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    count, labels = connected_components(links, directed=False)
    first = np.full(count, n, dtype=np.intp)
    np.minimum.at(first, labels, np.arange(n))
    order = np.lexsort(coords[first].T[::-1])
    rank = np.empty(count, dtype=np.intp)
    rank[order] = np.arange(count)
    inverse = rank[labels]
    merged = np.bincount(inverse, weights=weights, minlength=count)
    return values[first[order]], merged, inverse


def as_point_array(atoms, dim=None):
    """Accept TorusPoints, nested lists or an (n, d) array."""
    if isinstance(atoms, np.ndarray):
        arr = np.asarray(atoms, dtype=float)
    else:
        rows = [a.coords if isinstance(a, TorusPoint) else np.atleast_1d(
            np.asarray(a, dtype=float)) for a in atoms]
        if not rows:
            raise InvalidMeasureError("a measure needs at least one atom")
        widths = {r.shape[0] for r in rows}
        if len(widths) != 1:
            raise DimensionMismatchError("atoms of different dimensions")
        arr = np.vstack(rows)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1) if dim in (None, 1) else arr.reshape(1, -1)
    if dim is not None and arr.shape[1] != dim:
        raise DimensionMismatchError(
            "expected dimension {}, got {}".format(dim, arr.shape[1]))
    return arr


class AtomicMeasure:
    """
    A probability measure on T^d with finitely many atoms.

    Atoms are canonicalized, atoms closer than the merge tolerance are merged
    (weights summed) and the atoms are ordered by their snapped keys. The
    stored arrays are read-only.
    """

    def __init__(self, atoms, weights, dim=None):
        points = canonicalize(as_point_array(atoms, dim))
        weights = np.atleast_1d(np.asarray(weights, dtype=float))
        if weights.shape[0] != points.shape[0]:
            raise InvalidMeasureError(
                "{} atoms but {} weights".format(points.shape[0], weights.shape[0]))
        if not np.all(np.isfinite(points)) or not np.all(np.isfinite(weights)):
            raise InvalidMeasureError("atoms and weights must be finite")
        if np.any(weights <= 0.0):
            raise InvalidMeasureError("weights must be positive")
        total = float(np.sum(weights))
        if abs(total - 1.0) > setting('weight_tolerance'):
            raise InvalidMeasureError(
                "weights sum to {!r}, expected 1".format(total))
        atoms, merged, inverse = merge_support(points, weights / total)
        self._set(atoms, merged)
        self._inverse = inverse

    @classmethod
    def _trusted(cls, atoms, weights):
        """Build from already merged, ordered and normalized arrays."""
        measure = cls.__new__(cls)
        measure._set(np.asarray(atoms, dtype=float), np.asarray(weights, dtype=float))
        measure._inverse = np.arange(measure._weights.shape[0])
        return measure

    def _set(self, atoms, weights):
        atoms = np.array(atoms, dtype=float)
        weights = np.array(weights, dtype=float)
        atoms.setflags(write=False)
        weights.setflags(write=False)
        self._atoms = atoms
        self._weights = weights

    @classmethod
    def with_index(cls, atoms, weights, dim=None):
        """
        Build a measure and return, for every input atom, the index of the
        merged atom it went to.
        """
        measure = cls(atoms, weights, dim=dim)
        return measure, measure._inverse

    @classmethod
    def dirac(cls, point):
        return cls([point], [1.0])

    @classmethod
    def uniform(cls, points):
        points = as_point_array(points)
        n = points.shape[0]
        return cls(points, np.full(n, 1.0 / n))

    @property
    def atoms(self):
        return self._atoms

    @property
    def weights(self):
        return self._weights

    @property
    def points(self):
        return [TorusPoint(a) for a in self._atoms]

    @property
    def dim(self):
        return self._atoms.shape[1]

    @property
    def size(self):
        return self._atoms.shape[0]

    def __len__(self):
        return self.size

    def expectation(self, phi):
        """Integral of phi (a function of an (n, d) array of points)."""
        return float(np.dot(self._weights, np.asarray(phi(self._atoms), dtype=float)))

    def is_close(self, other, tol=1e-10):
        """Atom-by-atom comparison; both measures use the same ordering."""
        if self.dim != other.dim or self.size != other.size:
            return False
        if np.max(np.abs(self._weights - other._weights)) > tol:
            return False
        return bool(np.max(distance_array(self._atoms, other._atoms)) <= tol)

    def to_dict(self):
        return {
            'd': int(self.dim),
            'atoms': self._atoms.tolist(),
            'weights': self._weights.tolist(),
        }

    @classmethod
    def from_dict(cls, data):
        try:
            d = int(data['d'])
            return cls(data['atoms'], data['weights'], dim=d)
        except (KeyError, TypeError) as e:
            raise InvalidMeasureError("malformed measure literal: {}".format(e))

    def __repr__(self):
        parts = ", ".join("{:.6g}@{}".format(w, np.round(a, 12).tolist())
                          for a, w in zip(self._atoms, self._weights))
        return "AtomicMeasure(d={}, [{}])".format(self.dim, parts)
