"""
Controlled vector fields f(x, m, u) with a finite control list U, and the
vectogram F(x, m) = co{f(x, m, u): u in U} they generate.

The convex hull is never built explicitly: a vectogram is held by its
generating vertices and distances to it go through the minimum-norm point
projection.
"""
import logging
from collections import namedtuple

import numpy as np

from ..errors import DimensionMismatchError, DynamicsError
from ..geometry import TorusPoint, distance_array
from ..measures import AtomicMeasure, merge_support, wasserstein1_value
from .projection import distance_to_hull

logger = logging.getLogger(__name__)

# norms are compared against R with this slack
BOUND_SLACK = 1e-9

ValidationReport = namedtuple(
    'ValidationReport',
    ['max_norm', 'bound_R', 'max_quotient', 'lipschitz_L', 'samples', 'ok'])


def _coords(x):
    if isinstance(x, TorusPoint):
        return x.coords
    return np.atleast_1d(np.asarray(x, dtype=float))


class ControlSystem:
    """
    A mean-field control system on T^d.
    :attributes
        f: callable (x coords (d,), AtomicMeasure, control) -> velocity (d,)
        controls: the finite control list U
        lipschitz_L: declared Lipschitz constant in (x, m)
        bound_R: declared bound on |f|
        name: label used in logs and manifests
    """

    def __init__(self, f, controls, lipschitz_L, bound_R, dim, name='custom'):
        if not controls:
            raise DynamicsError("a control system needs at least one control")
        if lipschitz_L < 0 or bound_R < 0:
            raise DynamicsError("L and R must be nonnegative")
        self.f = f
        self.controls = [np.atleast_1d(np.asarray(u, dtype=float)) for u in controls]
        self.lipschitz_L = float(lipschitz_L)
        self.bound_R = float(bound_R)
        self.dim = int(dim)
        self.name = name

    def velocity(self, x, m, u):
        """f(x, m, u) as a checked (d,) array."""
        x = _coords(x)
        if x.shape[0] != self.dim or m.dim != self.dim:
            raise DimensionMismatchError(
                "system {} lives in dimension {}".format(self.name, self.dim))
        value = np.atleast_1d(np.asarray(self.f(x, m, u), dtype=float))
        if value.shape != (self.dim,):
            raise DynamicsError("f returned shape {}, expected ({},)".format(
                value.shape, self.dim))
        if not np.all(np.isfinite(value)):
            raise DynamicsError("f returned a non-finite velocity at x={}".format(x.tolist()))
        return value

    def validate(self, measures=None, rng=None, samples=64):
        """
        Empirical check of the declared constants: samples (x, m, u), records
        the largest |f| and the largest quotient
        |f(x1,m1,u) - f(x2,m2,u)| / (rho(x1,x2) + W1(m1,m2)).
        :param measures: population states to sample from; random ones
            (up to 4 atoms) are drawn when omitted
        :return: ValidationReport
        """
        if rng is None:
            rng = np.random.default_rng(0)

        def draw_measure():
            if measures:
                return measures[rng.integers(len(measures))]
            k = int(rng.integers(1, 5))
            return AtomicMeasure(rng.random((k, self.dim)), rng.dirichlet(np.ones(k)))

        max_norm = 0.0
        max_quotient = 0.0
        for _ in range(samples):
            u = self.controls[rng.integers(len(self.controls))]
            x1, x2 = rng.random(self.dim), rng.random(self.dim)
            m1, m2 = draw_measure(), draw_measure()
            v1 = self.velocity(x1, m1, u)
            v2 = self.velocity(x2, m2, u)
            max_norm = max(max_norm, np.linalg.norm(v1), np.linalg.norm(v2))
            gap = float(distance_array(x1, x2)) + wasserstein1_value(m1, m2)
            if gap > 0.0:
                max_quotient = max(max_quotient, np.linalg.norm(v1 - v2) / gap)

        ok = (max_norm <= self.bound_R + BOUND_SLACK and
              max_quotient <= self.lipschitz_L + BOUND_SLACK)
        if max_norm > self.bound_R + BOUND_SLACK:
            logger.warning("%s: sampled |f| = %.6g exceeds R = %.6g",
                           self.name, max_norm, self.bound_R)
        if max_quotient > self.lipschitz_L + BOUND_SLACK:
            logger.warning("%s: sampled Lipschitz quotient %.6g exceeds L = %.6g",
                           self.name, max_quotient, self.lipschitz_L)
        return ValidationReport(float(max_norm), self.bound_R, float(max_quotient),
                                self.lipschitz_L, samples, ok)

    def __repr__(self):
        return "ControlSystem({}, d={}, |U|={}, L={:g}, R={:g})".format(
            self.name, self.dim, len(self.controls), self.lipschitz_L, self.bound_R)


class VectogramVertices:
    """The generating vertices {f(x, m, u_k)} of F(x, m)."""

    def __init__(self, vertices, bound_R=None):
        vertices = np.atleast_2d(np.asarray(vertices, dtype=float))
        if vertices.shape[0] == 0:
            raise DynamicsError("a vectogram needs at least one vertex")
        if not np.all(np.isfinite(vertices)):
            raise DynamicsError("vectogram vertices must be finite")
        if bound_R is not None:
            norms = np.linalg.norm(vertices, axis=1)
            if np.max(norms) > bound_R + BOUND_SLACK:
                raise DynamicsError("vertex norm {:.6g} exceeds R = {:.6g}".format(
                    float(np.max(norms)), bound_R))
        vertices.setflags(write=False)
        self.vertices = vertices

    @property
    def dim(self):
        return self.vertices.shape[1]

    def __len__(self):
        return self.vertices.shape[0]

    def __repr__(self):
        return "VectogramVertices({})".format(self.vertices.tolist())


def vectogram(sys, x, m):
    """
    Evaluate f at every control. Coinciding vertices are merged.
    :return: VectogramVertices
    """
    values = np.vstack([sys.velocity(x, m, u) for u in sys.controls])
    unique, _, _ = merge_support(values, np.ones(values.shape[0]), periodic=False)
    return VectogramVertices(unique, bound_R=sys.bound_R)


def dist_to_vectogram(v, verts):
    """Euclidean distance from the velocity v to co(verts)."""
    v = _velocity_coords(v)
    if v.shape[0] != verts.dim:
        raise DimensionMismatchError(
            "velocity of dimension {} against a vectogram in dimension {}".format(
                v.shape[0], verts.dim))
    return distance_to_hull(v, verts.vertices)[0]


def project_to_vectogram(v, verts):
    """The point of co(verts) closest to v."""
    return distance_to_hull(_velocity_coords(v), verts.vertices)[1]


def _velocity_coords(v):
    comps = getattr(v, 'comps', v)
    return np.atleast_1d(np.asarray(comps, dtype=float))


def feasibility_residual(beta, sys, population=None):
    """
    Integral of dist(v, F(x, population)) against beta. The population
    defaults to beta's own base, which is the F(m) membership test.
    """
    m = beta.base if population is None else population
    total = 0.0
    for x, weight, (velocities, fiber_w) in zip(beta.base.atoms, beta.base.weights,
                                                 beta.fibers):
        verts = vectogram(sys, x, m)
        dists = [distance_to_hull(v, verts.vertices)[0] for v in velocities]
        total += weight * float(np.dot(fiber_w, dists))
    return total
