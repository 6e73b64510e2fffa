"""
Pointwise check of the viability condition T_K(m) ∩ F(m) ≠ ∅.

Three search spaces of lifted measures over m are tried in turn until one
holds a witness:

- fibers that mix the vectogram vertices,
- Dirac fibers at a barycenter of the vertices (any single velocity of
  F(x, m)),
- fibers that mix the vertices and their centroid.

The per-atom weights (mixture or barycentric) are optimized by coordinate
descent on the tangency ratio at the smallest tau of the ladder, with seeded
random restarts. Optional per-atom velocity hints seed the first start at
the nearest vertex.
"""
import logging
from collections import namedtuple

import numpy as np
from scipy.optimize import minimize_scalar

from ..config import setting
from ..dynamics import vectogram
from ..lifted import LiftedMeasure
from ..measures import AtomicMeasure, merge_support

logger = logging.getLogger(__name__)

ConditionResult = namedtuple('ConditionResult', ['found', 'witness', 'score'])

MIXTURE = 'mixture'
BARYCENTER = 'barycenter'
# (search space, centroid among the candidates)
PHASES = ((MIXTURE, False), (BARYCENTER, False), (MIXTURE, True))

# fiber weights below this are dropped from the witness
WEIGHT_FLOOR = 1e-12
LINE_XATOL = 1e-10


def _candidates(vertex_sets, with_centroid):
    """Per atom, the vectogram vertices, optionally plus their centroid."""
    if not with_centroid:
        return list(vertex_sets)
    result = []
    for verts in vertex_sets:
        stacked = np.vstack([verts, verts.mean(axis=0)])
        unique, _, _ = merge_support(stacked, np.ones(stacked.shape[0]), periodic=False)
        result.append(unique)
    return result


def _start(candidates, hints):
    """Uniform weights, or one-hot at the vertex nearest to each hint."""
    lams = []
    for i, cand in enumerate(candidates):
        lam = np.full(cand.shape[0], 1.0 / cand.shape[0])
        hint = None if hints is None else hints[i]
        if hint is not None and cand.shape[0] > 1:
            nearest = int(np.argmin(np.linalg.norm(cand - np.asarray(hint, dtype=float), axis=1)))
            lam = np.zeros(cand.shape[0])
            lam[nearest] = 1.0
        lams.append(lam)
    return lams


class _WitnessSearch:

    def __init__(self, m, oracle, candidates, tau, mode):
        self.m = m
        self.oracle = oracle
        self.candidates = candidates
        self.tau = tau
        self.mode = mode
        if mode == MIXTURE:
            self.positions = np.vstack([
                np.repeat(x[None, :], c.shape[0], axis=0) + tau * c
                for x, c in zip(m.atoms, candidates)])
        self.evaluations = 0

    def shifted(self, lams):
        if self.mode == BARYCENTER:
            velocities = np.vstack([lam @ c for lam, c in zip(lams, self.candidates)])
            return AtomicMeasure(self.m.atoms + self.tau * velocities, self.m.weights)
        masses = np.concatenate([w * lam for w, lam in zip(self.m.weights, lams)])
        keep = masses > 0.0
        return AtomicMeasure(self.positions[keep], masses[keep] / masses[keep].sum())

    def score(self, lams):
        self.evaluations += 1
        return self.oracle.distance(self.shifted(lams))[0] / self.tau

    def witness(self, lams):
        if self.mode == BARYCENTER:
            fibers = [((lam @ c)[None, :], [1.0]) for lam, c in zip(lams, self.candidates)]
        else:
            fibers = [(c[lam > 0.0], lam[lam > 0.0]) for c, lam in zip(self.candidates, lams)]
        return LiftedMeasure(self.m, fibers)

    def line_search(self, lams, i, k, current, stop_below=0.0):
        """Move atom i along (1 - s) lam + s e_k, s in [-lam_k / (1 - lam_k), 1]."""
        lam = lams[i]
        if lam[k] >= 1.0 - 1e-15:
            return lams, current
        target = np.zeros_like(lam)
        target[k] = 1.0
        lo = -lam[k] / (1.0 - lam[k])

        def moved(s):
            mixed = (1.0 - s) * lam + s * target
            mixed = np.clip(mixed, 0.0, None)
            out = list(lams)
            out[i] = mixed / mixed.sum()
            return out

        def g(s):
            return self.score(moved(s))

        best_s, best = 0.0, current
        for s in (lo, 1.0):
            value = g(s)
            if value < best:
                best_s, best = s, value
        if best >= stop_below:
            refined = minimize_scalar(g, bounds=(lo, 1.0), method='bounded',
                                      options={'xatol': LINE_XATOL})
            if refined.fun < best:
                best_s, best = float(refined.x), float(refined.fun)
        if best < current:
            return moved(best_s), best
        return lams, current

    def descend(self, lams, sweeps, stop_below):
        current = self.score(lams)
        if current < stop_below:
            return lams, current
        for _ in range(sweeps):
            before = current
            for i, cand in enumerate(self.candidates):
                if cand.shape[0] == 1:
                    continue
                for k in range(cand.shape[0]):
                    lams, current = self.line_search(lams, i, k, current, stop_below)
                    if current < stop_below:
                        return lams, current
            if current >= before:
                break
        return lams, current


def _clean(lams):
    cleaned = []
    for lam in lams:
        lam = np.where(lam > WEIGHT_FLOOR, lam, 0.0)
        cleaned.append(lam / lam.sum())
    return cleaned


def viability_condition_check(m, oracle, sys, tau0, levels=4, threshold=None,
                              restarts=None, sweeps=None, seed=None, hints=None):
    """
    Search for beta in F(m) tangent to K at m.
    :param tau0: largest tau of the ladder; the score is the ratio at
        tau0 2^-(levels - 1)
    :param hints: optional per-atom velocities (or None entries) preferred
        for the first start
    :return: ConditionResult(found, witness, score)
    """
    if threshold is None:
        threshold = setting('tangency_threshold')
    if restarts is None:
        restarts = setting('witness_restarts')
    if sweeps is None:
        sweeps = setting('witness_sweeps')
    if seed is None:
        seed = setting('seed')
    if levels < 1:
        raise ValueError("levels must be positive")
    if hints is not None and len(hints) != m.size:
        raise ValueError("{} hints for {} atoms".format(len(hints), m.size))
    tau = tau0 * 2.0 ** -(levels - 1)

    gap = oracle.distance(m)[0]
    if gap > oracle.resolution + 1e-9:
        logger.warning("condition checked at a measure %.3e away from K", gap)

    vertex_sets = [vectogram(sys, x, m).vertices for x in m.atoms]
    single = all(v.shape[0] == 1 for v in vertex_sets)
    rng = np.random.default_rng(seed)
    stop_below = threshold * 1e-3

    best_search, best_lams, score = None, None, np.inf
    evaluations = 0
    for mode, with_centroid in PHASES:
        if single and (mode, with_centroid) != PHASES[0]:
            break
        candidates = _candidates(vertex_sets, with_centroid)
        search = _WitnessSearch(m, oracle, candidates, tau, mode)
        attempts = 1 if single else max(1, restarts)
        phase_lams, phase_best = None, np.inf
        for attempt in range(attempts):
            if attempt == 0:
                lams = _start(candidates, hints)
            else:
                lams = [rng.dirichlet(np.ones(c.shape[0])) for c in candidates]
            lams, value = search.descend(lams, sweeps, stop_below)
            logger.debug("%s restart %d (centroid=%s): score %.3e",
                         mode, attempt, with_centroid, value)
            if value < phase_best:
                phase_lams, phase_best = lams, value
            if phase_best < stop_below:
                break
        phase_lams = _clean(phase_lams)
        phase_score = search.score(phase_lams)
        evaluations += search.evaluations
        if phase_score < score:
            best_search, best_lams, score = search, phase_lams, phase_score
        if score < threshold:
            break

    witness = best_search.witness(best_lams)
    found = bool(score < threshold)
    logger.info("condition check: found=%s score=%.3e (%s, %d oracle calls)",
                found, score, best_search.mode, evaluations)
    return ConditionResult(found, witness, float(score))
