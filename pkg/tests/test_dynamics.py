import numpy as np
import pytest

from conftest import random_lift, random_measure, symmetric_pair_lift
from mfviability.errors import (ConfigError, DimensionMismatchError, DynamicsError,
                                InstanceTooLargeError)
from mfviability.dynamics import (ControlSystem, VectogramVertices, build_selector,
                                  build_system, dist_to_step_aumann, dist_to_vectogram,
                                  distance_to_hull, feasibility_residual,
                                  integrated_aumann_bound, min_norm_point,
                                  project_to_vectogram, step_aumann_generators, vectogram)
from mfviability.geometry import torus_distance
from mfviability.lifted import LiftedMeasure, compose
from mfviability.measures import AtomicMeasure, wasserstein1, wasserstein1_value


def triangle():
    return VectogramVertices([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])


@pytest.fixture
def drift_system():
    return build_system('mean-drift', 2, {'controls': [[0.5, 0.0], [0.0, -0.5]], 'kappa': 1.0})


class TestProjection:

    def test_origin_inside(self):
        x, weights = min_norm_point([[-1.0, -1.0], [1.0, -1.0], [0.0, 2.0]])
        assert np.linalg.norm(x) <= 1e-9
        assert weights.sum() == pytest.approx(1.0)

    def test_segment(self):
        dist, closest = distance_to_hull([0.5, 1.0], [[0.0, 0.0], [1.0, 0.0]])
        assert dist == pytest.approx(1.0)
        assert closest.tolist() == pytest.approx([0.5, 0.0])

    def test_matches_brute_force_on_segments(self, rng):
        for _ in range(100):
            a, b, v = rng.normal(size=(3, 2))
            ts = np.linspace(0.0, 1.0, 20001)
            brute = np.min(np.linalg.norm(a + ts[:, None] * (b - a) - v, axis=1))
            assert distance_to_hull(v, [a, b])[0] == pytest.approx(brute, abs=1e-4)


class TestVectogram:

    def test_flip_controls(self, flip_system):
        verts = vectogram(flip_system, [0.3], AtomicMeasure.dirac([0.3]))
        assert verts.vertices.ravel().tolist() == [-1.0, 1.0]

    def test_single_control(self):
        sys = build_system('constant-controls', 1, {'controls': [[0.25]]})
        verts = vectogram(sys, [0.1], AtomicMeasure.dirac([0.1]))
        assert len(verts) == 1

    def test_mean_drift_at_own_dirac(self):
        sys = build_system('mean-drift', 1, {'controls': [[0.0]]})
        verts = vectogram(sys, [0.3], AtomicMeasure.dirac([0.3]))
        assert verts.vertices.ravel().tolist() == pytest.approx([0.0], abs=1e-15)

    def test_duplicate_vertices_merged(self):
        sys = build_system('constant-controls', 1, {'controls': [[1.0], [1.0], [0.0]]})
        assert len(vectogram(sys, [0.1], AtomicMeasure.dirac([0.1]))) == 2

    def test_non_finite_velocity(self):
        sys = ControlSystem(lambda x, m, u: [np.nan], [[0.0]], 0.0, 1.0, 1)
        with pytest.raises(DynamicsError):
            vectogram(sys, [0.1], AtomicMeasure.dirac([0.1]))

    def test_bound_violation(self):
        sys = ControlSystem(lambda x, m, u: u, [[2.0]], 0.0, 1.0, 1)
        with pytest.raises(DynamicsError):
            vectogram(sys, [0.1], AtomicMeasure.dirac([0.1]))

    def test_dimension_checked(self, flip_system):
        with pytest.raises(DimensionMismatchError):
            flip_system.velocity([0.1, 0.2], AtomicMeasure.dirac([0.1]), [1.0])

    @pytest.mark.parametrize("v, expected", [([0.0], 0.0), ([2.0], 1.0), ([-1.5], 0.5)])
    def test_distance_in_one_dimension(self, v, expected):
        verts = VectogramVertices([[-1.0], [1.0]])
        assert dist_to_vectogram(v, verts) == pytest.approx(expected, abs=1e-12)

    def test_distance_to_triangle(self):
        assert dist_to_vectogram([1.0, 1.0], triangle()) == pytest.approx(0.70710678, abs=1e-8)
        assert project_to_vectogram([1.0, 1.0], triangle()).tolist() == pytest.approx([0.5, 0.5])

    def test_distance_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            dist_to_vectogram([1.0], triangle())

    def test_distance_is_one_lipschitz(self, rng):
        for _ in range(100):
            verts = VectogramVertices(rng.normal(size=(4, 2)))
            v1, v2 = rng.normal(size=(2, 2)) * 2
            gap = abs(dist_to_vectogram(v1, verts) - dist_to_vectogram(v2, verts))
            assert gap <= np.linalg.norm(v1 - v2) + 1e-10

    def test_vectogram_lipschitz_in_state(self, drift_system, rng):
        L = drift_system.lipschitz_L
        for _ in range(100):
            x1, x2 = rng.random((2, 2))
            m1, m2 = random_measure(rng, 2, 4), random_measure(rng, 2, 4)
            v = rng.normal(size=2)
            d1 = dist_to_vectogram(v, vectogram(drift_system, x1, m1))
            d2 = dist_to_vectogram(v, vectogram(drift_system, x2, m2))
            bound = L * (torus_distance(x1, x2) + wasserstein1_value(m1, m2))
            assert abs(d1 - d2) <= bound + 1e-8


class TestFeasibilityResidual:

    def test_outside(self, flip_system):
        beta = LiftedMeasure(AtomicMeasure.dirac([0.5]), [([[3.0]], [1.0])])
        assert feasibility_residual(beta, flip_system) == pytest.approx(2.0)

    def test_symmetric_pair_is_feasible(self, flip_system):
        assert feasibility_residual(symmetric_pair_lift(), flip_system) == 0.0

    def test_vertex_lift(self, drift_system, rng):
        m = random_measure(rng, 2, 4)
        fibers = [(vectogram(drift_system, x, m).vertices[:1], [1.0]) for x in m.atoms]
        assert feasibility_residual(LiftedMeasure(m, fibers), drift_system) <= 1e-12

    def test_composition_moves_residual_by_at_most_2L_W1(self, drift_system, rng):
        L = drift_system.lipschitz_L
        for _ in range(50):
            m, m_prime = random_measure(rng, 2, 4), random_measure(rng, 2, 4)
            beta = random_lift(rng, m)
            value, plan = wasserstein1(m_prime, m)
            gap = abs(feasibility_residual(beta, drift_system) -
                      feasibility_residual(compose(plan, beta), drift_system))
            assert gap <= 2.0 * L * value + 1e-8


class TestAumann:

    def test_single_piece_scales(self):
        verts = VectogramVertices([[-1.0], [1.0]])
        assert dist_to_step_aumann([0.3], [(0.1, verts)]) == pytest.approx(0.2)
        assert dist_to_step_aumann([0.05], [(0.1, verts)]) == 0.0

    def test_two_pieces(self):
        verts = VectogramVertices([[-1.0], [1.0]])
        pieces = [(0.5, verts), (0.5, verts)]
        assert dist_to_step_aumann([1.5], pieces) == pytest.approx(0.5)
        assert step_aumann_generators(pieces).ravel().tolist() == pytest.approx([-1.0, 1.0])

    def test_selection_sum_is_inside(self, rng):
        pieces = [(float(rng.uniform(0.05, 0.2)), VectogramVertices(rng.normal(size=(3, 2))))
                  for _ in range(4)]
        dx = sum(duration * verts.vertices[int(rng.integers(3))] for duration, verts in pieces)
        assert dist_to_step_aumann(dx, pieces) == pytest.approx(0.0, abs=1e-9)

    def test_too_many_pieces(self):
        verts = VectogramVertices([[-1.0], [1.0]])
        with pytest.raises(InstanceTooLargeError):
            dist_to_step_aumann([0.0], [(0.1, verts)] * 9)

    def test_positive_durations(self):
        with pytest.raises(ValueError):
            step_aumann_generators([(0.0, VectogramVertices([[1.0]]))])

    def test_integrated_bound(self, drift_system, rng):
        L = drift_system.lipschitz_L
        for _ in range(50):
            durations = rng.uniform(0.01, 0.1, size=3)
            xs, xs_prime = rng.random((3, 2)), rng.random((3, 2))
            ms = [random_measure(rng, 2, 3) for _ in range(3)]
            ms_prime = [random_measure(rng, 2, 3) for _ in range(3)]
            y, y_prime = rng.normal(size=(2, 2)) * 0.2
            d1 = dist_to_step_aumann(y, [(dt, vectogram(drift_system, x, m))
                                         for dt, x, m in zip(durations, xs, ms)])
            d2 = dist_to_step_aumann(y_prime, [(dt, vectogram(drift_system, x, m))
                                               for dt, x, m in zip(durations, xs_prime, ms_prime)])
            bound = integrated_aumann_bound(
                np.linalg.norm(y - y_prime), durations,
                [torus_distance(a, b) for a, b in zip(xs, xs_prime)],
                [wasserstein1_value(a, b) for a, b in zip(ms, ms_prime)], L)
            assert abs(d1 - d2) <= bound + 1e-8


class TestCatalog:

    def test_unknown_system(self):
        with pytest.raises(ConfigError):
            build_system('gravity', 1, {})

    def test_bad_parameters(self):
        with pytest.raises(ConfigError):
            build_system('constant-controls', 1, {'controls': [[1.0]], 'spin': 2})

    def test_control_dimension(self):
        with pytest.raises(ConfigError):
            build_system('constant-controls', 2, {'controls': [[1.0]]})

    def test_mean_drift_constants(self):
        sys = build_system('mean-drift', 2, {'controls': [[1.0, 0.0]], 'kappa': 0.5})
        assert sys.lipschitz_L == pytest.approx(np.pi * np.sqrt(2))
        assert sys.bound_R == pytest.approx(1.0 + 0.5 * np.sqrt(2))

    def test_declared_constants_hold(self, drift_system, flip_system):
        assert drift_system.validate(samples=128).ok
        report = flip_system.validate()
        assert report.ok
        assert report.max_quotient == 0.0

    def test_understated_constant_reported(self):
        sys = build_system('mean-drift', 1, {'controls': [[0.0]], 'lipschitz_L': 0.01})
        assert not sys.validate().ok

    def test_selectors(self, flip_system):
        m = AtomicMeasure.dirac([0.2])
        assert build_selector('vertex', flip_system, {'index': 1})([0.2], m).tolist() == [1.0]
        assert build_selector('constant', flip_system, {'velocity': [0.5]})([0.2], m).tolist() == [0.5]
        with pytest.raises(ConfigError):
            build_selector('vertex', flip_system, {'index': 5})
        with pytest.raises(ConfigError):
            build_selector('constant', flip_system, {'velocity': [0.5, 0.5]})
        with pytest.raises(ConfigError):
            build_selector('greedy', flip_system, {})
