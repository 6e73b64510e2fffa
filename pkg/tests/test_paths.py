import numpy as np
import pytest

from conftest import random_measure
from mfviability.errors import ConcatenationError, InvalidMeasureError, PathError
from mfviability.geometry import TorusPoint, torus_distance
from mfviability.measures import AtomicMeasure, wasserstein1_value
from mfviability.paths import (PathBundle, Trajectory, bundle_distance, concatenate,
                               difference_quotient, evaluate, read_particle_trace,
                               write_particle_trace)


def straight(start, velocity, grid):
    """One-path bundle moving at constant velocity over the grid."""
    grid = np.asarray(grid, dtype=float)
    steps = np.outer(np.diff(grid), np.atleast_1d(velocity))
    return PathBundle(grid, [np.atleast_1d(start)], steps[None, :, :], [1.0])


def random_bundle(rng, dim, grid, max_paths=4, speed=0.3):
    m = random_measure(rng, dim, max_paths)
    steps = speed * rng.normal(size=(m.size, len(grid) - 1, dim))
    return PathBundle(grid, m.atoms, steps, m.weights)


def splitting_continuation(rng, measure, grid, speed=0.3):
    """Two continuations out of every atom of ``measure``."""
    starts, steps, weights = [], [], []
    for x, w in zip(measure.atoms, measure.weights):
        a = float(rng.uniform(0.2, 0.8))
        for share in (a, 1.0 - a):
            starts.append(x)
            steps.append(speed * rng.normal(size=(len(grid) - 1, measure.dim)))
            weights.append(w * share)
    return PathBundle(grid, np.vstack(starts), np.stack(steps), weights)


class TestTrajectory:

    def test_position_wraps(self):
        path = Trajectory([0.0, 1.0], [0.9], [[0.2]])
        assert torus_distance(path.position(1.0), TorusPoint([0.1])) <= 1e-12
        assert torus_distance(path.position(0.5), TorusPoint([0.0])) <= 1e-12

    def test_outside_span(self):
        path = Trajectory([0.0, 1.0], [0.9], [[0.2]])
        with pytest.raises(PathError):
            path.position(1.5)

    def test_grid_must_increase(self):
        with pytest.raises(PathError):
            Trajectory([0.0, 0.0], [0.1], [[0.0]])


class TestEvaluate:

    def test_at_node(self):
        chi = straight([0.2], [0.5], [0.0, 0.5, 1.0])
        assert evaluate(chi, 0.5).is_close(AtomicMeasure.dirac([0.45]))

    def test_two_constant_paths(self):
        chi = PathBundle([0.0, 1.0], [[0.1], [0.6]], np.zeros((2, 1, 1)), [0.3, 0.7])
        expected = AtomicMeasure([[0.1], [0.6]], [0.3, 0.7])
        assert evaluate(chi, 0.37).is_close(expected)

    def test_straight_path_crosses_the_seam(self):
        chi = straight([0.9], [0.2], [0.0, 1.0])
        assert evaluate(chi, 1.0).is_close(AtomicMeasure.dirac([0.1]))

    def test_outside_span(self):
        with pytest.raises(PathError):
            evaluate(straight([0.9], [0.2], [0.0, 1.0]), -0.5)

    def test_weights_validated(self):
        with pytest.raises(InvalidMeasureError):
            PathBundle([0.0, 1.0], [[0.1], [0.6]], np.zeros((2, 1, 1)), [0.3, 0.3])

    def test_stationary(self, rng):
        m = random_measure(rng, 2)
        chi = PathBundle.stationary(m, [0.0, 0.25, 1.0])
        assert evaluate(chi, 0.8).is_close(m)
        assert chi.max_speed() == 0.0


class TestConcatenate:

    def test_flat_continuation(self):
        chi1 = straight([0.2], [0.5], [0.0, 0.5])
        chi2 = straight([0.45], [0.0], [0.5, 1.0])
        chi = concatenate(chi1, chi2)
        assert chi.size == 1
        assert evaluate(chi, 1.0).is_close(AtomicMeasure.dirac([0.45]))
        assert evaluate(chi, 0.25).is_close(AtomicMeasure.dirac([0.325]))

    def test_split(self):
        chi1 = straight([0.5], [0.0], [0.0, 1.0])
        chi2 = PathBundle([1.0, 2.0], [[0.5], [0.5]], [[[0.1]], [[-0.1]]], [1.0 / 3, 2.0 / 3])
        chi = concatenate(chi1, chi2)
        assert chi.size == 2
        expected = AtomicMeasure([[0.6], [0.4]], [1.0 / 3, 2.0 / 3])
        assert evaluate(chi, 2.0).is_close(expected)

    def test_marginal_mismatch(self):
        chi1 = straight([0.2], [0.0], [0.0, 1.0])
        chi2 = straight([0.3], [0.0], [1.0, 2.0])
        with pytest.raises(ConcatenationError) as info:
            concatenate(chi1, chi2)
        assert "matching marginals at the junction" in str(info.value)

    def test_grids_must_meet(self):
        chi1 = straight([0.2], [0.0], [0.0, 1.0])
        chi2 = straight([0.2], [0.0], [1.5, 2.0])
        with pytest.raises(ConcatenationError):
            concatenate(chi1, chi2)

    def test_marginals_on_both_sides(self, rng):
        for _ in range(50):
            d = int(rng.integers(1, 3))
            chi1 = random_bundle(rng, d, [0.0, 0.3, 0.5])
            chi2 = splitting_continuation(rng, evaluate(chi1, 0.5), [0.5, 0.7, 1.0])
            chi = concatenate(chi1, chi2)
            for t in (0.0, 0.3, 0.4, 0.5):
                assert wasserstein1_value(evaluate(chi, t), evaluate(chi1, t)) <= 1e-10
            for t in (0.5, 0.6, 1.0):
                assert wasserstein1_value(evaluate(chi, t), evaluate(chi2, t)) <= 1e-10


class TestBundleDistance:

    def test_identical(self, rng):
        chi = random_bundle(rng, 2, [0.0, 0.5, 1.0])
        assert bundle_distance(chi, chi) == pytest.approx(0.0, abs=1e-15)

    def test_constant_offset(self):
        chi1 = straight([0.1], [0.0], [0.0, 1.0])
        chi2 = straight([0.3], [0.0], [0.0, 1.0])
        assert bundle_distance(chi1, chi2) == pytest.approx(0.2)

    def test_sup_over_time(self):
        chi1 = straight([0.1], [0.4], [0.0, 1.0])
        chi2 = straight([0.1], [0.0], [0.0, 1.0])
        assert bundle_distance(chi1, chi2) == pytest.approx(0.4)

    def test_dominates_marginal_distances(self, rng):
        grid = [0.0, 0.25, 0.5, 1.0]
        for _ in range(50):
            d = int(rng.integers(1, 3))
            chi1, chi2 = random_bundle(rng, d, grid), random_bundle(rng, d, grid)
            value = bundle_distance(chi1, chi2)
            for t in grid:
                assert wasserstein1_value(evaluate(chi1, t), evaluate(chi2, t)) <= value + 1e-9

    def test_time_span_checked(self):
        with pytest.raises(PathError):
            bundle_distance(straight([0.1], [0.0], [0.0, 1.0]),
                            straight([0.1], [0.0], [0.0, 2.0]))


class TestDifferenceQuotient:

    @pytest.mark.parametrize("tau", [0.25, 1.0])
    def test_straight_path(self, tau):
        beta = difference_quotient(straight([0.3], [0.7], [0.0, 0.5, 1.0]), tau)
        assert beta.base.is_close(AtomicMeasure.dirac([0.3]))
        velocities, weights = beta.fiber(0)
        assert velocities.ravel().tolist() == pytest.approx([0.7])
        assert weights.tolist() == [1.0]

    def test_two_paths_from_one_point(self):
        chi = PathBundle([0.0, 0.1, 0.2], [[0.5], [0.5]],
                         [[[0.1], [0.1]], [[-0.1], [-0.1]]], [0.5, 0.5])
        beta = difference_quotient(chi, 0.1)
        assert beta.base.size == 1
        velocities, weights = beta.fiber(0)
        assert velocities.ravel().tolist() == pytest.approx([-1.0, 1.0])
        assert weights.tolist() == pytest.approx([0.5, 0.5])

    def test_positive_tau(self):
        with pytest.raises(PathError):
            difference_quotient(straight([0.3], [0.7], [0.0, 1.0]), 0.0)


class TestMergeToCap:

    def bundle(self):
        return PathBundle([0.0, 1.0], [[0.1], [0.2], [0.6], [0.8]],
                          [[[0.2]], [[0.1]], [[0.1]], [[-0.1]]], [0.4, 0.1, 0.3, 0.2])

    def test_folds_light_paths(self):
        merged, error = self.bundle().merge_to_cap(2)
        assert merged.size == 2
        assert merged.weights.tolist() == pytest.approx([0.5, 0.5])
        assert error == pytest.approx(0.05)
        assert evaluate(merged, 1.0).is_close(evaluate(self.bundle(), 1.0))

    def test_under_cap_untouched(self):
        chi = self.bundle()
        merged, error = chi.merge_to_cap(10)
        assert merged is chi
        assert error == 0.0

    def test_distinct_endpoints_are_kept(self):
        chi = PathBundle([0.0, 1.0], [[0.1], [0.5]], np.zeros((2, 1, 1)), [0.5, 0.5])
        merged, error = chi.merge_to_cap(1)
        assert merged.size == 2
        assert error == 0.0


class TestParticleTrace:

    def test_write_and_read_back(self, rng, tmp_path):
        chi = random_bundle(rng, 2, [0.0, 0.1, 0.2, 0.4], speed=0.1)
        path = str(tmp_path / 'particles.csv')
        write_particle_trace(chi, path)
        again = read_particle_trace(path)
        assert np.array_equal(again.grid, chi.grid)
        assert np.allclose(again.weights, chi.weights, atol=0.0)
        assert np.allclose(again.displacements, chi.displacements, atol=1e-12)
        assert bundle_distance(again, chi) <= 1e-12

    def test_header_is_checked(self, tmp_path):
        path = tmp_path / 'bad.csv'
        path.write_text('id,w,t,x\n0,1.0,0.0,0.5\n')
        with pytest.raises(PathError):
            read_particle_trace(str(path))

    def test_empty(self, tmp_path):
        path = tmp_path / 'empty.csv'
        path.write_text('')
        with pytest.raises(PathError):
            read_particle_trace(str(path))
