import json

import numpy as np
import pytest

from conftest import symmetric_pair_lift
from mfviability.dynamics import build_system, feasibility_residual
from mfviability.errors import DimensionMismatchError, OracleError
from mfviability.lifted import LiftedMeasure, rescale, zero_lift
from mfviability.measures import AtomicMeasure, wasserstein1_value
from mfviability.viability import (INCONCLUSIVE, NOT_TANGENT, TANGENT, DiracPairFamilyOracle,
                                   FiniteSetOracle, ParametricCurveOracle, TangencyReport,
                                   TranslationCurveOracle, judge, tangency_estimate, tau_ladder,
                                   viability_condition_check)

HALF = AtomicMeasure.dirac([0.5])


def one_sided_lift():
    return LiftedMeasure(HALF, [([[1.0]], [1.0])])


class TestOracles:

    def test_finite_set_projection(self):
        oracle = FiniteSetOracle([AtomicMeasure.dirac([0.1]), HALF])
        value, witness = oracle.distance(AtomicMeasure.dirac([0.4]))
        assert value == pytest.approx(0.1)
        assert witness is HALF
        assert oracle.contains(HALF)
        assert not oracle.contains(AtomicMeasure.dirac([0.3]))

    def test_finite_set_dimension(self):
        with pytest.raises(DimensionMismatchError):
            FiniteSetOracle([HALF]).distance(AtomicMeasure.dirac([0.1, 0.2]))
        with pytest.raises(OracleError):
            FiniteSetOracle([])

    def test_curve_wraps(self):
        oracle = ParametricCurveOracle(lambda t: AtomicMeasure.dirac([t]), 0.0, 0.5, 1.0,
                                       resolution=1e-3, dim=1)
        value, witness = oracle.distance(AtomicMeasure.dirac([0.8]))
        assert value == pytest.approx(0.2, abs=1e-9)
        assert witness.is_close(AtomicMeasure.dirac([0.0]), tol=1e-9)

    def test_curve_needs_resolution(self):
        with pytest.raises(OracleError):
            ParametricCurveOracle(lambda t: HALF, 0.0, 1.0, 1.0, resolution=0.0, dim=1)

    def test_translation_curve(self):
        oracle = TranslationCurveOracle(AtomicMeasure([[0.1], [0.3]], [0.5, 0.5]), [1.0],
                                        0.0, 0.5, resolution=1e-3)
        assert oracle.speed == 1.0
        moved = AtomicMeasure([[0.35], [0.55]], [0.5, 0.5])
        value, witness = oracle.distance(moved)
        assert value <= 1e-12
        assert witness.is_close(moved, tol=1e-9)
        assert oracle.to_dict()['curve'] == 'translation'
        with pytest.raises(OracleError):
            TranslationCurveOracle(HALF, [1.0, 0.0], 0.0, 0.5, resolution=1e-3)

    def test_pair_family_members(self, dirac_pair_oracle):
        assert dirac_pair_oracle.pair(0.0).is_close(HALF)
        assert dirac_pair_oracle.contains(dirac_pair_oracle.pair(0.1234))
        assert dirac_pair_oracle.speed == 1.0

    def test_pair_family_against_dense_search(self, rng):
        oracle = DiracPairFamilyOracle([0.5], 0.25, resolution=1e-3)
        ts = np.linspace(0.0, 0.25, 5001)
        for _ in range(10):
            m = AtomicMeasure(rng.random((2, 1)), rng.dirichlet(np.ones(2)))
            brute = min(wasserstein1_value(m, oracle.pair(t)) for t in ts)
            value, witness = oracle.distance(m)
            assert brute - 5e-5 <= value <= brute + oracle.resolution
            assert wasserstein1_value(m, witness) == pytest.approx(value, abs=1e-12)

    def test_pair_family_off_grid_member(self, dirac_pair_oracle):
        for t in (0.00625, 0.0123456, 0.1 + 1e-7):
            value, witness = dirac_pair_oracle.distance(dirac_pair_oracle.pair(t))
            assert value <= 1e-14
            assert witness.is_close(dirac_pair_oracle.pair(t), tol=1e-12)

    def test_pair_family_direction(self):
        oracle = DiracPairFamilyOracle([0.5, 0.5], 0.25, resolution=1e-3, direction=[0.0, 1.0])
        pair = AtomicMeasure([[0.5, 0.4], [0.5, 0.6]], [0.5, 0.5])
        assert oracle.distance(pair)[0] == pytest.approx(0.0, abs=1e-9)
        with pytest.raises(OracleError):
            DiracPairFamilyOracle([0.5], 0.25, resolution=1e-3, direction=[0.0, 1.0])


class TestTangency:

    def test_ladder(self):
        assert tau_ladder(0.1, 3) == pytest.approx([0.1, 0.05, 0.025])
        with pytest.raises(ValueError):
            tau_ladder(0.1, 2)
        with pytest.raises(ValueError):
            tau_ladder(0.0, 4)

    def test_judge(self):
        assert judge([0.5, 1e-5, 1e-5], 1e-3) == TANGENT
        assert judge([1e-6, 1e-5, 1e-4], 1e-3) == NOT_TANGENT
        assert judge([1.0, 1.0, 1.0], 1e-3) == NOT_TANGENT

    def test_judge_allows_oracle_noise(self):
        ratios = [0.0, 0.0, 0.0, 0.0, 1.43e-9, 1.35e-8]
        taus = tau_ladder(0.1, 6)
        assert judge(ratios, 1e-3, slack=1e-8, taus=taus, accuracy=1e-10) == TANGENT
        assert judge(ratios, 1e-3, slack=1e-8, taus=taus) == NOT_TANGENT
        # noise never excuses a ratio that keeps growing
        growing = [0.0, 0.0, 0.0, 0.0, 1e-4, 5e-4]
        assert judge(growing, 1e-3, slack=1e-8, taus=taus, accuracy=1e-10) == NOT_TANGENT

    def test_symmetric_pair_is_tangent(self, dirac_pair_oracle):
        report = tangency_estimate(symmetric_pair_lift(), dirac_pair_oracle, 0.1, levels=6)
        assert report.verdict == TANGENT
        assert max(report.ratios) < 1e-6

    def test_one_sided_is_not_tangent(self, dirac_pair_oracle):
        report = tangency_estimate(one_sided_lift(), dirac_pair_oracle, 0.1, levels=6)
        assert report.verdict == NOT_TANGENT
        assert report.ratios[-1] > 0.4

    def test_zero_lift_of_member(self):
        report = tangency_estimate(zero_lift(HALF), FiniteSetOracle([HALF]), 0.1, levels=4)
        assert report.is_tangent
        assert report.ratios == [0.0] * 4

    def test_coarse_oracle_is_inconclusive(self, benchmark_oracle):
        report = tangency_estimate(symmetric_pair_lift(), benchmark_oracle, 0.1, levels=6)
        assert report.verdict == INCONCLUSIVE
        assert "resolution" in report.diagnostic

    def test_dimension_checked(self, dirac_pair_oracle):
        beta = LiftedMeasure(AtomicMeasure.dirac([0.5, 0.5]), [([[1.0, 0.0]], [1.0])])
        with pytest.raises(DimensionMismatchError):
            tangency_estimate(beta, dirac_pair_oracle, 0.1)

    @pytest.mark.parametrize("a", [0.5, 2.0])
    def test_ratios_scale_with_the_lift(self, dirac_pair_oracle, a):
        for beta in (symmetric_pair_lift(), one_sided_lift()):
            base = tangency_estimate(beta, dirac_pair_oracle, 0.1, levels=4)
            scaled = tangency_estimate(rescale(beta, a), dirac_pair_oracle, 0.1 / a, levels=4)
            assert scaled.ratios == pytest.approx([a * r for r in base.ratios], rel=1e-12)
            assert scaled.verdict == base.verdict

    def test_deterministic(self, dirac_pair_oracle):
        first = tangency_estimate(one_sided_lift(), dirac_pair_oracle, 0.1)
        second = tangency_estimate(one_sided_lift(), dirac_pair_oracle, 0.1)
        assert first.ratios == second.ratios

    def test_report_json(self, dirac_pair_oracle):
        report = tangency_estimate(symmetric_pair_lift(), dirac_pair_oracle, 0.1)
        data = json.loads(report.to_json())
        assert sorted(data) == ['ratios', 'taus', 'threshold', 'verdict']
        again = TangencyReport.from_dict(data)
        assert again.ratios == report.ratios
        assert again.verdict == report.verdict


class TestConditionCheck:

    def test_symmetric_pair_witness(self, dirac_pair_oracle, flip_system):
        result = viability_condition_check(HALF, dirac_pair_oracle, flip_system, 0.04, levels=4)
        assert result.found
        velocities, weights = result.witness.fiber(0)
        assert velocities.ravel().tolist() == [-1.0, 1.0]
        assert weights.tolist() == pytest.approx([0.5, 0.5], abs=1e-6)
        assert feasibility_residual(result.witness, flip_system) <= 1e-9

    def test_escape(self):
        sys = build_system('constant-controls', 1, {'controls': [[1.0]]})
        result = viability_condition_check(HALF, FiniteSetOracle([HALF]), sys, 0.04, levels=4)
        assert not result.found
        assert 0.9 <= result.score <= 1.1

    def test_rest_is_found(self):
        sys = build_system('constant-controls', 1, {'controls': [[-1.0], [0.0], [1.0]]})
        result = viability_condition_check(HALF, FiniteSetOracle([HALF]), sys, 0.04, levels=4)
        assert result.found
        velocities, weights = result.witness.fiber(0)
        assert velocities.ravel().tolist() == [0.0]
        assert weights.tolist() == [1.0]

    def test_two_atoms_at_rest(self):
        m = AtomicMeasure([[0.2], [0.7]], [0.5, 0.5])
        sys = build_system('constant-controls', 1, {'controls': [[-1.0], [0.0], [1.0]]})
        result = viability_condition_check(m, FiniteSetOracle([m]), sys, 0.04, levels=4)
        assert result.found
        assert result.score < 1e-6
        assert result.witness.first_moment() == pytest.approx(0.0, abs=1e-9)

    def test_single_velocity_between_vertices(self):
        sys = build_system('constant-controls', 1, {'controls': [[-1.0], [2.0]]})
        result = viability_condition_check(HALF, FiniteSetOracle([HALF]), sys, 0.04, levels=4)
        assert result.found
        velocities, weights = result.witness.fiber(0)
        assert velocities.shape == (1, 1)
        assert abs(velocities[0, 0]) < 1e-6
        assert weights.tolist() == [1.0]
        assert feasibility_residual(result.witness, sys) <= 1e-9

    def test_hints_pick_the_start(self, dirac_pair_oracle, flip_system):
        m = dirac_pair_oracle.pair(0.05)
        result = viability_condition_check(m, dirac_pair_oracle, flip_system, 0.04,
                                           hints=[[-0.9], [0.8]])
        assert result.found
        assert result.witness.fiber(0)[0].ravel().tolist() == [-1.0]
        assert result.witness.fiber(1)[0].ravel().tolist() == [1.0]

    def test_hint_count_checked(self, dirac_pair_oracle, flip_system):
        with pytest.raises(ValueError):
            viability_condition_check(HALF, dirac_pair_oracle, flip_system, 0.04,
                                      hints=[None, None])

    def test_seeded(self, dirac_pair_oracle):
        sys = build_system('constant-controls', 1, {'controls': [[-1.0], [0.3], [1.0]]})
        m = dirac_pair_oracle.pair(0.1)
        first = viability_condition_check(m, dirac_pair_oracle, sys, 0.04, seed=7)
        second = viability_condition_check(m, dirac_pair_oracle, sys, 0.04, seed=7)
        assert first.score == second.score
        assert first.witness.is_close(second.witness, tol=0.0)
