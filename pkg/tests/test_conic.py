"""The dense SDP layer: analytic optima, certificates, and edge handling."""

import numpy as np
import pytest

from dichotomies import conic
from dichotomies.states import ValidationError


def solve_min_eigenvalue(a):
    """min tr(A X) s.t. tr X = 1, X PSD — equals the smallest eigenvalue."""
    n = a.shape[0]
    prob = conic.SdpProblem(
        block_dims=[n],
        objective=[a],
        constraints=[([np.eye(n)], 1.0)],
    )
    return conic.solve(prob)


class TestAnalyticOptima:
    @pytest.mark.parametrize("seed", range(5))
    def test_min_eigenvalue_real(self, seed):
        rng = np.random.default_rng(seed)
        g = rng.normal(size=(4, 4))
        a = (g + g.T) / 2
        sol = solve_min_eigenvalue(a)
        assert sol.status is conic.SdpStatus.OPTIMAL
        assert abs(sol.primal_value - np.linalg.eigvalsh(a)[0]) < 1e-7

    @pytest.mark.parametrize("seed", range(5))
    def test_min_eigenvalue_complex(self, seed):
        rng = np.random.default_rng(seed + 100)
        g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        a = (g + g.conj().T) / 2
        sol = solve_min_eigenvalue(a)
        assert sol.status is conic.SdpStatus.OPTIMAL
        assert abs(sol.primal_value - np.linalg.eigvalsh(a)[0]) < 1e-7

    def test_two_blocks_decouple(self):
        a = np.diag([2.0, 3.0])
        b = np.diag([-1.0, 5.0])
        prob = conic.SdpProblem(
            block_dims=[2, 2],
            objective=[a, b],
            constraints=[
                ([np.eye(2), np.zeros((2, 2))], 1.0),
                ([np.zeros((2, 2)), np.eye(2)], 1.0),
            ],
        )
        sol = conic.solve(prob)
        assert sol.status is conic.SdpStatus.OPTIMAL
        assert abs(sol.primal_value - (2.0 - 1.0)) < 1e-7


class TestCertificates:
    @pytest.mark.parametrize("seed", range(3))
    def test_gap_and_residual_small(self, seed):
        rng = np.random.default_rng(seed + 7)
        g = rng.normal(size=(3, 3))
        sol = solve_min_eigenvalue((g + g.T) / 2)
        assert sol.gap < 1e-7
        assert sol.residual < 1e-8
        assert sol.min_eigenvalue > -1e-8
        assert abs(sol.primal_value - sol.dual_value) < 1e-6

    def test_primal_block_satisfies_constraints(self):
        sol = solve_min_eigenvalue(np.diag([1.0, 2.0, 3.0]))
        x = sol.primal_blocks[0]
        assert abs(np.trace(x).real - 1.0) < 1e-8
        assert np.linalg.eigvalsh(x)[0] > -1e-9


class TestDegenerateProblems:
    def test_infeasible(self):
        # tr X = 1 and tr X = 2 cannot both hold
        prob = conic.SdpProblem(
            block_dims=[2],
            objective=[np.eye(2)],
            constraints=[([np.eye(2)], 1.0), ([np.eye(2)], 2.0)],
        )
        sol = conic.solve(prob)
        assert sol.status is conic.SdpStatus.INFEASIBLE

    def test_unbounded(self):
        # maximize tr X with only a one-dimensional pin leaves directions free
        prob = conic.SdpProblem(
            block_dims=[2],
            objective=[-np.eye(2)],
            constraints=[([np.diag([1.0, 0.0])], 1.0)],
        )
        sol = conic.solve(prob)
        assert sol.status is conic.SdpStatus.UNBOUNDED

    def test_redundant_rows_are_dropped(self):
        a = np.diag([1.0, 4.0])
        prob = conic.SdpProblem(
            block_dims=[2],
            objective=[a],
            constraints=[([np.eye(2)], 1.0), ([np.eye(2)], 1.0)],
        )
        sol = conic.solve(prob)
        assert sol.status is conic.SdpStatus.OPTIMAL
        assert abs(sol.primal_value - 1.0) < 1e-7
        assert len(sol.dual_vector) == 2

    def test_dim_cap(self):
        n = conic.DIM_CAP + 1
        prob = conic.SdpProblem(
            block_dims=[n], objective=[np.eye(n)],
            constraints=[([np.eye(n)], 1.0)])
        with pytest.raises(ValidationError, match="cap"):
            conic.solve(prob)

    def test_shape_mismatch(self):
        prob = conic.SdpProblem(
            block_dims=[2], objective=[np.eye(3)],
            constraints=[([np.eye(2)], 1.0)])
        with pytest.raises(ValidationError, match="shape"):
            conic.solve(prob)

    def test_wrong_matrix_count(self):
        prob = conic.SdpProblem(
            block_dims=[2, 2], objective=[np.eye(2)],
            constraints=[([np.eye(2), np.eye(2)], 1.0)])
        with pytest.raises(ValidationError, match="per block"):
            conic.solve(prob)
