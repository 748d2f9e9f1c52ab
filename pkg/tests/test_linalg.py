"""Hermitian eigentools underpinning everything else."""

import numpy as np
import pytest

from dichotomies import linalg


def random_hermitian(dim, seed):
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (g + g.conj().T) / 2


class TestAsHermitian:
    def test_symmetrizes_small_noise(self):
        a = np.array([[1.0, 0.5], [0.5 + 1e-13, 2.0]])
        h = linalg.as_hermitian(a)
        assert np.allclose(h, h.conj().T)

    def test_rejects_large_asymmetry(self):
        with pytest.raises(ValueError, match="not Hermitian"):
            linalg.as_hermitian(np.array([[1.0, 0.5], [0.9, 2.0]]))

    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            linalg.as_hermitian(np.ones((2, 3)))


class TestEigh:
    @pytest.mark.parametrize("dim,seed", [(2, 0), (3, 1), (5, 2), (8, 3)])
    def test_reconstruction(self, dim, seed):
        a = random_hermitian(dim, seed)
        w, v = linalg.eigh(a)
        assert np.all(np.diff(w) >= -1e-12)
        assert np.allclose((v * w) @ v.conj().T, a, atol=1e-12)
        assert np.allclose(v.conj().T @ v, np.eye(dim), atol=1e-12)


class TestMatrixFunction:
    def test_exponential_of_diagonal(self):
        a = np.diag([0.0, 1.0, -2.0])
        out = linalg.matrix_function(a, np.exp)
        assert np.allclose(np.diag(out), np.exp([0.0, 1.0, -2.0]))

    @pytest.mark.parametrize("seed", range(4))
    def test_log_exp_roundtrip(self, seed):
        a = random_hermitian(4, seed)
        back = linalg.matrix_function(linalg.matrix_function(a, np.exp), np.log)
        assert np.allclose(back, a, atol=1e-10)

    def test_support_only_log_on_singular(self):
        a = np.diag([0.5, 0.5, 0.0])
        out = linalg.matrix_function(a, np.log, support_only=True)
        assert np.allclose(np.diag(out), [np.log(0.5), np.log(0.5), 0.0])

    def test_undefined_value_raises(self):
        with pytest.raises(ValueError, match="undefined"):
            linalg.matrix_function(np.diag([1.0, -1.0]), np.log)


class TestSupportProjector:
    @pytest.mark.parametrize("rank", [1, 2, 3])
    def test_rank_and_idempotence(self, rank):
        rng = np.random.default_rng(rank)
        g = rng.normal(size=(4, rank))
        a = g @ g.T
        p = linalg.support_projector(a)
        assert np.allclose(p @ p, p, atol=1e-10)
        assert abs(np.trace(p).real - rank) < 1e-9
        assert np.allclose(p @ a, a, atol=1e-9)

    def test_rejects_indefinite(self):
        with pytest.raises(ValueError, match="PSD"):
            linalg.support_projector(np.diag([1.0, -0.5]))


@pytest.mark.parametrize("seed", range(5))
def test_positive_part_consistency(seed):
    a = random_hermitian(5, seed)
    plus = linalg.positive_part(a)
    w = np.linalg.eigvalsh(plus)
    assert w[0] >= -1e-12
    assert abs(np.trace(plus).real - linalg.positive_part_trace(a)) < 1e-10
    # a = positive part minus positive part of -a
    assert np.allclose(a, plus - linalg.positive_part(-a), atol=1e-10)
