"""States, dichotomies, metrics, and the JSON wire format."""

import numpy as np
import pytest

from dichotomies.states import (BinaryDistribution, DensityMatrix, Dichotomy,
                                Metric, ValidationError, classical_dichotomy,
                                classical_embed, clip_to_state,
                                dichotomy_from_json, dichotomy_to_json,
                                fidelity, matrix_from_json, matrix_to_json,
                                purified_distance, random_density,
                                state_from_json, state_to_json, tensor_power,
                                trace_distance)


class TestDensityMatrix:
    def test_accepts_valid(self):
        dm = DensityMatrix(np.diag([0.25, 0.75]))
        assert dm.dim == 2
        assert dm.is_diagonal()

    def test_rejects_bad_trace(self):
        with pytest.raises(ValidationError, match="trace"):
            DensityMatrix(np.diag([0.5, 0.6]))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(ValidationError, match="negative eigenvalue"):
            DensityMatrix(np.diag([1.5, -0.5]))

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError, match="Hermitian"):
            DensityMatrix(np.array([[0.5, 0.4], [0.1, 0.5]]))

    def test_matrix_is_frozen(self):
        dm = DensityMatrix(np.eye(2) / 2)
        with pytest.raises(ValueError):
            dm.mat[0, 0] = 1.0

    @pytest.mark.parametrize("seed", range(5))
    def test_random_density_is_valid_and_reproducible(self, seed):
        a = random_density(3, seed=seed)
        b = random_density(3, seed=seed)
        assert np.array_equal(a.mat, b.mat)
        assert abs(np.trace(a.mat).real - 1.0) < 1e-12

    def test_random_density_rank_control(self):
        pure = random_density(4, rank=1, seed=9)
        w = pure.eigenvalues()
        assert np.sum(w > 1e-12) == 1


class TestDichotomy:
    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError, match="differ"):
            Dichotomy(random_density(2, seed=0), random_density(3, seed=0))

    def test_swapped(self):
        d = Dichotomy(random_density(2, seed=1), random_density(2, seed=2))
        s = d.swapped()
        assert np.array_equal(s.rho.mat, d.sigma.mat)
        assert np.array_equal(s.sigma.mat, d.rho.mat)

    def test_classical_detection(self):
        assert classical_dichotomy([0.9, 0.1], [0.5, 0.5]).is_classical()
        d = Dichotomy(random_density(2, seed=3), random_density(2, seed=4))
        assert not d.is_classical()


class TestMetrics:
    def test_orthogonal_pure_states(self):
        a = DensityMatrix(np.diag([1.0, 0.0]))
        b = DensityMatrix(np.diag([0.0, 1.0]))
        assert abs(trace_distance(a, b) - 1.0) < 1e-12
        assert abs(fidelity(a, b)) < 1e-12
        assert abs(purified_distance(a, b) - 1.0) < 1e-12

    def test_identical_states(self):
        a = random_density(3, seed=5)
        assert trace_distance(a, a) < 1e-12
        assert abs(fidelity(a, a) - 1.0) < 1e-12
        assert purified_distance(a, a) < 1e-7

    @pytest.mark.parametrize("seed", range(8))
    def test_purified_dominates_trace(self, seed):
        a = random_density(3, seed=seed)
        b = random_density(3, seed=seed + 100)
        t = trace_distance(a, b)
        p = purified_distance(a, b)
        assert t <= p + 1e-10
        # Fuchs-van de Graaf lower bound
        assert 1.0 - np.sqrt(fidelity(a, b)) <= t + 1e-10

    @pytest.mark.parametrize("seed", range(4))
    def test_fidelity_symmetric(self, seed):
        a = random_density(4, seed=seed)
        b = random_density(4, seed=seed + 50)
        assert abs(fidelity(a, b) - fidelity(b, a)) < 1e-10

    def test_metric_enum_dispatch(self):
        a = random_density(2, seed=6)
        b = random_density(2, seed=7)
        assert Metric.TRACE.distance(a, b) == trace_distance(a, b)
        assert Metric.PURIFIED.distance(a, b) == purified_distance(a, b)


class TestTensorPower:
    def test_dimensions_and_values(self):
        d = classical_dichotomy([0.9, 0.1], [0.5, 0.5])
        d3 = tensor_power(d, 3)
        assert d3.dim == 8
        assert abs(d3.rho.mat[0, 0].real - 0.9 ** 3) < 1e-14

    def test_cap_enforced(self):
        dm = random_density(2, seed=8)
        with pytest.raises(ValidationError, match="cap"):
            tensor_power(dm, 4, cap=8)

    def test_bad_power(self):
        with pytest.raises(ValidationError, match="n >= 1"):
            tensor_power(random_density(2, seed=0), 0)


class TestClassicalEmbedding:
    def test_embed(self):
        dm = classical_embed([0.2, 0.3, 0.5])
        assert dm.is_diagonal()
        assert np.allclose(dm.diagonal(), [0.2, 0.3, 0.5])

    def test_rejects_negative(self):
        with pytest.raises(ValidationError, match="negative"):
            classical_embed([1.2, -0.2])

    def test_rejects_unnormalized(self):
        with pytest.raises(ValidationError, match="sum"):
            classical_embed([0.5, 0.6])

    @pytest.mark.parametrize("p", [-0.1, 1.1])
    def test_binary_distribution_range(self, p):
        with pytest.raises(ValidationError):
            BinaryDistribution(p)


class TestClipToState:
    def test_repairs_small_negative(self):
        m = np.diag([1.0, 1e-11 * -1])
        dm = clip_to_state(m, tol=1e-9)
        assert dm.eigenvalues()[0] >= 0.0

    def test_rejects_large_negative(self):
        with pytest.raises(ValidationError, match="not PSD"):
            clip_to_state(np.diag([1.0, -0.1]), tol=1e-9)


class TestJson:
    @pytest.mark.parametrize("seed", range(3))
    def test_state_roundtrip_exact(self, seed):
        dm = random_density(3, seed=seed)
        back = state_from_json(state_to_json(dm))
        assert np.array_equal(back.mat, dm.mat)

    def test_dichotomy_roundtrip(self):
        d = Dichotomy(random_density(2, seed=20), random_density(2, seed=21))
        back = dichotomy_from_json(dichotomy_to_json(d))
        assert np.array_equal(back.rho.mat, d.rho.mat)
        assert np.array_equal(back.sigma.mat, d.sigma.mat)

    def test_plain_numbers_accepted(self):
        m = matrix_from_json([[0.5, 0.0], [0.0, 0.5]])
        assert m.shape == (2, 2)

    def test_complex_entries(self):
        m = matrix_from_json([[[0.5, 0.0], [0.0, -0.5]], [[0.0, 0.5], [0.5, 0.0]]])
        assert m[0, 1] == -0.5j

    @pytest.mark.parametrize("bad", [
        "nope", [], [[1.0], [2.0, 3.0]], [["x"]], {"rho": [[1.0]]},
    ])
    def test_malformed_matrix_rejected(self, bad):
        with pytest.raises(ValidationError):
            if isinstance(bad, dict):
                dichotomy_from_json(bad)
            else:
                matrix_from_json(bad)

    def test_json_is_builtin_types(self):
        import json
        payload = dichotomy_to_json(
            Dichotomy(random_density(2, seed=1), random_density(2, seed=2)))
        json.dumps(payload)  # must not raise
