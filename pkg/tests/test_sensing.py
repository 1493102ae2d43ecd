"""
Testes para geradores de matrizes de medicao
"""

from itertools import combinations

import numpy as np
import pytest
from scipy import stats

from samusic.exceptions import InvalidInputError
from samusic.sensing import (
    Ensemble,
    SensingSpec,
    coherence,
    dft_matrix,
    generate,
    is_unit_norm_tight_frame,
    normalize_columns,
    select_rows,
    welch_bound,
)


class TestSensingSpec:
    """Testes para especificacao de matriz"""

    def test_unknown_ensemble(self):
        with pytest.raises(InvalidInputError):
            SensingSpec('bernoulli', 4, 8)

    def test_m_greater_than_n(self):
        """Testa m > n"""
        with pytest.raises(InvalidInputError):
            SensingSpec(Ensemble.GAUSSIAN, 9, 8)

    def test_to_dict(self):
        spec = SensingSpec('gaussian', 4, 8, seed=3)

        assert spec.to_dict() == {'ensemble': 'gaussian', 'm': 4, 'n': 8, 'normalize_columns': True, 'seed': 3}


class TestGenerate:
    """Testes para geracao de matrizes"""

    def test_dft_unitary(self):
        """Testa DFT unitaria"""
        F = dft_matrix(8)

        np.testing.assert_allclose(F @ F.conj().T, np.eye(8), atol=1e-12)
        assert F[1, 1] == pytest.approx(np.exp(-2j * np.pi / 8) / np.sqrt(8))

    def test_gaussian_normalized(self):
        """Testa colunas unitarias apos normalizacao"""
        A = generate(SensingSpec(Ensemble.GAUSSIAN, 10, 30, seed=1))

        assert A.shape == (10, 30)
        assert not np.iscomplexobj(A)
        np.testing.assert_allclose(np.linalg.norm(A, axis=0), 1.0)

    def test_gaussian_raw_variance(self):
        """Testa entradas N(0, 1/n) sem normalizacao"""
        A = generate(SensingSpec(Ensemble.GAUSSIAN, 200, 400, normalize_columns=False, seed=2))

        assert np.var(A) == pytest.approx(1 / 400, rel=0.05)

    def test_same_seed_same_matrix(self):
        """Testa determinismo por semente"""
        spec = SensingSpec(Ensemble.FOURIER_UNIFORM_ROWS, 12, 64, seed=11)

        assert np.array_equal(generate(spec), generate(spec))

    def test_uniform_rows_distinct(self):
        """Testa selecao uniforme sem repeticao"""
        rows = select_rows(SensingSpec(Ensemble.FOURIER_UNIFORM_ROWS, 20, 64), np.random.default_rng(0))

        assert rows.size == 20
        assert np.all(np.diff(rows) > 0)

    def test_uniform_rows_chi_square(self):
        """Testa uniformidade dos pares de linhas (m=2, n=8) por qui-quadrado"""
        spec = SensingSpec(Ensemble.FOURIER_UNIFORM_ROWS, 2, 8)
        rng = np.random.default_rng(2024)
        pairs = list(combinations(range(8), 2))
        counts = dict.fromkeys(pairs, 0)

        for _ in range(10_000):
            counts[tuple(int(i) for i in select_rows(spec, rng))] += 1

        result = stats.chisquare(list(counts.values()))
        assert result.pvalue > 1e-3

    def test_bunched_rows_consecutive(self):
        """Testa linhas consecutivas modulo n"""
        rows = select_rows(SensingSpec(Ensemble.FOURIER_BUNCHED_ROWS, 6, 16), np.random.default_rng(4))

        assert np.all((np.diff(rows) % 16) == 1)

    def test_bernoulli_rows_nonempty(self):
        """Testa numero aleatorio de linhas, nunca vazio"""
        spec = SensingSpec(Ensemble.FOURIER_BERNOULLI_ROWS, 1, 64)
        rng = np.random.default_rng(5)

        sizes = [select_rows(spec, rng).size for _ in range(50)]

        assert min(sizes) >= 1

    def test_partial_fourier_is_untf(self):
        """Testa que Fourier parcial normalizada e UNTF"""
        A = generate(SensingSpec(Ensemble.FOURIER_UNIFORM_ROWS, 16, 64, seed=0))

        ok, report = is_unit_norm_tight_frame(A)

        assert ok is True
        assert report['passed'] == 3

    def test_normalize_rejects_zero_column(self):
        with pytest.raises(InvalidInputError):
            normalize_columns(np.array([[1.0, 0.0], [0.0, 0.0]]))


class TestCoherence:
    """Testes para coerencia e Welch bound"""

    def test_coherence_above_welch(self):
        """Testa coerencia >= limite de Welch"""
        A = generate(SensingSpec(Ensemble.GAUSSIAN, 8, 20, seed=3))

        assert coherence(A) >= welch_bound(8, 20) - 1e-12

    def test_orthonormal_coherence_zero(self):
        assert coherence(np.eye(4)) == pytest.approx(0.0)
        assert welch_bound(4, 4) == 0.0

    def test_welch_invalid(self):
        with pytest.raises(InvalidInputError):
            welch_bound(2, 1)
