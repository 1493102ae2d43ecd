"""
Testes para primitivas de algebra linear
"""

import numpy as np
import pytest

from samusic.exceptions import DegenerateInputError, InvalidInputError
from samusic.linalg import (
    OrthonormalBasis,
    SupportSet,
    angle_between,
    augment_subspace,
    cross_projector_norm,
    dominant_subspace,
    hermitian_eig_desc,
    max_column_norm,
    numerical_rank,
    orthonormal_basis,
    project,
    pseudo_inverse,
    random_orthonormal,
    residual_project,
    rotate_towards,
    singular_values,
    spectral_norm,
    subspace_distance,
)


class TestSupportSet:
    """Testes para conjuntos de suporte 1-based"""

    def test_parse_and_str(self):
        """Testa leitura do formato '1,5,9'"""
        J = SupportSet.parse('9, 1,5', 10)

        assert J.indices == (1, 5, 9)
        assert str(J) == '1,5,9'
        assert len(J) == 3
        assert 5 in J

    def test_from_indices_rejects_duplicates(self):
        """Testa rejeicao de indices repetidos"""
        with pytest.raises(InvalidInputError):
            SupportSet.from_indices([2, 2, 3], 5)

    def test_out_of_range(self):
        """Testa indices fora do universo"""
        with pytest.raises(InvalidInputError):
            SupportSet((0, 2), 5)
        with pytest.raises(InvalidInputError):
            SupportSet((2, 6), 5)

    def test_not_increasing(self):
        """Testa exigencia de ordem estritamente crescente"""
        with pytest.raises(InvalidInputError):
            SupportSet((3, 1), 5)

    def test_set_operations(self):
        """Testa uniao, diferenca e complemento"""
        a = SupportSet((1, 3), 5)
        b = SupportSet((3, 4), 5)

        assert a.union(b).indices == (1, 3, 4)
        assert a.difference(b).indices == (1,)
        assert a.complement().indices == (2, 4, 5)

    def test_zero_based_round_trip(self):
        """Testa conversao para indices 0-based"""
        J = SupportSet.from_zero_based([4, 0], 6)

        assert J.indices == (1, 5)
        assert J.zero_based().tolist() == [0, 4]

    def test_universe_mismatch(self):
        """Testa operacao entre universos distintos"""
        with pytest.raises(InvalidInputError):
            SupportSet((1,), 5).union(SupportSet((1,), 6))

    def test_empty_parse(self):
        assert len(SupportSet.parse('', 4)) == 0


class TestOrthonormalBasis:
    """Testes para bases ortonormais"""

    def test_rejects_non_orthonormal(self):
        """Testa rejeicao de colunas nao ortonormais"""
        with pytest.raises(InvalidInputError):
            OrthonormalBasis(np.array([[1.0, 1.0], [0.0, 1.0]]))

    def test_rejects_too_many_columns(self):
        with pytest.raises(InvalidInputError):
            OrthonormalBasis(np.eye(2, 3))

    def test_projector_idempotent(self):
        """Testa P^2 = P e P hermitiano"""
        rng = np.random.default_rng(1)
        S = OrthonormalBasis(random_orthonormal(8, 3, rng, complex_field=True))
        P = S.projector()

        np.testing.assert_allclose(P @ P, P, atol=1e-12)
        np.testing.assert_allclose(P, P.conj().T, atol=1e-12)
        assert S.dim == 3
        assert S.ambient_dim == 8

    def test_columns_read_only(self):
        S = OrthonormalBasis(np.eye(3)[:, :2])

        with pytest.raises(ValueError):
            S.columns[0, 0] = 5.0


class TestSubspaceOperations:
    """Testes para operacoes sobre subespacos"""

    @pytest.fixture
    def rng(self):
        return np.random.default_rng(7)

    def test_orthonormal_basis_detects_rank(self, rng):
        """Testa deteccao de posto do espaco coluna"""
        B = rng.standard_normal((10, 3))
        M = np.column_stack([B, B @ rng.standard_normal((3, 2))])

        S = orthonormal_basis(M)

        assert S.dim == 3
        assert numerical_rank(M) == 3

    def test_orthonormal_basis_zero_matrix(self):
        """Testa matriz nula com base vazia"""
        assert orthonormal_basis(np.zeros((4, 2))).dim == 0

    def test_project_and_residual(self, rng):
        """Testa decomposicao v = P_S v + P_S^perp v"""
        S = OrthonormalBasis(random_orthonormal(6, 2, rng))
        v = rng.standard_normal(6)

        p = project(S, v)
        q = residual_project(S, v)

        np.testing.assert_allclose(p + q, v, atol=1e-12)
        assert abs(np.dot(p, q)) < 1e-12

    def test_distance_same_subspace_is_zero(self, rng):
        """Testa distancia zero entre bases do mesmo subespaco"""
        Q = random_orthonormal(7, 3, rng)
        mix = random_orthonormal(3, 3, rng)

        assert subspace_distance(OrthonormalBasis(Q), OrthonormalBasis(Q @ mix)) < 1e-12

    def test_distance_different_dims(self):
        """Testa distancia 1 para dimensoes diferentes"""
        S1 = OrthonormalBasis(np.eye(4)[:, :1])
        S2 = OrthonormalBasis(np.eye(4)[:, :2])

        assert subspace_distance(S1, S2) == 1.0

    def test_angle_nested_subspaces(self):
        """Testa angulo zero entre subespacos aninhados"""
        S1 = OrthonormalBasis(np.eye(4)[:, :1])
        S2 = OrthonormalBasis(np.eye(4)[:, :2])

        assert angle_between(S1, S2) == pytest.approx(0.0, abs=1e-12)
        assert angle_between(S2, S1) == pytest.approx(0.0, abs=1e-12)
        assert cross_projector_norm(S1, S2) == pytest.approx(1.0)

    def test_angle_orthogonal(self):
        """Testa angulo pi/2 entre subespacos ortogonais"""
        S1 = OrthonormalBasis(np.eye(4)[:, :1])
        S2 = OrthonormalBasis(np.eye(4)[:, 1:2])

        assert angle_between(S1, S2) == pytest.approx(np.pi / 2)

    def test_angle_requires_nonempty(self):
        with pytest.raises(InvalidInputError):
            angle_between(OrthonormalBasis.empty(3), OrthonormalBasis(np.eye(3)[:, :1]))

    def test_augment_drops_dependent_columns(self, rng):
        """Testa que colunas ja no span nao aumentam a dimensao"""
        Q = random_orthonormal(8, 2, rng)
        S = OrthonormalBasis(Q)
        extra = np.column_stack([Q @ np.array([1.0, -2.0]), rng.standard_normal(8)])

        T = augment_subspace(S, extra)

        assert T.dim == 3
        np.testing.assert_allclose(T.columns.T @ T.columns, np.eye(3), atol=1e-12)
        assert cross_projector_norm(T, S) < 1e-12

    def test_rotate_towards_exact_distance(self, rng):
        """Testa subespaco girado a distancia exatamente eta"""
        S = OrthonormalBasis(random_orthonormal(12, 3, rng, complex_field=True))

        for eta in (0.0, 0.2, 0.75):
            T = rotate_towards(S, eta, rng)
            np.testing.assert_allclose(T.columns.conj().T @ T.columns, np.eye(3), atol=1e-12)
            assert subspace_distance(S, T) == pytest.approx(eta, abs=1e-10)

    def test_rotate_requires_room(self, rng):
        S = OrthonormalBasis(random_orthonormal(5, 3, rng))

        with pytest.raises(InvalidInputError):
            rotate_towards(S, 0.1, rng)


class TestKernels:
    """Testes para kernels densos"""

    def test_hermitian_eig_desc_sorted(self):
        """Testa ordem decrescente dos autovalores"""
        G = np.diag([1.0, 3.0, 2.0])
        w, V = hermitian_eig_desc(G)

        np.testing.assert_allclose(w, [3.0, 2.0, 1.0])
        np.testing.assert_allclose(np.abs(V.columns[:, 0]), [0.0, 1.0, 0.0], atol=1e-12)

    def test_hermitian_rejects_non_hermitian(self):
        with pytest.raises(InvalidInputError):
            hermitian_eig_desc(np.array([[1.0, 2.0], [0.0, 1.0]]))

    def test_dominant_subspace_zero_matrix(self):
        """Testa matriz nula como entrada degenerada"""
        with pytest.raises(DegenerateInputError):
            dominant_subspace(np.zeros((3, 3)), 1)

    def test_dominant_subspace_spans_columns(self):
        rng = np.random.default_rng(3)
        B = rng.standard_normal((6, 2))
        S = dominant_subspace(B @ rng.standard_normal((2, 5)), 2)

        assert cross_projector_norm(S, orthonormal_basis(B)) < 1e-10

    def test_norms_and_pinv(self):
        A = np.array([[3.0, 0.0], [4.0, 1.0]])

        assert max_column_norm(A) == pytest.approx(5.0)
        assert spectral_norm(np.zeros((2, 0))) == 0.0
        np.testing.assert_allclose(pseudo_inverse(A) @ A, np.eye(2), atol=1e-12)

    def test_random_orthonormal_rejects_wide(self):
        with pytest.raises(InvalidInputError):
            random_orthonormal(2, 3, np.random.default_rng(0))

    def test_random_orthonormal_is_qr_with_positive_diagonal(self):
        """Testa Q^H G triangular superior com diagonal real positiva"""
        Q = random_orthonormal(6, 4, np.random.default_rng(21), complex_field=True)
        rng = np.random.default_rng(21)
        G = (rng.standard_normal((6, 4)) + 1j * rng.standard_normal((6, 4))) / np.sqrt(2)

        R = Q.conj().T @ G

        np.testing.assert_allclose(np.tril(R, -1), 0.0, atol=1e-12)
        np.testing.assert_allclose(np.diag(R).imag, 0.0, atol=1e-12)
        assert np.all(np.diag(R).real > 0)
        np.testing.assert_allclose(Q @ R, G, atol=1e-12)


class TestMetricProperties:
    """Propriedades de metrica da distancia entre subespacos"""

    def test_symmetry_and_triangle_inequality(self):
        """Testa simetria exata e desigualdade triangular em triplas aleatorias"""
        rng = np.random.default_rng(31)

        for _ in range(200):
            m = int(rng.integers(4, 12))
            r = int(rng.integers(1, m))
            complex_field = bool(rng.integers(2))
            S1, S2, S3 = (OrthonormalBasis(random_orthonormal(m, r, rng, complex_field)) for _ in range(3))

            assert subspace_distance(S1, S2) == subspace_distance(S2, S1)
            assert subspace_distance(S1, S3) <= subspace_distance(S1, S2) + subspace_distance(S2, S3) + 1e-9

    def test_triangle_inequality_near_coincident(self):
        """Testa triplas proximas obtidas por rotacoes pequenas"""
        rng = np.random.default_rng(32)
        S1 = OrthonormalBasis(random_orthonormal(12, 3, rng))

        for _ in range(50):
            S2 = rotate_towards(S1, float(rng.uniform(0, 0.2)), rng)
            S3 = rotate_towards(S2, float(rng.uniform(0, 0.2)), rng)
            assert subspace_distance(S1, S3) <= subspace_distance(S1, S2) + subspace_distance(S2, S3) + 1e-9


class TestDominantSubspaceOptimality:
    """Otimalidade de Eckart-Young do subespaco dominante"""

    def test_residual_matches_tail_singular_values(self):
        """Testa ||M - P M||_F^2 = soma dos sigma_k^2 com k > r"""
        rng = np.random.default_rng(41)
        M = rng.standard_normal((9, 6)) + 1j * rng.standard_normal((9, 6))
        sigma = singular_values(M)

        for r in range(1, 6):
            S = dominant_subspace(M, r)
            residual = residual_project(S, M)
            assert np.linalg.norm(residual) ** 2 == pytest.approx(np.sum(sigma[r:] ** 2), rel=1e-10)
            assert spectral_norm(residual) == pytest.approx(sigma[r], rel=1e-10)

    def test_no_random_projector_does_better(self):
        """Testa que nenhum projetor aleatorio de posto r reduz o residuo"""
        rng = np.random.default_rng(42)
        M = rng.standard_normal((10, 7))
        r = 3
        best = np.linalg.norm(residual_project(dominant_subspace(M, r), M))

        for _ in range(300):
            Q = OrthonormalBasis(random_orthonormal(10, r, rng))
            assert np.linalg.norm(residual_project(Q, M)) >= best - 1e-12


class TestSingularValueInequalities:
    """Desigualdades de valores singulares usadas nas garantias"""

    def test_concatenation_interlacing(self):
        """Testa sigma_k(A) >= sigma_k(A1) >= sigma_{k+n2}(A) para A = [A1, A2]"""
        rng = np.random.default_rng(51)

        for _ in range(200):
            m = 12
            n1 = int(rng.integers(1, 7))
            n2 = int(rng.integers(1, 6))
            A1 = rng.standard_normal((m, n1))
            A = np.column_stack([A1, rng.standard_normal((m, n2))])
            sA, sA1 = singular_values(A), singular_values(A1)

            for k in range(n1):
                assert sA[k] >= sA1[k] - 1e-9
                assert sA1[k] >= sA[k + n2] - 1e-9

    def test_schur_complement_interlacing(self):
        """Testa sigma_k(A_{J0 u J}) >= sigma_k(P^perp_{R(A_J)} A_{J0 \\ J}) >= sigma_{k+|J|}(A_{J0 u J})"""
        rng = np.random.default_rng(52)

        for _ in range(200):
            m = 14
            j = int(rng.integers(1, 5))
            k = int(rng.integers(1, 6))
            A_J = rng.standard_normal((m, j)) + 1j * rng.standard_normal((m, j))
            A_rest = rng.standard_normal((m, k)) + 1j * rng.standard_normal((m, k))
            full = singular_values(np.column_stack([A_J, A_rest]))
            reduced = singular_values(residual_project(orthonormal_basis(A_J), A_rest))

            for i in range(k):
                assert full[i] >= reduced[i] - 1e-9
                assert reduced[i] >= full[i + j] - 1e-9

    def test_product_lower_bound(self):
        """Testa ||A B|| >= sigma_{n-k+1}(A) sigma_k(B)"""
        rng = np.random.default_rng(53)

        for _ in range(200):
            n = int(rng.integers(2, 7))
            m = n + int(rng.integers(0, 4))
            p = int(rng.integers(1, 7))
            A = rng.standard_normal((m, n))
            B = rng.standard_normal((n, p))
            sA, sB = singular_values(A), singular_values(B)
            product = spectral_norm(A @ B)

            for k in range(1, min(n, p) + 1):
                assert product >= sA[n - k] * sB[k - 1] - 1e-9


class TestAugmentationPerturbation:
    """Estabilidade do subespaco aumentado sob perturbacao de S_hat"""

    def test_projected_distance_bounded_by_conditioning(self):
        """
        Testa ||P_{P^perp S_hat} - P_{P^perp S_bar}|| <= eta s1 / (s_s - eta s1)

        S_bar e um subespaco r-dimensional de R(A_J0), S_hat fica a distancia
        eta de S_bar e P^perp projeta no complemento de R(A_J) com J contido em J0.
        """
        rng = np.random.default_rng(61)
        checked = 0

        for _ in range(500):
            m, s = 20, 5
            r = int(rng.integers(1, s))
            A_J0 = rng.standard_normal((m, s))
            sigma = singular_values(A_J0)
            eta = float(rng.uniform(0.0, 0.1))
            if sigma[-1] / sigma[0] <= eta:
                continue

            S_bar = orthonormal_basis(A_J0 @ rng.standard_normal((s, r)))
            S_hat = rotate_towards(S_bar, eta, rng)
            perp_J = orthonormal_basis(A_J0[:, :s - r])
            projected_hat = orthonormal_basis(residual_project(perp_J, S_hat.columns))
            projected_bar = orthonormal_basis(residual_project(perp_J, S_bar.columns))

            bound = eta * sigma[0] / (sigma[-1] - eta * sigma[0])
            assert subspace_distance(projected_hat, projected_bar) <= bound + 1e-9
            checked += 1

        assert checked >= 400
