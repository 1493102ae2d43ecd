"""
Primitivas de algebra linear densa para subespacos

Matrizes sao numpy.ndarray 2D (reais ou complexas). Bases ortonormais e
conjuntos de suporte sao valores imutaveis; todas as funcoes sao puras.
Operacoes sobre subespacos consomem bases apenas via projetores ou normas,
nunca via coordenadas com sinal ou fase.
"""

from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator

import numpy as np
import scipy.linalg as sla

from samusic.error_handler import handle_numeric_errors
from samusic.exceptions import DegenerateInputError, InvalidInputError
from samusic.validators import ensure_hermitian, ensure_matrix, ensure_same_ambient

ORTHONORMAL_TOL = 1e-10
AUGMENT_DROP_TOL = 1e-10
RANK_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class OrthonormalBasis:
    """Matriz m x r com colunas ortonormais representando um subespaco"""

    columns: np.ndarray
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        cols = np.asarray(self.columns)
        if cols.ndim != 2:
            raise InvalidInputError("Base deve ser 2D", {'shape': cols.shape})
        if cols.shape[1] > cols.shape[0]:
            raise InvalidInputError(
                f"dim {cols.shape[1]} maior que dimensao ambiente {cols.shape[0]}", {'shape': cols.shape}
            )
        if self.check and cols.shape[1]:
            gram_err = np.max(np.abs(cols.conj().T @ cols - np.eye(cols.shape[1])))
            if gram_err > ORTHONORMAL_TOL * max(1, cols.shape[0]):
                raise InvalidInputError("Colunas nao ortonormais", {'gram_error': float(gram_err)})
        cols = cols.copy()
        cols.setflags(write=False)
        object.__setattr__(self, 'columns', cols)

    @classmethod
    def empty(cls, ambient_dim: int, dtype: Any = float) -> 'OrthonormalBasis':
        """Subespaco nulo (dim 0) usado internamente"""
        return cls(np.zeros((ambient_dim, 0), dtype=dtype), check=False)

    @property
    def ambient_dim(self) -> int:
        return int(self.columns.shape[0])

    @property
    def dim(self) -> int:
        return int(self.columns.shape[1])

    def projector(self) -> np.ndarray:
        """Projetor ortogonal P = Q Q^H"""
        return self.columns @ self.columns.conj().T


@dataclass(frozen=True)
class SupportSet:
    """Indices de colunas 1-based, estritamente crescentes, sobre [1, universe]"""

    indices: tuple[int, ...]
    universe: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, 'universe', int(self.universe))
        if self.universe < 1:
            raise InvalidInputError(f"universe invalido: {self.universe}", {'universe': self.universe})
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise InvalidInputError("Indices devem ser estritamente crescentes", {'indices': idx})
        if idx and (idx[0] < 1 or idx[-1] > self.universe):
            raise InvalidInputError(
                f"Indices fora de [1, {self.universe}]", {'indices': idx, 'universe': self.universe}
            )
        object.__setattr__(self, 'indices', idx)

    @classmethod
    def from_indices(cls, indices: Iterable[int], universe: int) -> 'SupportSet':
        """
        Cria suporte a partir de indices 1-based em qualquer ordem

        Args:
            indices: Indices 1-based
            universe: Numero de colunas n

        Returns:
            SupportSet canonico (ordenado)
        """
        idx = [int(i) for i in indices]
        if len(set(idx)) != len(idx):
            raise InvalidInputError("Indices duplicados no suporte", {'indices': idx})
        return cls(tuple(sorted(idx)), int(universe))

    @classmethod
    def from_zero_based(cls, indices: Iterable[int], universe: int) -> 'SupportSet':
        return cls.from_indices((int(i) + 1 for i in indices), universe)

    @classmethod
    def parse(cls, text: str, universe: int) -> 'SupportSet':
        """Le suporte no formato '1,5,9'"""
        text = text.strip()
        if not text:
            return cls((), universe)
        try:
            values = [int(tok) for tok in text.split(',') if tok.strip()]
        except ValueError as e:
            raise InvalidInputError(f"Suporte invalido: {text!r}", {'text': text}) from e
        return cls.from_indices(values, universe)

    def zero_based(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=int) - 1

    def union(self, other: 'SupportSet') -> 'SupportSet':
        ensure_same_ambient(self.universe, other.universe, ('universe', 'other.universe'))
        return SupportSet(tuple(sorted(set(self.indices) | set(other.indices))), self.universe)

    def difference(self, other: 'SupportSet') -> 'SupportSet':
        ensure_same_ambient(self.universe, other.universe, ('universe', 'other.universe'))
        return SupportSet(tuple(sorted(set(self.indices) - set(other.indices))), self.universe)

    def complement(self) -> 'SupportSet':
        taken = set(self.indices)
        return SupportSet(tuple(i for i in range(1, self.universe + 1) if i not in taken), self.universe)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __contains__(self, item: object) -> bool:
        return item in self.indices

    def __str__(self) -> str:
        return ','.join(str(i) for i in self.indices)


@handle_numeric_errors('hermitian_eig_desc')
def hermitian_eig_desc(G: Any) -> tuple[np.ndarray, OrthonormalBasis]:
    """
    EVD de matriz hermitiana com autovalores em ordem decrescente

    Args:
        G: Matriz hermitiana (tolerancia relativa 1e-10)

    Returns:
        (autovalores decrescentes, autovetores correspondentes)
    """
    H = ensure_hermitian(G, 'G')
    w, V = sla.eigh(H)
    return w[::-1].copy(), OrthonormalBasis(V[:, ::-1], check=False)


@handle_numeric_errors('dominant_subspace')
def dominant_subspace(M: Any, r: int) -> OrthonormalBasis:
    """
    r vetores singulares esquerdos dominantes de M

    Args:
        M: Matriz m x k
        r: Dimensao desejada, 1 <= r <= min(m, k)

    Returns:
        Base ortonormal m x r
    """
    M = ensure_matrix(M, 'M')
    if not 1 <= r <= min(M.shape):
        raise InvalidInputError(f"r={r} fora de [1, {min(M.shape)}]", {'r': r, 'shape': M.shape})
    if not np.any(M):
        raise DegenerateInputError("Matriz nula nao possui subespaco dominante", {'shape': M.shape})
    U, _, _ = sla.svd(M, full_matrices=False)
    return OrthonormalBasis(U[:, :r], check=False)


@handle_numeric_errors('orthonormal_basis')
def orthonormal_basis(M: Any, rtol: float = RANK_RTOL) -> OrthonormalBasis:
    """Base do espaco coluna de M com deteccao de posto (limiar rtol * sigma_1)"""
    M = np.asarray(M)
    if M.ndim == 1:
        M = M[:, None]
    if M.shape[1] == 0 or not np.any(M):
        return OrthonormalBasis.empty(M.shape[0], M.dtype if np.iscomplexobj(M) else float)
    U, s, _ = sla.svd(M, full_matrices=False)
    rank = int(np.sum(s > rtol * s[0]))
    return OrthonormalBasis(U[:, :rank], check=False)


def singular_values(M: Any) -> np.ndarray:
    """Valores singulares em ordem decrescente"""
    return sla.svdvals(ensure_matrix(M, 'M'))


def spectral_norm(M: Any) -> float:
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(sla.svdvals(M)[0])


def numerical_rank(M: Any, rtol: float = RANK_RTOL) -> int:
    """Posto numerico com limiar relativo rtol * sigma_1"""
    s = singular_values(M)
    if s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def column_norms(M: Any) -> np.ndarray:
    return np.linalg.norm(np.asarray(M), axis=0)


def max_column_norm(M: Any) -> float:
    """||A^H||_{2,inf}: maior norma l2 de coluna"""
    return float(np.max(column_norms(M)))


def _as_block(S: OrthonormalBasis, v: Any) -> tuple[np.ndarray, bool]:
    arr = np.asarray(v)
    is_vector = arr.ndim == 1
    block = arr[:, None] if is_vector else arr
    if block.ndim != 2:
        raise InvalidInputError("Entrada deve ser vetor ou matriz", {'shape': arr.shape})
    ensure_same_ambient(S.ambient_dim, block.shape[0], ('S', 'v'))
    return block, is_vector


def project(S: OrthonormalBasis, v: Any) -> np.ndarray:
    """
    Projecao ortogonal P_S v (v vetor ou matriz de colunas)

    Args:
        S: Base ortonormal
        v: Vetor de dimensao m ou matriz m x k

    Returns:
        P_S v com o mesmo formato de v
    """
    block, is_vector = _as_block(S, v)
    Q = S.columns
    out = Q @ (Q.conj().T @ block) if S.dim else np.zeros_like(block)
    return out[:, 0] if is_vector else out


def residual_project(S: OrthonormalBasis, v: Any) -> np.ndarray:
    """Residuo P_S^perp v = v - P_S v"""
    block, is_vector = _as_block(S, v)
    out = block - project(S, block)
    return out[:, 0] if is_vector else out


def cross_projector_norm(S1: OrthonormalBasis, S2: OrthonormalBasis) -> float:
    """||P_{S1}^perp P_{S2}||, calculado como ||P_{S1}^perp Q_2||"""
    ensure_same_ambient(S1.ambient_dim, S2.ambient_dim, ('S1', 'S2'))
    if S2.dim == 0:
        return 0.0
    value = spectral_norm(residual_project(S1, S2.columns))
    return float(min(value, 1.0))


def angle_between(S1: OrthonormalBasis, S2: OrthonormalBasis) -> float:
    """
    Angulo entre subespacos (radianos)

    asin do menor dos dois normas cruzadas ||P_{S1}^perp P_{S2}|| e
    ||P_{S2}^perp P_{S1}||; com dim(S1) >= dim(S2) coincide com a primeira.

    Args:
        S1: Base ortonormal nao vazia
        S2: Base ortonormal nao vazia

    Returns:
        Angulo em [0, pi/2]
    """
    ensure_same_ambient(S1.ambient_dim, S2.ambient_dim, ('S1', 'S2'))
    if S1.dim == 0 or S2.dim == 0:
        raise InvalidInputError("angle_between requer subespacos nao vazios", {'dims': (S1.dim, S2.dim)})
    c = min(cross_projector_norm(S1, S2), cross_projector_norm(S2, S1))
    return float(np.arcsin(np.clip(c, 0.0, 1.0)))


def subspace_distance(S1: OrthonormalBasis, S2: OrthonormalBasis) -> float:
    """
    Distancia ||P_{S1} - P_{S2}|| em [0, 1]

    Args:
        S1: Base ortonormal
        S2: Base ortonormal

    Returns:
        max(||P_{S1}^perp P_{S2}||, ||P_{S2}^perp P_{S1}||); 1 quando as dimensoes diferem
    """
    ensure_same_ambient(S1.ambient_dim, S2.ambient_dim, ('S1', 'S2'))
    if S1.dim != S2.dim:
        return 1.0
    return max(cross_projector_norm(S1, S2), cross_projector_norm(S2, S1))


def augment_subspace(S_hat: OrthonormalBasis, A_J1: Any) -> OrthonormalBasis:
    """
    Base ortonormal de S_hat + R(A_J1)

    Gram-Schmidt classico com reortogonalizacao; uma coluna cujo residuo
    tem norma <= 1e-10 * ||a|| nao contribui.

    Args:
        S_hat: Base do subespaco estimado
        A_J1: Colunas m x k (ou vetor) a acrescentar

    Returns:
        Base ortonormal da soma
    """
    block = np.asarray(A_J1)
    if block.ndim == 1:
        block = block[:, None]
    ensure_same_ambient(S_hat.ambient_dim, block.shape[0], ('S_hat', 'A_J1'))
    dtype = np.result_type(S_hat.columns.dtype, block.dtype, float)
    Q = S_hat.columns.astype(dtype)
    new_cols = []
    for j in range(block.shape[1]):
        a = block[:, j].astype(dtype)
        norm_a = np.linalg.norm(a)
        if norm_a == 0:
            continue
        v = a.copy()
        for _ in range(2):
            if Q.shape[1]:
                v = v - Q @ (Q.conj().T @ v)
        norm_v = np.linalg.norm(v)
        if norm_v <= AUGMENT_DROP_TOL * norm_a:
            continue
        q = v / norm_v
        new_cols.append(q)
        Q = np.column_stack([Q, q])
    if not new_cols:
        return S_hat
    return OrthonormalBasis(Q, check=False)


@handle_numeric_errors('pseudo_inverse')
def pseudo_inverse(M: Any) -> np.ndarray:
    """Pseudo-inversa de Moore-Penrose"""
    return sla.pinv(ensure_matrix(M, 'M'))


def random_orthonormal(rows: int, cols: int, rng: np.random.Generator, complex_field: bool = False) -> np.ndarray:
    """
    Colunas ortonormais Haar-distribuidas via QR de bloco gaussiano

    Args:
        rows: Numero de linhas
        cols: Numero de colunas (<= rows)
        rng: Gerador numpy
        complex_field: Gera entradas complexas

    Returns:
        Matriz rows x cols com colunas ortonormais
    """
    if cols > rows:
        raise InvalidInputError(f"cols={cols} > rows={rows}", {'rows': rows, 'cols': cols})
    G = rng.standard_normal((rows, cols))
    if complex_field:
        G = (G + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)
    Q, R = np.linalg.qr(G)
    d = np.diag(R)
    phase = np.where(d == 0, 1, d / np.abs(np.where(d == 0, 1, d)))
    return Q * phase[None, :]


def rotate_towards(S: OrthonormalBasis, eta: float, rng: np.random.Generator) -> OrthonormalBasis:
    """
    Subespaco a distancia exatamente eta de S

    Cada vetor da base gira para uma direcao ortonormal aleatoria em S^perp:
    Q' = sqrt(1 - eta^2) Q + eta W, com W^H Q = 0. Requer m >= 2 dim(S).

    Args:
        S: Base ortonormal
        eta: Distancia alvo em [0, 1]
        rng: Gerador numpy

    Returns:
        Base perturbada
    """
    if not 0.0 <= eta <= 1.0:
        raise InvalidInputError(f"eta={eta} fora de [0, 1]", {'eta': eta})
    r = S.dim
    if 2 * r > S.ambient_dim:
        raise InvalidInputError("Rotacao requer m >= 2r", {'m': S.ambient_dim, 'r': r})
    complex_field = np.iscomplexobj(S.columns)
    Z = random_orthonormal(S.ambient_dim, S.ambient_dim, rng, complex_field)
    W = residual_project(S, Z)
    W = orthonormal_basis(W).columns[:, :r]
    cols = np.sqrt(1.0 - eta ** 2) * S.columns + eta * W
    return OrthonormalBasis(cols, check=False)
