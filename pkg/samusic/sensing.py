"""
Geradores e diagnosticos de matrizes de medicao
"""

from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any

import numpy as np
import scipy.linalg as sla

from samusic.exceptions import InvalidInputError
from samusic.logger import get_logger
from samusic.validators import FrameValidator, ensure_count, ensure_matrix

logger = get_logger('sensing')


class Ensemble(str, Enum):
    """Ensembles de matrizes de medicao suportados"""
    GAUSSIAN = 'gaussian'
    FOURIER_BERNOULLI_ROWS = 'fourier_bernoulli_rows'
    FOURIER_UNIFORM_ROWS = 'fourier_uniform_rows'
    FOURIER_BUNCHED_ROWS = 'fourier_bunched_rows'

    @property
    def is_fourier(self) -> bool:
        return self is not Ensemble.GAUSSIAN


@dataclass(frozen=True)
class SensingSpec:
    """Especificacao de uma matriz de medicao m x n"""

    ensemble: Ensemble
    m: int
    n: int
    normalize_columns: bool = True
    seed: int = 0

    def __post_init__(self):
        try:
            object.__setattr__(self, 'ensemble', Ensemble(self.ensemble))
        except ValueError as e:
            raise InvalidInputError(f"Ensemble desconhecido: {self.ensemble}", {'ensemble': self.ensemble}) from e
        ensure_count(self.n, 'n', minimum=1)
        ensure_count(self.m, 'm', minimum=1)
        if self.m > self.n:
            raise InvalidInputError(f"m={self.m} > n={self.n}", {'m': self.m, 'n': self.n})

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data['ensemble'] = self.ensemble.value
        return data


def dft_matrix(n: int) -> np.ndarray:
    """DFT unitaria n x n: entrada (j, k) = exp(-2 pi i j k / n) / sqrt(n), 0-based"""
    return sla.dft(n, scale='sqrtn')


def select_rows(spec: SensingSpec, rng: np.random.Generator) -> np.ndarray:
    """
    Seleciona linhas (0-based) da DFT conforme o esquema do ensemble

    Args:
        spec: Especificacao com ensemble de Fourier
        rng: Gerador numpy

    Returns:
        Indices de linha
    """
    n, m = spec.n, spec.m
    if spec.ensemble is Ensemble.FOURIER_BERNOULLI_ROWS:
        # contagem aleatoria; uma selecao vazia e sorteada de novo
        while True:
            rows = np.flatnonzero(rng.random(n) < m / n)
            if rows.size:
                return rows
    if spec.ensemble is Ensemble.FOURIER_UNIFORM_ROWS:
        return np.sort(rng.choice(n, size=m, replace=False))
    if spec.ensemble is Ensemble.FOURIER_BUNCHED_ROWS:
        offset = int(rng.integers(n))
        return (offset + np.arange(m)) % n
    raise InvalidInputError(f"Ensemble sem selecao de linhas: {spec.ensemble.value}")


def normalize_columns(A: Any) -> np.ndarray:
    """Escala cada coluna para norma l2 unitaria"""
    A = ensure_matrix(A, 'A')
    norms = np.linalg.norm(A, axis=0)
    if np.any(norms == 0):
        raise InvalidInputError("Coluna nula nao pode ser normalizada", {'columns': np.flatnonzero(norms == 0).tolist()})
    return A / norms[None, :]


def generate(spec: SensingSpec, rng: np.random.Generator | None = None) -> np.ndarray:
    """
    Gera matriz de medicao

    Args:
        spec: Especificacao (ensemble, m, n, normalizacao, seed)
        rng: Gerador explicito; padrao default_rng(spec.seed) (PCG64)

    Returns:
        Matriz m x n (real para gaussian, complexa para Fourier)
    """
    rng = rng if rng is not None else np.random.default_rng(spec.seed)

    if spec.ensemble is Ensemble.GAUSSIAN:
        A = rng.standard_normal((spec.m, spec.n)) / np.sqrt(spec.n)
    else:
        rows = select_rows(spec, rng)
        A = dft_matrix(spec.n)[rows, :]

    if spec.normalize_columns:
        A = normalize_columns(A)

    logger.debug(f"Matriz gerada: {spec.ensemble.value} {A.shape[0]}x{A.shape[1]}")
    return A


def coherence(A: Any) -> float:
    """
    Coerencia mutua max |<a_k, a_l>| / (||a_k|| ||a_l||), k != l

    Args:
        A: Matriz sem colunas nulas

    Returns:
        Valor em [0, 1]
    """
    An = normalize_columns(A)
    if An.shape[1] < 2:
        return 0.0
    G = np.abs(An.conj().T @ An)
    np.fill_diagonal(G, 0.0)
    return float(min(G.max(), 1.0))


def welch_bound(m: int, n: int) -> float:
    """Limite inferior de Welch sqrt((n - m) / (m (n - 1)))"""
    if n < 2:
        raise InvalidInputError(f"Welch bound requer n >= 2, recebido {n}", {'n': n})
    if not 1 <= m <= n:
        raise InvalidInputError(f"m={m} fora de [1, {n}]", {'m': m, 'n': n})
    return float(np.sqrt((n - m) / (m * (n - 1))))


def is_unit_norm_tight_frame(A: Any, tol: float = 1e-10) -> tuple[bool, dict[str, Any]]:
    """
    Verifica colunas unitarias, linhas ortogonais e ||A|| = sqrt(n/m)

    Args:
        A: Matriz m x n
        tol: Tolerancia de cada regra

    Returns:
        (todas passaram, relatorio consolidado)
    """
    report = FrameValidator(tol).validate_all(A)
    return report['all_passed'], report
