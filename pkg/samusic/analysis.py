"""
Constantes de isometria restrita exatas, posto de Kruskal e limite rho(s, r)
"""

from dataclasses import dataclass
from itertools import combinations
from math import comb, log
from typing import Any

import numpy as np
from scipy.optimize import minimize_scalar

from samusic.exceptions import InvalidInputError, UnsupportedSizeError
from samusic.linalg import SupportSet, singular_values
from samusic.logger import get_logger
from samusic.validators import ensure_count, ensure_matrix

logger = get_logger('analysis')

WEAK1_MAX_COLUMNS = 2048
ENUMERATION_MAX_COLUMNS = 16
RANK_RTOL = 1e-10
Q_GRID = (1e-6, 1e2)
Q_GRID_POINTS = 2001


@dataclass(frozen=True)
class Weak1Ric:
    """RICs weak-1 simetrica (delta) e assimetricas (alpha, beta) de A em J"""

    delta: float
    alpha: float
    beta: float
    J: SupportSet
    argmax_j: int

    def to_dict(self) -> dict[str, Any]:
        return {
            'delta': self.delta,
            'alpha': self.alpha,
            'beta': self.beta,
            'J': list(self.J.indices),
            'argmax_j': self.argmax_j,
        }


def weak1_ric(A: Any, J: SupportSet) -> Weak1Ric:
    """
    Enumeracao exata sobre j fora de J dos espectros de A_{J u {j}}^H A_{J u {j}}

    Os Grams (s+1) x (s+1) sao montados em lote a partir de A_J^H A_J,
    A_J^H a_j e ||a_j||^2 e diagonalizados com eigvalsh.

    Args:
        A: Matriz m x n (n <= 2048)
        J: Suporte com |J| < n

    Returns:
        Weak1Ric com delta, alpha, beta e o j (1-based) que atinge delta
    """
    A = ensure_matrix(A, 'A')
    m, n = A.shape
    if n > WEAK1_MAX_COLUMNS:
        raise UnsupportedSizeError(f"weak1_ric limitado a n <= {WEAK1_MAX_COLUMNS}", {'n': n})
    if J.universe != n:
        raise InvalidInputError(f"Universo de J ({J.universe}) difere de n ({n})", {'universe': J.universe, 'n': n})
    outside = J.complement().zero_based()
    if outside.size == 0:
        raise InvalidInputError("J cobre todas as colunas", {'J': list(J.indices)})

    AJ = A[:, J.zero_based()]
    s = AJ.shape[1]
    cross = AJ.conj().T @ A[:, outside]
    diag = np.sum(np.abs(A[:, outside]) ** 2, axis=0)

    grams = np.zeros((outside.size, s + 1, s + 1), dtype=np.result_type(A.dtype, float))
    grams[:, :s, :s] = AJ.conj().T @ AJ
    grams[:, :s, s] = cross.T
    grams[:, s, :s] = cross.conj().T
    grams[:, s, s] = diag
    eig = np.linalg.eigvalsh(grams)
    lam_min, lam_max = eig[:, 0], eig[:, -1]

    deviation = np.maximum(np.abs(lam_max - 1.0), np.abs(lam_min - 1.0))
    worst = int(np.argmax(deviation))
    return Weak1Ric(
        delta=float(deviation[worst]),
        alpha=float(np.sqrt(max(lam_min.min(), 0.0))),
        beta=float(np.sqrt(max(lam_max.max(), 0.0))),
        J=J,
        argmax_j=int(outside[worst]) + 1,
    )


def uniform_ric(A: Any, k: int) -> float:
    """
    RIC uniforme de ordem k por enumeracao de todos os k-subconjuntos

    Args:
        A: Matriz m x n com n <= 16
        k: Ordem

    Returns:
        max ||A_K^H A_K - I_k|| sobre |K| = k
    """
    A = ensure_matrix(A, 'A')
    n = A.shape[1]
    if n > ENUMERATION_MAX_COLUMNS:
        raise UnsupportedSizeError(f"uniform_ric limitado a n <= {ENUMERATION_MAX_COLUMNS}", {'n': n})
    ensure_count(k, 'k', minimum=1, maximum=n)
    worst = 0.0
    for K in combinations(range(n), k):
        AK = A[:, list(K)]
        eig = np.linalg.eigvalsh(AK.conj().T @ AK)
        worst = max(worst, abs(eig[-1] - 1.0), abs(eig[0] - 1.0))
    return float(worst)


def kruskal_rank(A: Any) -> int:
    """
    Maior k tal que quaisquer k colunas sao linearmente independentes

    Args:
        A: Matriz m x n com n <= 16

    Returns:
        Posto de Kruskal (limiar 1e-10 * sigma_1(A))
    """
    A = ensure_matrix(A, 'A')
    m, n = A.shape
    if n > ENUMERATION_MAX_COLUMNS:
        raise UnsupportedSizeError(f"kruskal_rank limitado a n <= {ENUMERATION_MAX_COLUMNS}", {'n': n})
    sigma1 = singular_values(A)[0]
    if sigma1 == 0:
        return 0
    threshold = RANK_RTOL * sigma1
    krank = 0
    for k in range(1, min(m, n) + 1):
        for K in combinations(range(n), k):
            if singular_values(A[:, list(K)])[-1] <= threshold:
                return krank
        krank = k
    return krank


def _check_s_r(s: int, r: int):
    if not (s / 2 < r < s):
        raise InvalidInputError(f"Requer s/2 < r < s, recebido s={s}, r={r}", {'s': s, 'r': r})


def rho_hat(s: int, r: int, q: float) -> float:
    """
    [(C(s,r)^{-q/2r} - (s/r - 1)) / (2 - s/r)]^{1/q}, avaliado via log1p/expm1

    Args:
        s: Esparsidade
        r: Dimensao (s/2 < r < s)
        q: Expoente > 0

    Returns:
        Valor do limite para q; 0 quando a base e nao positiva
    """
    _check_s_r(s, r)
    if q <= 0:
        raise InvalidInputError(f"q={q} deve ser positivo", {'q': q})
    L = log(comb(s, r)) / (2 * r)
    one_minus_a = 2 - s / r
    # base = 1 + expm1(-qL) / (1 - a)
    t = np.expm1(-q * L) / one_minus_a
    if t <= -1.0:
        return 0.0
    return float(np.exp(np.log1p(t) / q))


def rho_lower_bound(s: int, r: int) -> float:
    """
    sup_{q > 0} rho_hat(s, r, q)

    Grade logaritmica em [1e-6, 1e2] seguida de refinamento por secao
    aurea quando o maximo cai no interior da grade.

    Args:
        s: Esparsidade
        r: Dimensao (s/2 < r < s)

    Returns:
        Limite inferior do (s-r)-esimo maior norma de linha
    """
    _check_s_r(s, r)
    grid = np.logspace(np.log10(Q_GRID[0]), np.log10(Q_GRID[1]), Q_GRID_POINTS)
    values = np.array([rho_hat(s, r, q) for q in grid])
    best = int(np.argmax(values))
    value = float(values[best])
    if value <= 0.0:
        return 0.0
    if 0 < best < grid.size - 1:
        lo, hi = np.log(grid[best - 1]), np.log(grid[best + 1])
        res = minimize_scalar(
            lambda u: -rho_hat(s, r, float(np.exp(u))),
            bounds=(lo, hi), method='bounded', options={'xatol': 1e-10}
        )
        value = max(value, float(-res.fun))
    logger.debug(f"rho_lower_bound(s={s}, r={r}) = {value:.12g}")
    return value


def row_norm_order_statistic(Phi: Any, k: int) -> float:
    """rho_k(Phi): k-esima maior norma l2 de linha"""
    Phi = ensure_matrix(Phi, 'Phi')
    ensure_count(k, 'k', minimum=1, maximum=Phi.shape[0])
    norms = np.sort(np.linalg.norm(Phi, axis=1))[::-1]
    return float(norms[k - 1])
