"""
Algoritmos de recuperacao de suporte conjunto

MUSIC, SA-MUSIC com metodos de suporte parcial plugaveis, SS-OMP, SS-OMSP,
RA-ORMP, p-SOMP (M-OMP para p = 2) e SA-MUSIC com esparsidade desconhecida.
Empates sao sempre resolvidos pelo menor indice; escores sao comparados
apos arredondamento em 12 casas para que empates numericos sejam empates.
"""

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from math import comb
from typing import Any

import numpy as np

from samusic.exceptions import (
    BudgetExceededError,
    InvalidInputError,
    NoConvergenceError,
    SpanExhaustedError,
)
from samusic.linalg import (
    AUGMENT_DROP_TOL,
    OrthonormalBasis,
    SupportSet,
    augment_subspace,
    cross_projector_norm,
    orthonormal_basis,
)
from samusic.logger import get_logger
from samusic.subspace import SubspaceEstimate, estimate_signal_subspace
from samusic.validators import ensure_count, ensure_matrix, ensure_same_ambient

logger = get_logger('recovery')

EXHAUSTIVE_BUDGET = 10 ** 6
SCORE_DECIMALS = 12
STOP_ATOL = 1e-9


class PartialSupportKind(str, Enum):
    SS_OMP = 'ss_omp'
    SS_OMSP = 'ss_omsp'
    ORACLE = 'oracle'
    EXHAUSTIVE = 'exhaustive'


@dataclass(frozen=True)
class PartialSupportMethod:
    """Metodo para obter o suporte parcial J1 de tamanho s - r"""

    kind: PartialSupportKind
    J1: SupportSet | None = None

    def __post_init__(self):
        object.__setattr__(self, 'kind', PartialSupportKind(self.kind))
        if self.kind is PartialSupportKind.ORACLE and self.J1 is None:
            raise InvalidInputError("Metodo oracle requer J1")

    @property
    def name(self) -> str:
        return self.kind.value


@dataclass(eq=False)
class RecoveryReport:
    """Suporte recuperado e diagnosticos do algoritmo"""

    J: SupportSet
    r_used: int
    method: str
    scores: np.ndarray
    partial_support: SupportSet
    metadata: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            'J': list(self.J.indices),
            'r_used': self.r_used,
            'method': self.method,
            'partial_support': list(self.partial_support.indices),
            'scores': [float(z) for z in self.scores],
            'metadata': self.metadata,
        }


def _normalized(A: Any) -> np.ndarray:
    A = ensure_matrix(A, 'A')
    norms = np.linalg.norm(A, axis=0)
    if np.any(norms == 0):
        raise InvalidInputError(
            "A possui coluna nula", {'columns': (np.flatnonzero(norms == 0) + 1).tolist()}
        )
    return A / norms[None, :]


def _rank_desc(scores: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Candidatos (0-based) ordenados por escore decrescente, menor indice nos empates"""
    keys = np.round(scores[candidates], SCORE_DECIMALS)
    order = np.lexsort((candidates, -keys))
    return candidates[order]


class _ResidualState:
    """Base incremental de R(A_J) e residuos P^perp a_l para selecao gulosa"""

    def __init__(self, An: np.ndarray):
        self.An = An
        self.R = An.copy()
        self.Q = np.zeros((An.shape[0], 0), dtype=An.dtype)
        self.selected: list[int] = []

    def add(self, j: int):
        v = self.R[:, j].copy()
        if self.Q.shape[1]:
            v = v - self.Q @ (self.Q.conj().T @ v)
        norm_v = np.linalg.norm(v)
        if norm_v > AUGMENT_DROP_TOL:
            q = v / norm_v
            self.R = self.R - np.outer(q, q.conj() @ self.R)
            self.Q = np.column_stack([self.Q, q])
        self.selected.append(int(j))

    def residual(self, M: np.ndarray) -> np.ndarray:
        if not self.Q.shape[1]:
            return M
        return M - self.Q @ (self.Q.conj().T @ M)

    def candidates(self) -> np.ndarray:
        taken = set(self.selected)
        return np.array([j for j in range(self.An.shape[1]) if j not in taken], dtype=int)

    def residual_norms(self) -> np.ndarray:
        return np.linalg.norm(self.R, axis=0)


def music_scores(S: OrthonormalBasis, A: Any) -> np.ndarray:
    """zeta_l = ||P_S a_l|| / ||a_l|| para cada coluna"""
    An = _normalized(A)
    ensure_same_ambient(S.ambient_dim, An.shape[0], ('S', 'A'))
    if S.dim == 0:
        return np.zeros(An.shape[1])
    return np.minimum(np.linalg.norm(S.columns.conj().T @ An, axis=0), 1.0)


def music(S: OrthonormalBasis, A: Any, s: int) -> RecoveryReport:
    """
    MUSIC com subespaco estimado: indices dos s maiores zeta

    Args:
        S: Base do subespaco de sinal estimado
        A: Matriz m x n sem colunas nulas
        s: Tamanho do suporte

    Returns:
        RecoveryReport com escores de todas as colunas
    """
    A = ensure_matrix(A, 'A')
    n = A.shape[1]
    ensure_count(s, 's', minimum=0, maximum=n)
    scores = music_scores(S, A)
    chosen = _rank_desc(scores, np.arange(n))[:s]
    J = SupportSet.from_zero_based(chosen, n)
    logger.log_recovery('music', len(J))
    return RecoveryReport(J=J, r_used=S.dim, method='music', scores=scores, partial_support=SupportSet((), n))


def _greedy_ss_omp(S: OrthonormalBasis, state: _ResidualState, k: int):
    Qs = S.columns
    for _ in range(k):
        candidates = state.candidates()
        if candidates.size == 0:
            raise SpanExhaustedError("Sem candidatos restantes", {'selected': len(state.selected)})
        scores = np.linalg.norm(Qs.conj().T @ state.R, axis=0) if S.dim else np.zeros(state.R.shape[1])
        state.add(int(_rank_desc(scores, candidates)[0]))


def _greedy_projected_subspace(target: np.ndarray, state: _ResidualState, k: int, label: str):
    """Regra ||P_{R(P^perp T)} a|| / ||P^perp a|| com exclusao de colunas ja no span"""
    for _ in range(k):
        norms = state.residual_norms()
        candidates = np.array(
            [j for j in state.candidates() if norms[j] > AUGMENT_DROP_TOL], dtype=int
        )
        if candidates.size == 0:
            raise SpanExhaustedError(
                f"{label}: todos os candidatos estao em R(A_J)",
                {'selected': [j + 1 for j in state.selected]}
            )
        B = orthonormal_basis(state.residual(target)).columns
        scores = np.zeros(state.R.shape[1])
        if B.shape[1]:
            scores[candidates] = (
                np.linalg.norm(B.conj().T @ state.R[:, candidates], axis=0) / norms[candidates]
            )
        state.add(int(_rank_desc(scores, candidates)[0]))


def ss_omp(S: OrthonormalBasis, A: Any, k: int) -> SupportSet:
    """
    SS-OMP: k passos de argmax ||P_S P^perp_{R(A_J)} a_l||

    Args:
        S: Base do subespaco de sinal estimado
        A: Matriz m x n (colunas normalizadas internamente)
        k: Numero de selecoes

    Returns:
        Suporte com k indices
    """
    An = _normalized(A)
    ensure_same_ambient(S.ambient_dim, An.shape[0], ('S', 'A'))
    ensure_count(k, 'k', minimum=0, maximum=An.shape[1])
    state = _ResidualState(An)
    _greedy_ss_omp(S, state, k)
    return SupportSet.from_zero_based(state.selected, An.shape[1])


def ss_omsp(S: OrthonormalBasis, A: Any, k: int) -> SupportSet:
    """
    SS-OMSP: k passos de argmax ||P_{P^perp S} a_l|| / ||P^perp a_l||

    O subespaco P^perp_{R(A_J)} S e reortonormalizado a cada passo; colunas
    com ||P^perp a_l|| <= 1e-10 ||a_l|| nunca sao selecionadas.

    Args:
        S: Base do subespaco de sinal estimado
        A: Matriz m x n
        k: Numero de selecoes

    Returns:
        Suporte com k indices
    """
    An = _normalized(A)
    ensure_same_ambient(S.ambient_dim, An.shape[0], ('S', 'A'))
    ensure_count(k, 'k', minimum=0, maximum=An.shape[1])
    state = _ResidualState(An)
    _greedy_projected_subspace(S.columns, state, k, 'ss_omsp')
    return SupportSet.from_zero_based(state.selected, An.shape[1])


def ra_ormp(Y: Any, A: Any, k: int) -> SupportSet:
    """RA-ORMP: k passos de argmax ||P_{R(P^perp Y)} a_l|| / ||P^perp a_l|| no dominio dos dados"""
    Y = ensure_matrix(Y, 'Y')
    An = _normalized(A)
    ensure_same_ambient(Y.shape[0], An.shape[0], ('Y', 'A'))
    ensure_count(k, 'k', minimum=0, maximum=An.shape[1])
    state = _ResidualState(An)
    _greedy_projected_subspace(Y, state, k, 'ra_ormp')
    return SupportSet.from_zero_based(state.selected, An.shape[1])


def p_somp(Y: Any, A: Any, s: int, p: float = 2.0) -> SupportSet:
    """
    p-SOMP: s passos de argmax ||Y^H P^perp_{R(A_J)} a_l||_p

    Args:
        Y: Medidas m x N
        A: Matriz m x n
        s: Numero de selecoes
        p: Ordem da norma em [1, inf]; p = 2 e M-OMP, p = 1 e S-OMP

    Returns:
        Suporte com s indices
    """
    if not (p >= 1):
        raise InvalidInputError(f"p={p} fora de [1, inf]", {'p': p})
    Y = ensure_matrix(Y, 'Y')
    An = _normalized(A)
    ensure_same_ambient(Y.shape[0], An.shape[0], ('Y', 'A'))
    ensure_count(s, 's', minimum=0, maximum=An.shape[1])
    state = _ResidualState(An)
    for _ in range(s):
        candidates = state.candidates()
        correlations = Y.conj().T @ state.R
        scores = np.linalg.norm(correlations, ord=p, axis=0)
        state.add(int(_rank_desc(scores, candidates)[0]))
    return SupportSet.from_zero_based(state.selected, An.shape[1])


def complete_support(
    S_hat: OrthonormalBasis,
    A: Any,
    J1: SupportSet,
    r: int
) -> tuple[SupportSet, OrthonormalBasis, np.ndarray]:
    """
    Aumenta S_hat com R(A_J1) e completa J1 com os r maiores zeta fora de J1

    Args:
        S_hat: Subespaco estimado
        A: Matriz m x n
        J1: Suporte parcial
        r: Numero de indices a completar

    Returns:
        (J, subespaco aumentado, escores zeta sob o subespaco aumentado)
    """
    A = ensure_matrix(A, 'A')
    n = A.shape[1]
    S_tilde = augment_subspace(S_hat, A[:, J1.zero_based()]) if len(J1) else S_hat
    scores = music_scores(S_tilde, A)
    outside = J1.complement().zero_based()
    chosen = _rank_desc(scores, outside)[:r]
    J = SupportSet.from_indices(list(J1.indices) + [int(j) + 1 for j in chosen], n)
    return J, S_tilde, scores


def exhaustive_partial_support(S_hat: OrthonormalBasis, A: Any, k: int, r: int) -> SupportSet:
    """
    Busca exaustiva de J1 com |J1| = k

    Escolhe o J1 que minimiza 1 - (r-esimo maior zeta fora de J1) sob o
    subespaco aumentado; empates favorecem o maior gap entre o r-esimo e o
    (r+1)-esimo escore e depois a ordem lexicografica.

    Args:
        S_hat: Subespaco estimado
        A: Matriz m x n
        k: Tamanho do suporte parcial
        r: Dimensao do subespaco estimado

    Returns:
        Melhor suporte parcial
    """
    A = ensure_matrix(A, 'A')
    n = A.shape[1]
    total = comb(n, k)
    if total > EXHAUSTIVE_BUDGET:
        raise BudgetExceededError(
            f"C({n}, {k}) = {total} subconjuntos excede o orcamento {EXHAUSTIVE_BUDGET}",
            {'n': n, 'k': k, 'subsets': total, 'budget': EXHAUSTIVE_BUDGET}
        )
    best_key: tuple[float, float] | None = None
    best: SupportSet = SupportSet((), n)
    for subset in combinations(range(1, n + 1), k):
        J1 = SupportSet(subset, n)
        _, _, scores = complete_support(S_hat, A, J1, r)
        outside = np.sort(scores[J1.complement().zero_based()])[::-1]
        rth = outside[r - 1] if r >= 1 else 1.0
        nxt = outside[r] if r < outside.size else 0.0
        key = (round(1.0 - rth, SCORE_DECIMALS), -round(rth - nxt, SCORE_DECIMALS))
        if best_key is None or key < best_key:
            best_key, best = key, J1
    return best


def _partial_support(method: PartialSupportMethod, S_hat: OrthonormalBasis, A: np.ndarray, k: int) -> SupportSet:
    n = A.shape[1]
    if method.kind is PartialSupportKind.SS_OMP:
        return ss_omp(S_hat, A, k)
    if method.kind is PartialSupportKind.SS_OMSP:
        return ss_omsp(S_hat, A, k)
    if method.kind is PartialSupportKind.ORACLE:
        J1 = method.J1
        if J1.universe != n:
            raise InvalidInputError("J1 com universo diferente de n", {'universe': J1.universe, 'n': n})
        if len(J1) < k:
            raise InvalidInputError(f"J1 oracle com {len(J1)} indices, necessarios {k}", {'size': len(J1), 'k': k})
        return SupportSet(J1.indices[:k], n)
    return exhaustive_partial_support(S_hat, A, k, S_hat.dim)


def sa_music_from_estimate(
    estimate: SubspaceEstimate | OrthonormalBasis,
    A: Any,
    s: int,
    method: PartialSupportMethod
) -> RecoveryReport:
    """
    SA-MUSIC a partir de um subespaco ja estimado

    Args:
        estimate: SubspaceEstimate ou base ortonormal de dimensao r
        A: Matriz m x n
        s: Esparsidade
        method: Metodo de suporte parcial

    Returns:
        RecoveryReport; com r >= s equivale a music(S_hat, A, s)
    """
    S_hat = estimate.basis if isinstance(estimate, SubspaceEstimate) else estimate
    A = ensure_matrix(A, 'A')
    n = A.shape[1]
    ensure_count(s, 's', minimum=1, maximum=n)
    r = S_hat.dim
    label = f'sa-music-{method.name}'

    if r >= s:
        report = music(S_hat, A, s)
        report.method = label
        report.metadata['reduced_to_music'] = True
        return report

    J1 = _partial_support(method, S_hat, A, s - r)
    J, S_tilde, scores = complete_support(S_hat, A, J1, r)
    logger.log_recovery(label, len(J))
    return RecoveryReport(
        J=J, r_used=r, method=label, scores=scores, partial_support=J1,
        metadata={'reduced_to_music': False, 'augmented_dim': S_tilde.dim},
    )


def sa_music(Y: Any, A: Any, s: int, tau: float, method: PartialSupportMethod) -> RecoveryReport:
    """
    SA-MUSIC: estima o subespaco, obtem J1, aumenta e completa com MUSIC

    Args:
        Y: Medidas m x N
        A: Matriz m x n
        s: Esparsidade
        tau: Limiar relativo da estimacao de subespaco
        method: Metodo de suporte parcial

    Returns:
        RecoveryReport com |J| = s
    """
    estimate = estimate_signal_subspace(Y, tau)
    report = sa_music_from_estimate(estimate, A, s, method)
    report.metadata['tau'] = tau
    return report


class UnknownSparsityRule(str, Enum):
    SS_OMP = 'ss_omp'
    SS_OMSP = 'ss_omsp'


def sa_music_unknown_s(
    Y: Any,
    A: Any,
    tau: float,
    eta: float,
    rule: UnknownSparsityRule | str = UnknownSparsityRule.SS_OMSP
) -> RecoveryReport:
    """
    SA-MUSIC sem conhecimento de s

    Passo inicial MUSIC de tamanho r; depois, enquanto
    ||P^perp_{R(A_J)} P_S_hat|| > eta, seleciona um indice pela regra gulosa,
    aumenta e reordena os r maiores zeta fora de J1.

    Args:
        Y: Medidas m x N
        A: Matriz m x n
        tau: Limiar relativo da estimacao de subespaco
        eta: Limiar de parada em [0, 1]
        rule: Regra gulosa (ss_omp ou ss_omsp)

    Returns:
        RecoveryReport com |J| = r + |J1|
    """
    if not 0.0 <= eta <= 1.0:
        raise InvalidInputError(f"eta={eta} fora de [0, 1]", {'eta': eta})
    rule = UnknownSparsityRule(rule)
    A = ensure_matrix(A, 'A')
    An = _normalized(A)
    n = A.shape[1]
    estimate = estimate_signal_subspace(Y, tau)
    S_hat = estimate.basis
    r = S_hat.dim
    if r > n:
        raise InvalidInputError(f"r={r} maior que n={n}", {'r': r, 'n': n})

    def stop_residual(J: SupportSet) -> float:
        return cross_projector_norm(orthonormal_basis(A[:, J.zero_based()]), S_hat)

    initial = music(S_hat, A, r)
    J, scores = initial.J, initial.scores
    residual = stop_residual(J)
    state = _ResidualState(An)
    iterations = 0

    while residual > eta + STOP_ATOL:
        if iterations >= n - r:
            raise NoConvergenceError(
                f"Sem convergencia apos {iterations} iteracoes",
                {'iterations': iterations, 'residual': residual, 'eta': eta}
            )
        if rule is UnknownSparsityRule.SS_OMP:
            _greedy_ss_omp(S_hat, state, 1)
        else:
            _greedy_projected_subspace(S_hat.columns, state, 1, 'ss_omsp')
        iterations += 1
        J1 = SupportSet.from_zero_based(state.selected, n)
        J, _, scores = complete_support(S_hat, A, J1, r)
        residual = stop_residual(J)

    J1 = SupportSet.from_zero_based(state.selected, n)
    logger.log_recovery(f'sa-music-unknown-{rule.value}', len(J))
    return RecoveryReport(
        J=J, r_used=r, method=f'sa-music-unknown-{rule.value}', scores=scores, partial_support=J1,
        metadata={'iterations': iterations, 'residual': residual, 'eta': eta, 'tau': tau},
    )


def support_match(J: SupportSet, J0: SupportSet) -> bool:
    """Igualdade exata de suportes sobre o mesmo universo"""
    ensure_same_ambient(J.universe, J0.universe, ('J.universe', 'J0.universe'))
    return J.indices == J0.indices
