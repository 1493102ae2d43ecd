"""
Estimacao do subespaco de sinal por remocao de vies e limiar de gap espectral
"""

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from samusic.exceptions import DegenerateInputError, InvalidInputError, NoGapError
from samusic.linalg import OrthonormalBasis, hermitian_eig_desc
from samusic.logger import get_logger
from samusic.validators import ensure_matrix

logger = get_logger('subspace')


@dataclass(frozen=True, eq=False)
class SubspaceEstimate:
    """Dimensao estimada, base e espectro de Gamma_hat"""

    r: int
    basis: OrthonormalBasis
    eigenvalues_biased: np.ndarray
    tau: float
    rank_deficient_covariance: bool = False
    metadata: dict[str, Any] = field(default_factory=dict)

    def projector(self) -> np.ndarray:
        return self.basis.projector()


def satisfies_threshold_condition(eigenvalues: Any, r: int, tau: float) -> bool:
    """
    Condicao bilateral: gap_r >= tau * lambda_1 e todo gap posterior < tau * lambda_1

    Args:
        eigenvalues: Espectro decrescente de Gamma_hat
        r: Dimensao candidata (1 <= r <= m-1)
        tau: Limiar relativo

    Returns:
        True se r satisfaz a condicao
    """
    lam = np.asarray(eigenvalues, dtype=float)
    if not 1 <= r <= lam.size - 1:
        return False
    gaps = lam[:-1] - lam[1:]
    threshold = tau * lam[0]
    return bool(gaps[r - 1] >= threshold and np.all(gaps[r:] < threshold))


def estimate_signal_subspace(Y: Any, tau: float) -> SubspaceEstimate:
    """
    Estima dimensao e base do subespaco de sinal a partir de N snapshots

    Gamma_Y = Y Y^H / N; Gamma_hat = Gamma_Y - lambda_m(Gamma_Y) I; r e o
    maior k <= m-1 com lambda_k - lambda_{k+1} >= tau * lambda_1.

    Args:
        Y: Medidas m x N
        tau: Limiar relativo em (0, 1)

    Returns:
        SubspaceEstimate com os r autovetores dominantes de Gamma_hat
    """
    if not 0.0 < tau < 1.0:
        raise InvalidInputError(f"tau={tau} fora de (0, 1)", {'tau': tau})
    Y = ensure_matrix(Y, 'Y')
    if not np.any(Y):
        raise DegenerateInputError("Y nulo", {'shape': Y.shape})

    m, N = Y.shape
    gamma_y = (Y @ Y.conj().T) / N
    gamma_y = (gamma_y + gamma_y.conj().T) / 2
    lam_y, _ = hermitian_eig_desc(gamma_y)
    gamma_hat = gamma_y - lam_y[-1] * np.eye(m)
    lam, vectors = hermitian_eig_desc(gamma_hat)
    # remocao de vies zera lambda_m por construcao
    lam = lam.copy()
    lam[-1] = 0.0

    spectrum = lam.tolist()
    if m < 2 or lam[0] <= 0:
        raise NoGapError("Espectro sem gap (lambda_1 de Gamma_hat nulo)", {'spectrum': spectrum, 'tau': tau})

    gaps = lam[:-1] - lam[1:]
    passing = np.flatnonzero(gaps >= tau * lam[0])
    if passing.size == 0:
        raise NoGapError(f"Nenhum gap atinge tau*lambda_1 (tau={tau})", {'spectrum': spectrum, 'tau': tau})
    r = int(passing[-1]) + 1

    if not satisfies_threshold_condition(lam, r, tau):
        raise NoGapError("Condicao de limiar violada apos selecao", {'spectrum': spectrum, 'r': r, 'tau': tau})

    basis = OrthonormalBasis(vectors.columns[:, :r], check=False)
    logger.log_estimate(r, m, tau)
    return SubspaceEstimate(
        r=r,
        basis=basis,
        eigenvalues_biased=lam,
        tau=tau,
        rank_deficient_covariance=N < m,
        metadata={'m': m, 'N': N, 'lambda_m_removed': float(lam_y[-1])},
    )
