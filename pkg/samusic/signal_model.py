"""
Modelos de sinal esparso por linhas, injecao de ruido e instancias de problema
"""

import json
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from pathlib import Path
from typing import Any, Union

import numpy as np

from samusic.cmx import read_cmx, write_cmx
from samusic.exceptions import InvalidInputError, UnsupportedSizeError
from samusic.linalg import SupportSet, numerical_rank, random_orthonormal, singular_values
from samusic.logger import get_logger
from samusic.sensing import SensingSpec, generate
from samusic.validators import ensure_count, ensure_hermitian, ensure_matrix

logger = get_logger('signal_model')

NONDEGENERATE_MAX_ROWS = 20
FIELDS = ('real', 'complex')


@dataclass(frozen=True, eq=False)
class MixedMultichannel:
    """Bloco nao nulo Psi Lambda Phi com Phi gaussiano M x N"""

    Psi: np.ndarray
    Lambda: tuple[float, ...]

    def __post_init__(self):
        psi = ensure_matrix(self.Psi, 'Psi')
        lam = tuple(float(v) for v in np.ravel(self.Lambda))
        if len(lam) != psi.shape[1]:
            raise InvalidInputError(
                f"Lambda com {len(lam)} entradas, Psi com {psi.shape[1]} colunas",
                {'lambda': len(lam), 'psi_cols': psi.shape[1]}
            )
        if any(v <= 0 for v in lam):
            raise InvalidInputError("Lambda deve ser positiva", {'lambda': lam})
        object.__setattr__(self, 'Psi', psi)
        object.__setattr__(self, 'Lambda', lam)

    def describe(self) -> dict[str, Any]:
        return {'kind': 'mixed_multichannel', 'M': len(self.Lambda), 'lambda': list(self.Lambda)}


@dataclass(frozen=True)
class FixedRank:
    """U0 Sigma0 V0^H com fatores ortonormais aleatorios"""

    rank: int
    singular_values: tuple[float, ...] = ()

    def __post_init__(self):
        ensure_count(self.rank, 'rank', minimum=1)
        sv = tuple(float(v) for v in self.singular_values) or (1.0,) * int(self.rank)
        if len(sv) != self.rank:
            raise InvalidInputError(
                f"{len(sv)} valores singulares para rank {self.rank}", {'rank': self.rank, 'count': len(sv)}
            )
        if any(v <= 0 for v in sv) or any(b > a for a, b in zip(sv, sv[1:])):
            raise InvalidInputError("Valores singulares devem ser positivos e decrescentes", {'values': sv})
        object.__setattr__(self, 'singular_values', sv)

    def describe(self) -> dict[str, Any]:
        return {'kind': 'fixed_rank', 'rank': self.rank, 'singular_values': list(self.singular_values)}


@dataclass(frozen=True)
class Conditioned:
    """Posto completo s com sigma_k = kappa^{-(k-1)/(s-1)}"""

    kappa: float

    def __post_init__(self):
        if not np.isfinite(self.kappa) or self.kappa < 1:
            raise InvalidInputError(f"kappa={self.kappa} deve ser >= 1", {'kappa': self.kappa})

    def describe(self) -> dict[str, Any]:
        return {'kind': 'conditioned', 'kappa': float(self.kappa)}


SignalModel = Union[MixedMultichannel, FixedRank, Conditioned]


@dataclass(frozen=True, eq=False)
class SignalSpec:
    """Especificacao de X0 (n x N, s-esparso por linhas)"""

    n: int
    s: int
    N: int
    model: SignalModel
    support: SupportSet | None = None
    field: str = 'complex'
    seed: int = 0

    def __post_init__(self):
        ensure_count(self.n, 'n', minimum=1)
        ensure_count(self.s, 's', minimum=1, maximum=self.n)
        ensure_count(self.N, 'N', minimum=1)
        if self.field not in FIELDS:
            raise InvalidInputError(f"Campo desconhecido: {self.field}", {'field': self.field})
        if self.support is not None:
            if self.support.universe != self.n or len(self.support) != self.s:
                raise InvalidInputError(
                    "Suporte incompativel com (n, s)",
                    {'support': str(self.support), 'n': self.n, 's': self.s}
                )
        if isinstance(self.model, MixedMultichannel) and self.model.Psi.shape[0] != self.s:
            raise InvalidInputError(f"Psi deve ter s={self.s} linhas", {'psi_shape': self.model.Psi.shape})
        if isinstance(self.model, FixedRank) and self.model.rank > min(self.s, self.N):
            raise InvalidInputError(
                f"rank={self.model.rank} > min(s, N)={min(self.s, self.N)}", {'rank': self.model.rank}
            )
        if isinstance(self.model, Conditioned) and self.s > self.N:
            raise InvalidInputError(f"Modelo condicionado requer N >= s ({self.N} < {self.s})")

    def to_dict(self) -> dict[str, Any]:
        return {
            'n': self.n, 's': self.s, 'N': self.N, 'field': self.field, 'seed': self.seed,
            'support': None if self.support is None else list(self.support.indices),
            'model': self.model.describe(),
        }


class NoiseKind(str, Enum):
    NONE = 'none'
    SNR_DB = 'snr_db'
    SIGMA_W = 'sigma_w'


@dataclass(frozen=True)
class NoiseSpec:
    """Ruido gaussiano circular aditivo"""

    kind: NoiseKind = NoiseKind.NONE
    value: float = 0.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'kind', NoiseKind(self.kind))
        if self.kind is NoiseKind.SIGMA_W and (not np.isfinite(self.value) or self.value < 0):
            raise InvalidInputError(f"sigma_w={self.value} deve ser >= 0", {'sigma_w': self.value})
        if self.kind is NoiseKind.SNR_DB and not np.isfinite(self.value):
            raise InvalidInputError("snr_db deve ser finito", {'snr_db': self.value})

    @classmethod
    def none(cls, seed: int = 0) -> 'NoiseSpec':
        return cls(NoiseKind.NONE, 0.0, seed)

    @classmethod
    def from_snr_db(cls, snr_db: float, seed: int = 0) -> 'NoiseSpec':
        return cls(NoiseKind.SNR_DB, float(snr_db), seed)

    @classmethod
    def from_sigma(cls, sigma_w: float, seed: int = 0) -> 'NoiseSpec':
        return cls(NoiseKind.SIGMA_W, float(sigma_w), seed)

    def to_dict(self) -> dict[str, Any]:
        return {'kind': self.kind.value, 'value': self.value, 'seed': self.seed}


@dataclass(eq=False)
class ProblemInstance:
    """Instancia (A, X0, W, Y, J0) com metadados de geracao"""

    A: np.ndarray
    X0: np.ndarray
    J0: SupportSet
    W: np.ndarray
    Y: np.ndarray
    metadata: dict[str, Any] = field(default_factory=dict)

    @property
    def field(self) -> str:
        return 'complex' if np.iscomplexobj(self.A) or np.iscomplexobj(self.Y) else 'real'


def _gaussian(shape: tuple[int, int], rng: np.random.Generator, complex_field: bool) -> np.ndarray:
    if complex_field:
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    return rng.standard_normal(shape)


def _draw_support(spec: SignalSpec, rng: np.random.Generator) -> SupportSet:
    if spec.support is not None:
        return spec.support
    return SupportSet.from_zero_based(rng.choice(spec.n, size=spec.s, replace=False), spec.n)


def generate_signal(spec: SignalSpec, rng: np.random.Generator | None = None) -> tuple[np.ndarray, SupportSet]:
    """
    Gera X0 s-esparso por linhas e seu suporte

    Args:
        spec: Especificacao do sinal
        rng: Gerador explicito; padrao default_rng(spec.seed)

    Returns:
        (X0 n x N, J0)
    """
    rng = rng if rng is not None else np.random.default_rng(spec.seed)
    complex_field = spec.field == 'complex'
    J0 = _draw_support(spec, rng)
    model = spec.model

    if isinstance(model, MixedMultichannel):
        Phi = _gaussian((len(model.Lambda), spec.N), rng, complex_field)
        block = model.Psi @ (np.asarray(model.Lambda)[:, None] * Phi)
    elif isinstance(model, FixedRank):
        U0 = random_orthonormal(spec.s, model.rank, rng, complex_field)
        V0 = random_orthonormal(spec.N, model.rank, rng, complex_field)
        block = (U0 * np.asarray(model.singular_values)[None, :]) @ V0.conj().T
    elif isinstance(model, Conditioned):
        k = np.arange(spec.s)
        sigma = model.kappa ** (-k / (spec.s - 1)) if spec.s > 1 else np.ones(1)
        U0 = random_orthonormal(spec.s, spec.s, rng, complex_field)
        V0 = random_orthonormal(spec.N, spec.s, rng, complex_field)
        block = (U0 * sigma[None, :]) @ V0.conj().T
    else:
        raise InvalidInputError(f"Modelo de sinal desconhecido: {type(model).__name__}")

    X0 = np.zeros((spec.n, spec.N), dtype=complex if complex_field else float)
    X0[J0.zero_based(), :] = block if complex_field else np.real(block)
    return X0, J0


def add_noise(
    A: Any,
    X0: Any,
    noise: NoiseSpec,
    rng: np.random.Generator | None = None
) -> tuple[np.ndarray, np.ndarray, float]:
    """
    Forma Y = A X0 + W com ruido gaussiano circular

    No modo snr_db, sigma_w^2 = ||A X0||_F^2 / (m N 10^{SNR/10}) usando a
    potencia empirica do sinal realizado.

    Args:
        A: Matriz m x n
        X0: Sinal n x N
        noise: Especificacao do ruido
        rng: Gerador explicito; padrao default_rng(noise.seed)

    Returns:
        (Y, W, sigma_w usado)
    """
    A = ensure_matrix(A, 'A')
    X0 = ensure_matrix(X0, 'X0')
    if A.shape[1] != X0.shape[0]:
        raise InvalidInputError(f"A {A.shape} e X0 {X0.shape} nao conformes", {'A': A.shape, 'X0': X0.shape})
    rng = rng if rng is not None else np.random.default_rng(noise.seed)

    clean = A @ X0
    m, N = clean.shape
    if noise.kind is NoiseKind.NONE:
        sigma_w = 0.0
    elif noise.kind is NoiseKind.SIGMA_W:
        sigma_w = float(noise.value)
    else:
        power = float(np.linalg.norm(clean) ** 2)
        sigma_w = float(np.sqrt(power / (m * N * 10 ** (noise.value / 10))))

    if sigma_w == 0.0:
        W = np.zeros_like(clean)
    else:
        W = sigma_w * _gaussian((m, N), rng, np.iscomplexobj(clean))
    return clean + W, W, sigma_w


def is_row_nondegenerate(X: Any) -> bool:
    """
    Verifica se todo subconjunto de rank(X) linhas e linearmente independente

    Args:
        X: Matriz com no maximo 20 linhas

    Returns:
        True se krank(X^H) = rank(X)
    """
    X = ensure_matrix(X, 'X')
    if X.shape[0] > NONDEGENERATE_MAX_ROWS:
        raise UnsupportedSizeError(
            f"Enumeracao limitada a {NONDEGENERATE_MAX_ROWS} linhas, recebido {X.shape[0]}",
            {'rows': X.shape[0]}
        )
    sigma = singular_values(X)
    if sigma[0] == 0:
        return True
    threshold = 1e-10 * sigma[0]
    k = int(np.sum(sigma > threshold))
    for rows in combinations(range(X.shape[0]), k):
        if singular_values(X[list(rows), :])[-1] <= threshold:
            return False
    return True


def generate_instance(sensing: SensingSpec, signal: SignalSpec, noise: NoiseSpec) -> ProblemInstance:
    """
    Gera instancia completa a partir das tres especificacoes

    Args:
        sensing: Especificacao de A
        signal: Especificacao de X0 (campo deve casar com A)
        noise: Especificacao do ruido

    Returns:
        ProblemInstance com Y = A X0 + W
    """
    if sensing.n != signal.n:
        raise InvalidInputError(f"n inconsistente: {sensing.n} vs {signal.n}", {'sensing': sensing.n, 'signal': signal.n})
    sensing_field = 'complex' if sensing.ensemble.is_fourier else 'real'
    if sensing_field != signal.field:
        raise InvalidInputError(
            f"Campo de A ({sensing_field}) difere do campo do sinal ({signal.field})",
            {'sensing_field': sensing_field, 'signal_field': signal.field}
        )

    A = generate(sensing)
    X0, J0 = generate_signal(signal)
    Y, W, sigma_w = add_noise(A, X0, noise)
    metadata = {
        'sensing': sensing.to_dict(),
        'signal': signal.to_dict(),
        'noise': noise.to_dict(),
        'field': signal.field,
        'sigma_w': sigma_w,
        'J0': list(J0.indices),
    }
    return ProblemInstance(A=A, X0=X0, J0=J0, W=W, Y=Y, metadata=metadata)


def save_instance(instance: ProblemInstance, directory: str | Path) -> Path:
    """
    Grava instancia como diretorio de arquivos CMX mais instance.json

    Args:
        instance: Instancia a gravar
        directory: Diretorio de destino

    Returns:
        Caminho do diretorio
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    field_name = instance.field
    for name in ('A', 'X0', 'W', 'Y'):
        write_cmx(directory / f'{name}.cmx', getattr(instance, name), field_name)
    metadata = dict(instance.metadata)
    metadata.update({'field': field_name, 'J0': list(instance.J0.indices), 'n': instance.J0.universe})
    (directory / 'instance.json').write_text(json.dumps(metadata, indent=2, sort_keys=True), encoding='utf-8')
    logger.info(f"Instancia gravada em {directory}")
    return directory


def load_instance(directory: str | Path) -> ProblemInstance:
    """Le instancia gravada por save_instance"""
    directory = Path(directory)
    meta_path = directory / 'instance.json'
    if not meta_path.exists():
        raise InvalidInputError(f"instance.json nao encontrado em {directory}", {'directory': str(directory)})
    metadata = json.loads(meta_path.read_text(encoding='utf-8'))
    A = read_cmx(directory / 'A.cmx')
    X0 = read_cmx(directory / 'X0.cmx')
    Y = read_cmx(directory / 'Y.cmx')
    W_path = directory / 'W.cmx'
    W = read_cmx(W_path) if W_path.exists() else np.zeros_like(Y)
    J0 = SupportSet.from_indices(metadata.get('J0', []), metadata.get('n', A.shape[1]))
    return ProblemInstance(A=A, X0=X0, J0=J0, W=W, Y=Y, metadata=metadata)


def population_covariance(A_J0: Any, Psi: Any, Lambda: Any) -> np.ndarray:
    """Gamma = A_J0 Psi Lambda^2 Psi^H A_J0^H do modelo multicanal misto"""
    A_J0 = ensure_matrix(A_J0, 'A_J0')
    B = A_J0 @ ensure_matrix(Psi, 'Psi') @ np.diag(np.ravel(Lambda))
    return B @ B.conj().T


def noise_ratio_from_snr(Gamma: Any, snr_db: float) -> float:
    """
    Razao sigma_w^2 / lambda_1(Gamma) para um SNR = tr(Gamma) / (m sigma_w^2)

    Args:
        Gamma: Covariancia populacional do sinal (m x m)
        snr_db: SNR em dB

    Returns:
        sigma_w^2 / lambda_1(Gamma)
    """
    G = ensure_hermitian(Gamma, 'Gamma')
    m = G.shape[0]
    lam1 = float(np.linalg.eigvalsh(G)[-1])
    if lam1 <= 0:
        raise InvalidInputError("Gamma sem autovalor positivo", {'lambda_1': lam1})
    sigma2 = float(np.real(np.trace(G))) / (m * 10 ** (snr_db / 10))
    return sigma2 / lam1
