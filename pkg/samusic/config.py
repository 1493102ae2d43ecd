"""
Configuracao de varreduras Monte-Carlo carregada de JSON
"""

import json
from dataclasses import asdict, dataclass, field, fields
from itertools import product
from pathlib import Path
from typing import Any

from samusic.exceptions import ConfigurationError
from samusic.logger import get_logger
from samusic.sensing import Ensemble

logger = get_logger('config')

ALGORITHM_NAMES = (
    'music',
    'sa-music-ssomp',
    'sa-music-ssomsp',
    'sa-music-oracle',
    'sa-music-exhaustive',
    'ss-omp',
    'ss-omsp',
    'm-omp',
    's-omp',
    'ra-ormp',
    'sa-music-unknown',
    'sa-music-unknown-ssomp',
)

DEFAULT_ALGORITHMS = ['music', 'sa-music-ssomp', 'sa-music-ssomsp']
MAX_SEED = 2 ** 64


@dataclass
class SweepConfig:
    """
    Parametros de uma varredura sobre (m, rank ou kappa, SNR)

    Exatamente uma das listas ranks/kappas define o modelo de sinal:
    ranks -> posto fixo, kappas -> posto completo com numero de condicao kappa.
    snr_db None significa sem ruido.
    """

    name: str = 'sweep'
    n: int = 128
    s: int = 8
    N: int = 256
    m_values: list[int] = field(default_factory=lambda: list(range(10, 33)))
    ranks: list[int] | None = None
    kappas: list[float] | None = None
    snr_db: list[float | None] = field(default_factory=lambda: [None])
    algorithms: list[str] = field(default_factory=lambda: list(DEFAULT_ALGORITHMS))
    trials: int = 100
    tau: float = 1e-3
    base_seed: int = 0
    ensemble: str = Ensemble.FOURIER_UNIFORM_ROWS.value
    normalize_columns: bool = True
    eta: float = 0.0
    timing: bool = True
    parquet: bool = False

    def __post_init__(self):
        if not isinstance(self.snr_db, (list, tuple)):
            self.snr_db = [self.snr_db]
        self.snr_db = [None if v is None else float(v) for v in self.snr_db]
        if self.ranks is None and self.kappas is None:
            self.ranks = [self.s]
        self.validate()

    @property
    def signal_field(self) -> str:
        """Campo do sinal acompanha o ensemble (Fourier complexo, gaussiano real)"""
        return 'complex' if Ensemble(self.ensemble).is_fourier else 'real'

    @property
    def model_key(self) -> str:
        return 'rank' if self.ranks is not None else 'kappa'

    def validate(self):
        """Valida parametros; levanta ConfigurationError na primeira violacao"""
        for name in ('n', 's', 'N', 'trials'):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigurationError(f"{name} deve ser inteiro >= 1, recebido {value!r}", {name: value})
        if self.s > self.n:
            raise ConfigurationError(f"s={self.s} > n={self.n}", {'s': self.s, 'n': self.n})

        if not self.m_values:
            raise ConfigurationError("m_values vazio")
        bad_m = [m for m in self.m_values if not isinstance(m, int) or not self.s + 1 <= m <= self.n]
        if bad_m:
            raise ConfigurationError(
                f"m_values fora de [{self.s + 1}, {self.n}]: {bad_m}", {'m_values': bad_m}
            )

        if (self.ranks is None) == (self.kappas is None):
            raise ConfigurationError("Informe exatamente um de ranks ou kappas")
        if self.ranks is not None:
            bad = [r for r in self.ranks if not isinstance(r, int) or not 1 <= r <= min(self.s, self.N)]
            if not self.ranks or bad:
                raise ConfigurationError(f"ranks invalidos: {self.ranks}", {'ranks': self.ranks})
        if self.kappas is not None:
            if not self.kappas or any(not isinstance(k, (int, float)) or k < 1 for k in self.kappas):
                raise ConfigurationError(f"kappas devem ser >= 1: {self.kappas}", {'kappas': self.kappas})
            if self.N < self.s:
                raise ConfigurationError("kappas requerem N >= s", {'N': self.N, 's': self.s})

        unknown = [a for a in self.algorithms if a not in ALGORITHM_NAMES]
        if not self.algorithms or unknown:
            raise ConfigurationError(
                f"Algoritmos desconhecidos: {unknown}", {'unknown': unknown, 'available': list(ALGORITHM_NAMES)}
            )
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ConfigurationError("Algoritmos repetidos", {'algorithms': self.algorithms})

        if not self.tau > 0:
            raise ConfigurationError(f"tau={self.tau} deve ser positivo", {'tau': self.tau})
        if self.tau >= 1:
            logger.warning(f"tau={self.tau} >= 1: registrado como informado; a estimacao falhara por ensaio")
        if not 0.0 <= self.eta <= 1.0:
            raise ConfigurationError(f"eta={self.eta} fora de [0, 1]", {'eta': self.eta})
        if isinstance(self.base_seed, bool) or not isinstance(self.base_seed, int) \
                or not 0 <= self.base_seed < MAX_SEED:
            raise ConfigurationError(f"base_seed={self.base_seed!r} fora de [0, 2^64)", {'base_seed': self.base_seed})
        try:
            Ensemble(self.ensemble)
        except ValueError as e:
            raise ConfigurationError(f"Ensemble desconhecido: {self.ensemble}", {'ensemble': self.ensemble}) from e

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> 'SweepConfig':
        """
        Constroi configuracao a partir de dicionario

        Args:
            data: Dicionario com chaves de SweepConfig

        Returns:
            SweepConfig validada
        """
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError(f"Chaves desconhecidas na configuracao: {unknown}", {'unknown': unknown})
        try:
            return cls(**data)
        except TypeError as e:
            raise ConfigurationError(f"Configuracao invalida: {e}") from e

    @classmethod
    def from_json(cls, path: str | Path) -> 'SweepConfig':
        """Le configuracao de arquivo JSON"""
        path = Path(path)
        try:
            data = json.loads(path.read_text(encoding='utf-8'))
        except FileNotFoundError as e:
            raise ConfigurationError(f"Arquivo de configuracao nao encontrado: {path}", {'path': str(path)}) from e
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"JSON invalido em {path}: {e}", {'path': str(path)}) from e
        if not isinstance(data, dict):
            raise ConfigurationError("Configuracao deve ser um objeto JSON", {'path': str(path)})
        config = cls.from_dict(data)
        logger.info(f"Configuracao carregada: {config.name} ({len(config.cells())} celulas)")
        return config

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def cells(self) -> list[dict[str, Any]]:
        """
        Celulas da varredura em ordem deterministica (snr, modelo, m)

        Returns:
            Lista de dicionarios com m, rank ou kappa e snr_db
        """
        model_values = self.ranks if self.ranks is not None else [float(k) for k in self.kappas]
        return [
            {'snr_db': snr, self.model_key: value, 'm': m}
            for snr, value, m in product(self.snr_db, model_values, self.m_values)
        ]
