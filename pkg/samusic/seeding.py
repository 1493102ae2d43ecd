"""
Derivacao deterministica de sementes por (semente base, celula, ensaio)

Cada ensaio recebe uma numpy.random.SeedSequence com entropia
[base_seed, crc32(celula em JSON canonico), indice do ensaio]; as sementes
de matriz, sinal e ruido sao filhas independentes (spawn) dessa sequencia.
"""

import json
import zlib
from dataclasses import dataclass
from typing import Any

import numpy as np

from samusic.exceptions import InvalidInputError


@dataclass(frozen=True)
class TrialSeeds:
    trial_seed: int
    sensing: int
    signal: int
    noise: int


def cell_key(cell: dict[str, Any]) -> int:
    """Hash estavel (crc32) do dicionario da celula"""
    payload = json.dumps(cell, sort_keys=True, separators=(',', ':'), default=float)
    return zlib.crc32(payload.encode('utf-8'))


def _state_to_int(seq: np.random.SeedSequence) -> int:
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def trial_sequence(base_seed: int, cell: dict[str, Any], trial: int) -> np.random.SeedSequence:
    if base_seed < 0 or trial < 0:
        raise InvalidInputError("base_seed e trial devem ser nao negativos", {'base_seed': base_seed, 'trial': trial})
    return np.random.SeedSequence([int(base_seed), cell_key(cell), int(trial)])


def trial_seeds(base_seed: int, cell: dict[str, Any], trial: int) -> TrialSeeds:
    """
    Sementes de 64 bits para um ensaio

    Args:
        base_seed: Semente base da varredura
        cell: Parametros da celula
        trial: Indice do ensaio

    Returns:
        TrialSeeds com semente do ensaio e das tres fontes de aleatoriedade
    """
    seq = trial_sequence(base_seed, cell, trial)
    sensing, signal, noise = seq.spawn(3)
    return TrialSeeds(
        trial_seed=_state_to_int(seq),
        sensing=_state_to_int(sensing),
        signal=_state_to_int(signal),
        noise=_state_to_int(noise),
    )
