"""
Recuperacao conjunta de suporte esparso por subespaco (MUSIC / SA-MUSIC)
"""

from samusic.analysis import Weak1Ric, kruskal_rank, rho_lower_bound, weak1_ric
from samusic.bench import SweepRunner, run_sweep, runtime_scaling
from samusic.config import SweepConfig
from samusic.linalg import OrthonormalBasis, SupportSet
from samusic.recovery import (
    PartialSupportMethod,
    RecoveryReport,
    music,
    sa_music,
    sa_music_unknown_s,
    ss_omp,
    ss_omsp,
)
from samusic.sensing import Ensemble, SensingSpec
from samusic.signal_model import NoiseSpec, ProblemInstance, SignalSpec, generate_instance
from samusic.subspace import SubspaceEstimate, estimate_signal_subspace

__all__ = [
    'Weak1Ric',
    'kruskal_rank',
    'rho_lower_bound',
    'weak1_ric',
    'SweepRunner',
    'run_sweep',
    'runtime_scaling',
    'SweepConfig',
    'OrthonormalBasis',
    'SupportSet',
    'PartialSupportMethod',
    'RecoveryReport',
    'music',
    'sa_music',
    'sa_music_unknown_s',
    'ss_omp',
    'ss_omsp',
    'Ensemble',
    'SensingSpec',
    'NoiseSpec',
    'ProblemInstance',
    'SignalSpec',
    'generate_instance',
    'SubspaceEstimate',
    'estimate_signal_subspace',
]
