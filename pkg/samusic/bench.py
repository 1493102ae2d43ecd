"""
Harness Monte-Carlo de varreduras e escalonamento de tempo de execucao

Cada ensaio e reproduzivel a partir de (configuracao, celula, indice do
ensaio): as sementes de A, X0 e W derivam de samusic.seeding. A agregacao
percorre as celulas na ordem da configuracao, de modo que execucao serial e
paralela produzem o mesmo CSV.
"""

import math
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable

import numpy as np
import pandas as pd
from scipy.stats import norm

from samusic.config import DEFAULT_ALGORITHMS, SweepConfig
from samusic.error_handler import ErrorHandler
from samusic.exceptions import InvalidInputError
from samusic.export import DataExporter
from samusic.linalg import SupportSet
from samusic.logger import get_logger
from samusic.metrics import SweepMetrics, TimingCollector
from samusic.parallel import TrialExecutor
from samusic.recovery import (
    PartialSupportKind,
    PartialSupportMethod,
    UnknownSparsityRule,
    music,
    p_somp,
    ra_ormp,
    sa_music_from_estimate,
    sa_music_unknown_s,
    ss_omp,
    ss_omsp,
    support_match,
)
from samusic.schema import results_schema, runtime_schema, trials_schema
from samusic.seeding import TrialSeeds, trial_seeds
from samusic.sensing import SensingSpec
from samusic.signal_model import Conditioned, FixedRank, NoiseSpec, ProblemInstance, SignalSpec, generate_instance
from samusic.subspace import SubspaceEstimate, estimate_signal_subspace

logger = get_logger('bench')

WILSON_CONFIDENCE = 0.95
RUNTIME_BASE_N = 64


@dataclass
class TrialContext:
    """Dados compartilhados pelos algoritmos de um ensaio"""

    Y: np.ndarray
    A: np.ndarray
    s: int
    tau: float
    eta: float
    J0: SupportSet
    estimate: SubspaceEstimate | None = None
    estimate_seconds: float = 0.0
    estimate_error: Exception | None = None


@dataclass(frozen=True)
class AlgorithmSpec:
    name: str
    run: Callable[[TrialContext], SupportSet]
    uses_estimate: bool = True


def _sa_music(kind: PartialSupportKind) -> Callable[[TrialContext], SupportSet]:
    def run(ctx: TrialContext) -> SupportSet:
        J1 = ctx.J0 if kind is PartialSupportKind.ORACLE else None
        return sa_music_from_estimate(ctx.estimate, ctx.A, ctx.s, PartialSupportMethod(kind, J1)).J
    return run


def _unknown(rule: UnknownSparsityRule) -> Callable[[TrialContext], SupportSet]:
    def run(ctx: TrialContext) -> SupportSet:
        return sa_music_unknown_s(ctx.Y, ctx.A, ctx.tau, ctx.eta, rule).J
    return run


ALGORITHMS: dict[str, AlgorithmSpec] = {
    spec.name: spec for spec in (
        AlgorithmSpec('music', lambda ctx: music(ctx.estimate.basis, ctx.A, ctx.s).J),
        AlgorithmSpec('sa-music-ssomp', _sa_music(PartialSupportKind.SS_OMP)),
        AlgorithmSpec('sa-music-ssomsp', _sa_music(PartialSupportKind.SS_OMSP)),
        AlgorithmSpec('sa-music-oracle', _sa_music(PartialSupportKind.ORACLE)),
        AlgorithmSpec('sa-music-exhaustive', _sa_music(PartialSupportKind.EXHAUSTIVE)),
        AlgorithmSpec('ss-omp', lambda ctx: ss_omp(ctx.estimate.basis, ctx.A, ctx.s)),
        AlgorithmSpec('ss-omsp', lambda ctx: ss_omsp(ctx.estimate.basis, ctx.A, ctx.s)),
        AlgorithmSpec('m-omp', lambda ctx: p_somp(ctx.Y, ctx.A, ctx.s, p=2.0), uses_estimate=False),
        AlgorithmSpec('s-omp', lambda ctx: p_somp(ctx.Y, ctx.A, ctx.s, p=1.0), uses_estimate=False),
        AlgorithmSpec('ra-ormp', lambda ctx: ra_ormp(ctx.Y, ctx.A, ctx.s), uses_estimate=False),
        AlgorithmSpec('sa-music-unknown', _unknown(UnknownSparsityRule.SS_OMSP), uses_estimate=False),
        AlgorithmSpec('sa-music-unknown-ssomp', _unknown(UnknownSparsityRule.SS_OMP), uses_estimate=False),
    )
}


def wilson_interval(successes: int, trials: int, confidence: float = WILSON_CONFIDENCE) -> tuple[float, float]:
    """
    Intervalo de Wilson para uma proporcao binomial

    Args:
        successes: Numero de acertos
        trials: Numero de ensaios
        confidence: Nivel de confianca

    Returns:
        (limite inferior, limite superior) em [0, 1]
    """
    if trials <= 0:
        return float('nan'), float('nan')
    z = float(norm.ppf(0.5 + confidence / 2))
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z / denom * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    return max(0.0, center - half), min(1.0, center + half)


def _build_context(config: dict[str, Any], cell: dict[str, Any], seeds: TrialSeeds) -> TrialContext:
    sensing = SensingSpec(
        ensemble=config['ensemble'], m=cell['m'], n=config['n'],
        normalize_columns=config['normalize_columns'], seed=seeds.sensing,
    )
    model = FixedRank(cell['rank']) if 'rank' in cell else Conditioned(cell['kappa'])
    signal = SignalSpec(
        n=config['n'], s=config['s'], N=config['N'], model=model,
        field='complex' if sensing.ensemble.is_fourier else 'real', seed=seeds.signal,
    )
    snr = cell.get('snr_db')
    noise = NoiseSpec.none(seeds.noise) if snr is None else NoiseSpec.from_snr_db(snr, seeds.noise)
    instance = generate_instance(sensing, signal, noise)
    return TrialContext(
        Y=instance.Y, A=instance.A, s=config['s'], tau=config['tau'], eta=config['eta'], J0=instance.J0,
    )


def run_trial(config: dict[str, Any], cell: dict[str, Any], trial: int) -> list[dict[str, Any]]:
    """
    Executa todos os algoritmos da configuracao em um ensaio

    Funcao de modulo com argumentos serializaveis (usada pelo pool de processos).
    Erros de qualquer modulo sao registrados no ensaio sem interromper a varredura.

    Args:
        config: SweepConfig.to_dict()
        cell: Parametros da celula
        trial: Indice do ensaio

    Returns:
        Um TrialRecord (dicionario) por algoritmo
    """
    handler = ErrorHandler(raise_on_error=False)
    seeds = trial_seeds(config['base_seed'], cell, trial)
    context = f"celula={cell} ensaio={trial}"
    base = dict(cell, trial=trial, seed=seeds.trial_seed)

    try:
        ctx = _build_context(config, cell, seeds)
    except Exception as e:
        handler.handle_error(e, context)
        message = f"{type(e).__name__}: {e}"
        return [
            dict(base, algorithm=name, J=None, exact_match=False, wall_time=None, r_estimated=None, error=message)
            for name in config['algorithms']
        ]

    if any(ALGORITHMS[name].uses_estimate for name in config['algorithms']):
        start = time.perf_counter()
        try:
            ctx.estimate = estimate_signal_subspace(ctx.Y, ctx.tau)
        except Exception as e:
            ctx.estimate_error = handler.handle_error(e, f"{context} estimacao")
        ctx.estimate_seconds = time.perf_counter() - start

    records = []
    for name in config['algorithms']:
        spec = ALGORITHMS[name]
        J: SupportSet | None = None
        error = None
        start = time.perf_counter()
        try:
            if spec.uses_estimate and ctx.estimate_error is not None:
                raise ctx.estimate_error
            J = spec.run(ctx)
        except Exception as e:
            handler.handle_error(e, f"{context} algoritmo={name}")
            error = f"{type(e).__name__}: {e}"
        elapsed = time.perf_counter() - start
        if spec.uses_estimate:
            elapsed += ctx.estimate_seconds

        exact = J is not None and support_match(J, ctx.J0)
        logger.log_recovery(name, len(J) if J is not None else 0, exact)
        records.append(dict(
            base,
            algorithm=name,
            J=None if J is None else str(J),
            exact_match=bool(exact),
            wall_time=elapsed if config['timing'] else None,
            r_estimated=None if ctx.estimate is None else ctx.estimate.r,
            error=error,
        ))
    return records


def aggregate_results(records: list[dict[str, Any]], config: SweepConfig) -> pd.DataFrame:
    """
    Agrega TrialRecords em uma linha por celula e algoritmo

    Args:
        records: Registros de run_trial
        config: Configuracao da varredura (define ordem de celulas e algoritmos)

    Returns:
        DataFrame com taxa de sucesso, intervalo de Wilson e mediana de tempo
    """
    model_key = config.model_key
    grouped: dict[tuple, list[dict[str, Any]]] = {}
    for record in records:
        key = (record['snr_db'], record[model_key], record['m'], record['algorithm'])
        grouped.setdefault(key, []).append(record)

    rows = []
    for cell in config.cells():
        for name in config.algorithms:
            group = grouped.get((cell['snr_db'], cell[model_key], cell['m'], name), [])
            successes = sum(1 for r in group if r['exact_match'])
            failures = sum(1 for r in group if r['error'] is not None)
            trials = len(group)
            ci_lo, ci_hi = wilson_interval(successes, trials)
            times = [r['wall_time'] for r in group if r['wall_time'] is not None]
            rows.append({
                'snr_db': cell['snr_db'],
                model_key: cell[model_key],
                'm': cell['m'],
                'algorithm': name,
                'trials': trials,
                'successes': successes,
                'failures': failures,
                'success_rate': successes / trials if trials else float('nan'),
                'ci_lo': ci_lo,
                'ci_hi': ci_hi,
                'median_ms': float(np.median(times) * 1000.0) if config.timing and times else float('nan'),
            })
    return pd.DataFrame(rows)


class SweepRunner:
    """
    Executa varreduras e grava results.csv, trials.jsonl e (opcional) trials.parquet

    Attributes:
        n_workers: Numero de workers (1 = serial)
        progress: Exibe barra de progresso
        execution_history: Lista de execucoes anteriores
    """

    def __init__(self, n_workers: int = 1, progress: bool = False):
        self.n_workers = n_workers
        self.progress = progress
        self.exporter = DataExporter()
        self.execution_history: list[dict[str, Any]] = []

    def run(self, config: SweepConfig, out_path: str | Path) -> dict[str, Any]:
        """
        Executa varredura completa

        Args:
            config: Configuracao validada
            out_path: Caminho do CSV agregado; trials.jsonl fica no mesmo diretorio

        Returns:
            Dicionario com status, tabela agregada, registros, caminhos e duracao
        """
        start_time = time.time()
        out_path = Path(out_path)
        config_dict = config.to_dict()
        cells = config.cells()
        logger.info(
            f"Iniciando varredura {config.name}: {len(cells)} celulas x {config.trials} ensaios "
            f"x {len(config.algorithms)} algoritmos"
        )

        tasks = [(config_dict, cell, trial) for cell in cells for trial in range(config.trials)]
        executor = TrialExecutor(n_workers=self.n_workers, use_processes=True, progress=self.progress)
        batches = executor.map(run_trial, tasks, desc=config.name)

        records: list[dict[str, Any]] = []
        for (_, cell, trial), batch in zip(tasks, batches):
            if batch is None:
                batch = [
                    dict(cell, trial=trial, seed=trial_seeds(config.base_seed, cell, trial).trial_seed,
                         algorithm=name, J=None, exact_match=False, wall_time=None, r_estimated=None,
                         error='WorkerError: tarefa falhou no executor')
                    for name in config.algorithms
                ]
            records.extend(batch)

        results = aggregate_results(records, config)
        metrics = SweepMetrics()
        for record in records:
            metrics.record_trial(record['algorithm'], record['exact_match'], record['error'] is not None)
        for row in results.to_dict(orient='records'):
            cell = {key: row[key] for key in ('snr_db', config.model_key, 'm', 'algorithm')}
            logger.log_cell(cell, row['success_rate'], row['trials'])

        paths = {
            'results': self.exporter.export_csv(results, out_path, schema=results_schema()),
            'trials': self.exporter.export_jsonl(records, out_path.parent / 'trials.jsonl'),
        }
        if config.parquet:
            frame = pd.DataFrame(records)
            trials_schema_report = trials_schema().validate(frame)
            if not trials_schema_report['valid']:
                logger.warning(f"Registros fora do schema: {trials_schema_report['errors']}")
            paths['parquet'] = self.exporter.export_parquet(frame, out_path.parent / 'trials.parquet')
        paths['config'] = self.exporter.export_json(
            {'config': config_dict, 'metrics': metrics.get_all_metrics()},
            out_path.with_suffix('.json'),
        )

        duration = time.time() - start_time
        failures = sum(1 for r in records if r['error'] is not None)
        logger.log_sweep(config.name, duration, len(records), failures)
        result = {
            'status': 'success',
            'name': config.name,
            'results': results,
            'records': records,
            'paths': paths,
            'failures': failures,
            'duration': duration,
        }
        self.execution_history.append(
            {k: v for k, v in result.items() if k not in ('results', 'records')} | {'records': len(records)}
        )
        return result

    def get_execution_stats(self) -> dict[str, Any]:
        """
        Estatisticas agregadas das varreduras executadas

        Returns:
            Dicionario com total de execucoes, registros, falhas e duracao media
        """
        if not self.execution_history:
            return {'total_executions': 0, 'total_records': 0, 'total_failures': 0, 'avg_duration': 0.0}
        return {
            'total_executions': len(self.execution_history),
            'total_records': sum(e['records'] for e in self.execution_history),
            'total_failures': sum(e['failures'] for e in self.execution_history),
            'avg_duration': sum(e['duration'] for e in self.execution_history) / len(self.execution_history),
        }


def run_sweep(config: SweepConfig, out_path: str | Path, n_workers: int = 1, progress: bool = False) -> dict[str, Any]:
    """Atalho para SweepRunner(n_workers, progress).run(config, out_path)"""
    return SweepRunner(n_workers=n_workers, progress=progress).run(config, out_path)


def runtime_scaling(
    scales: list[int],
    trials: int = 10,
    algorithms: list[str] | None = None,
    N: int = 256,
    snr_db: float | None = 30.0,
    tau: float = 1e-3,
    base_seed: int = 0,
    ensemble: str = 'fourier_uniform_rows',
) -> pd.DataFrame:
    """
    Mediana do tempo por algoritmo em funcao da escala do problema

    Para cada fator f: n = 64 f, s = n / 16, m = 2 s, rank = ceil(7 s / 8).
    Os ensaios rodam em serie para nao distorcer os tempos.

    Args:
        scales: Fatores de escala (>= 1)
        trials: Ensaios por escala
        algorithms: Algoritmos medidos (padrao: music, sa-music-ssomp, sa-music-ssomsp)
        N: Numero de snapshots
        snr_db: SNR em dB (None para sem ruido)
        tau: Limiar relativo da estimacao de subespaco
        base_seed: Semente base
        ensemble: Ensemble da matriz de medicao

    Returns:
        DataFrame com uma linha por (escala, algoritmo)
    """
    if not scales or any(isinstance(f, bool) or not isinstance(f, int) or f < 1 for f in scales):
        raise InvalidInputError(f"Fatores de escala devem ser inteiros >= 1: {scales}", {'scales': scales})
    algorithms = list(algorithms or DEFAULT_ALGORITHMS)

    rows = []
    for f in scales:
        n = RUNTIME_BASE_N * f
        s = n // 16
        m = 2 * s
        rank = math.ceil(7 * s / 8)
        config = SweepConfig(
            name=f'runtime-x{f}', n=n, s=s, N=N, m_values=[m], ranks=[rank], snr_db=[snr_db],
            algorithms=algorithms, trials=trials, tau=tau, base_seed=base_seed, ensemble=ensemble,
        )
        config_dict = config.to_dict()
        timings = TimingCollector()
        for cell in config.cells():
            for trial in range(trials):
                for record in run_trial(config_dict, cell, trial):
                    if record['wall_time'] is not None:
                        timings.record(record['algorithm'], record['wall_time'])
        for name in algorithms:
            rows.append({
                'scale': f, 'n': n, 's': s, 'm': m, 'rank': rank,
                'algorithm': name, 'median_ms': timings.median_ms(name),
            })
        logger.info(f"Escala {f} (n={n}): {timings.summary()}")

    frame = pd.DataFrame(rows)
    report = runtime_schema().validate(frame)
    if not report['valid']:
        logger.warning(f"Tabela de tempos fora do schema: {report['errors']}")
    return frame


def recover_instance(
    instance: ProblemInstance,
    algorithm: str,
    tau: float,
    eta: float = 0.0,
    s: int | None = None
) -> dict[str, Any]:
    """
    Executa um algoritmo do registro sobre uma instancia gravada

    Args:
        instance: Instancia (A, Y, J0)
        algorithm: Nome no registro ALGORITHMS
        tau: Limiar relativo da estimacao de subespaco
        eta: Limiar de parada dos algoritmos sem s conhecido
        s: Esparsidade (padrao |J0|)

    Returns:
        Relatorio com suporte recuperado, acerto exato e espectro estimado
    """
    if algorithm not in ALGORITHMS:
        raise InvalidInputError(f"Algoritmo desconhecido: {algorithm}", {'available': list(ALGORITHMS)})
    spec = ALGORITHMS[algorithm]
    s = len(instance.J0) if s is None else s
    ctx = TrialContext(Y=instance.Y, A=instance.A, s=s, tau=tau, eta=eta, J0=instance.J0)

    start = time.perf_counter()
    if spec.uses_estimate:
        ctx.estimate = estimate_signal_subspace(ctx.Y, tau)
    J = spec.run(ctx)
    elapsed = time.perf_counter() - start

    report: dict[str, Any] = {
        'algorithm': algorithm,
        'J': list(J.indices),
        's': s,
        'tau': tau,
        'eta': eta,
        'wall_time': elapsed,
    }
    if len(instance.J0):
        report['J0'] = list(instance.J0.indices)
        report['exact_match'] = support_match(J, instance.J0)
    if ctx.estimate is not None:
        report['r_estimated'] = ctx.estimate.r
        report['eigenvalues_biased'] = [float(v) for v in ctx.estimate.eigenvalues_biased]
    logger.info(f"Recuperacao {algorithm}: J={J}")
    return report
