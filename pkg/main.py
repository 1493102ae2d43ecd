#!/usr/bin/env python
"""
CLI para geracao de instancias, recuperacao de suporte e varreduras
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from samusic.analysis import weak1_ric
from samusic.bench import ALGORITHMS, recover_instance, run_sweep, runtime_scaling
from samusic.cmx import read_cmx, write_cmx
from samusic.config import SweepConfig
from samusic.exceptions import ConfigurationError, SAMusicBaseException
from samusic.export import DataExporter
from samusic.guarantees import (
    MeasurementEnsemble,
    Regime,
    asymptotic_oversampling,
    guarantee_curve,
    min_measurements,
    oversampling_constants,
)
from samusic.linalg import SupportSet
from samusic.logger import get_logger
from samusic.schema import curve_schema, runtime_schema
from samusic.seeding import trial_seeds
from samusic.sensing import Ensemble, SensingSpec, generate
from samusic.signal_model import (
    Conditioned,
    FixedRank,
    NoiseSpec,
    SignalSpec,
    generate_instance,
    load_instance,
    save_instance,
)
from samusic.subspace import estimate_signal_subspace

logger = get_logger('main')

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2


def _int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(',') if tok.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"Lista de inteiros invalida: {text}") from e


def create_parser():
    """Cria parser de argumentos CLI"""
    parser = argparse.ArgumentParser(
        prog='samusic',
        description='Recuperacao conjunta de suporte esparso (MUSIC / SA-MUSIC) e experimentos Monte-Carlo'
    )
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('gen-matrix', help='Gera matriz de medicao em CMX')
    p.add_argument('--ensemble', default=Ensemble.FOURIER_UNIFORM_ROWS.value, choices=[e.value for e in Ensemble])
    p.add_argument('--m', type=int, required=True, help='Numero de linhas')
    p.add_argument('--n', type=int, required=True, help='Numero de colunas')
    p.add_argument('--seed', type=int, default=0, help='Semente (padrao: 0)')
    p.add_argument('--normalize', action=argparse.BooleanOptionalAction, default=True,
                   help='Normaliza colunas (padrao: sim)')
    p.add_argument('--out', required=True, help='Arquivo CMX de saida')

    p = sub.add_parser('gen-instance', help='Gera instancia (A, X0, W, Y) em diretorio')
    p.add_argument('--ensemble', default=Ensemble.FOURIER_UNIFORM_ROWS.value, choices=[e.value for e in Ensemble])
    p.add_argument('--m', type=int, required=True)
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--s', type=int, required=True)
    p.add_argument('--N', type=int, default=256, help='Numero de snapshots (padrao: 256)')
    model = p.add_mutually_exclusive_group()
    model.add_argument('--rank', type=int, help='Posto de X0 nas linhas do suporte (padrao: s)')
    model.add_argument('--kappa', type=float, help='Numero de condicao (posto completo)')
    p.add_argument('--snr-db', type=float, default=None, help='SNR em dB (padrao: sem ruido)')
    p.add_argument('--normalize', action=argparse.BooleanOptionalAction, default=True)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--out', required=True, help='Diretorio de saida')

    p = sub.add_parser('subspace', help='Estima subespaco de sinal de Y')
    p.add_argument('--in', dest='input', required=True, help='Arquivo CMX com Y')
    p.add_argument('--tau', type=float, default=1e-3, help='Limiar relativo (padrao: 0.001)')
    p.add_argument('--out', required=True, help='Arquivo CMX da base; JSON com espectro ao lado')

    p = sub.add_parser('recover', help='Recupera suporte de uma instancia')
    p.add_argument('--algo', required=True, choices=list(ALGORITHMS))
    p.add_argument('--instance', required=True, help='Diretorio da instancia')
    p.add_argument('--tau', type=float, default=1e-3)
    p.add_argument('--eta', type=float, default=0.0)
    p.add_argument('--s', type=int, default=None, help='Esparsidade (padrao: |J0| da instancia)')
    p.add_argument('--out', required=True, help='Relatorio JSON')

    p = sub.add_parser('rip', help='RICs weak-1 de A em um suporte')
    p.add_argument('--matrix', required=True, help='Arquivo CMX com A')
    p.add_argument('--support', required=True, help="Suporte 1-based, ex.: '1,5,9'")
    p.add_argument('--out', required=True, help='Relatorio JSON')

    p = sub.add_parser('curve', help='Curva de garantia eta_max(delta)')
    p.add_argument('--regime', required=True, choices=[r.value for r in Regime])
    p.add_argument('--points', type=int, default=100, help='Numero de valores de delta em [0, 1)')
    p.add_argument('--s', type=int)
    p.add_argument('--r', type=int)
    p.add_argument('--rho', type=float)
    p.add_argument('--n', type=int)
    p.add_argument('--N', type=int)
    p.add_argument('--epsilon', type=float)
    p.add_argument('--out', required=True, help='CSV de saida')

    p = sub.add_parser('complexity', help='Numero minimo de medidas')
    p.add_argument('--ensemble', required=True, choices=[e.value for e in MeasurementEnsemble])
    p.add_argument('--s', type=int, required=True)
    p.add_argument('--n', type=int, required=True)
    p.add_argument('--epsilon', type=float, required=True)
    p.add_argument('--delta', type=float)
    p.add_argument('--gamma', type=float)
    p.add_argument('--K', type=float, default=1.0)
    p.add_argument('--form', default='cond2', choices=['cond1', 'cond2'])
    p.add_argument('--out', required=True, help='Relatorio JSON')

    p = sub.add_parser('sweep', help='Executa varredura Monte-Carlo a partir de JSON')
    p.add_argument('--config', required=True, help='Arquivo JSON com SweepConfig')
    p.add_argument('--out', required=True, help='CSV agregado (trials.jsonl no mesmo diretorio)')
    p.add_argument('--jobs', type=int, default=1, help='Numero de processos (padrao: 1)')
    p.add_argument('--progress', action='store_true', help='Exibe barra de progresso')

    p = sub.add_parser('runtime', help='Tempo de execucao por escala do problema')
    p.add_argument('--scales', type=_int_list, required=True, help="Fatores de escala, ex.: '1,2,4'")
    p.add_argument('--trials', type=int, default=10)
    p.add_argument('--algorithms', default=None, help='Lista separada por virgulas')
    p.add_argument('--N', type=int, default=256)
    p.add_argument('--snr-db', type=float, default=30.0)
    p.add_argument('--out', required=True, help='CSV de saida')

    parser.add_argument('--verbose', action='store_true', help='Modo verbose')
    return parser


def cmd_gen_matrix(args, exporter: DataExporter) -> int:
    spec = SensingSpec(ensemble=args.ensemble, m=args.m, n=args.n, normalize_columns=args.normalize, seed=args.seed)
    A = generate(spec)
    write_cmx(args.out, A)
    logger.info(f"Matriz {spec.ensemble.value} {args.m}x{args.n} gravada em {args.out}")
    return EXIT_OK


def cmd_gen_instance(args, exporter: DataExporter) -> int:
    cell = {
        'ensemble': args.ensemble, 'm': args.m, 'n': args.n, 's': args.s, 'N': args.N,
        'rank': args.rank, 'kappa': args.kappa, 'snr_db': args.snr_db,
    }
    seeds = trial_seeds(args.seed, cell, 0)
    sensing = SensingSpec(args.ensemble, args.m, args.n, normalize_columns=args.normalize, seed=seeds.sensing)
    model = Conditioned(args.kappa) if args.kappa is not None else FixedRank(args.rank or args.s)
    signal = SignalSpec(
        n=args.n, s=args.s, N=args.N, model=model,
        field='complex' if sensing.ensemble.is_fourier else 'real', seed=seeds.signal,
    )
    noise = NoiseSpec.none(seeds.noise) if args.snr_db is None else NoiseSpec.from_snr_db(args.snr_db, seeds.noise)
    instance = generate_instance(sensing, signal, noise)
    save_instance(instance, args.out)
    return EXIT_OK


def cmd_subspace(args, exporter: DataExporter) -> int:
    Y = read_cmx(args.input)
    estimate = estimate_signal_subspace(Y, args.tau)
    out = Path(args.out)
    write_cmx(out, estimate.basis.columns)
    exporter.export_json(
        {
            'r': estimate.r,
            'tau': estimate.tau,
            'eigenvalues_biased': [float(v) for v in estimate.eigenvalues_biased],
            'rank_deficient_covariance': estimate.rank_deficient_covariance,
        },
        out.with_suffix('.json'),
    )
    logger.info(f"Subespaco estimado: r={estimate.r}")
    return EXIT_OK


def cmd_recover(args, exporter: DataExporter) -> int:
    instance = load_instance(args.instance)
    report = recover_instance(instance, args.algo, tau=args.tau, eta=args.eta, s=args.s)
    exporter.export_json(report, args.out)
    return EXIT_OK


def cmd_rip(args, exporter: DataExporter) -> int:
    A = read_cmx(args.matrix)
    J = SupportSet.parse(args.support, A.shape[1])
    ric = weak1_ric(A, J)
    exporter.export_json(ric.to_dict(), args.out)
    logger.info(f"RIC weak-1: delta={ric.delta:.6g} alpha={ric.alpha:.6g} beta={ric.beta:.6g}")
    return EXIT_OK


def cmd_curve(args, exporter: DataExporter) -> int:
    if args.points < 2:
        raise ConfigurationError(f"--points deve ser >= 2, recebido {args.points}")
    deltas = np.linspace(0.0, 1.0, args.points, endpoint=False)
    params = {k: getattr(args, k) for k in ('s', 'r', 'rho', 'n', 'N', 'epsilon') if getattr(args, k) is not None}
    curve = guarantee_curve(args.regime, deltas, **params)
    exporter.export_csv(curve.to_frame(), args.out, schema=curve_schema())
    return EXIT_OK


def cmd_complexity(args, exporter: DataExporter) -> int:
    m = min_measurements(
        args.ensemble, args.s, args.n, args.epsilon,
        delta=args.delta, gamma=args.gamma, K=args.K, form=args.form,
    )
    report = {
        'ensemble': args.ensemble, 's': args.s, 'n': args.n, 'epsilon': args.epsilon,
        'delta': args.delta, 'gamma': args.gamma, 'K': args.K, 'form': args.form, 'm': m,
    }
    target = args.gamma if args.ensemble == MeasurementEnsemble.GAUSSIAN_ASYMMETRIC.value else args.delta
    try:
        report['C1'], report['C2'] = oversampling_constants(args.ensemble, target, args.s, args.n, args.epsilon, args.K)
        report['asymptotic_oversampling'] = asymptotic_oversampling(args.ensemble, target, args.form)
    except SAMusicBaseException as e:
        logger.debug(f"Constantes indisponiveis para {args.ensemble}: {e}")
    exporter.export_json(report, args.out)
    logger.info(f"m minimo ({args.ensemble}): {m}")
    return EXIT_OK


def cmd_sweep(args, exporter: DataExporter) -> int:
    config = SweepConfig.from_json(args.config)
    result = run_sweep(config, args.out, n_workers=args.jobs, progress=args.progress)
    if result['failures']:
        logger.warning(f"{result['failures']} registros com falha (ver trials.jsonl)")
    return EXIT_OK


def cmd_runtime(args, exporter: DataExporter) -> int:
    algorithms = [a.strip() for a in args.algorithms.split(',')] if args.algorithms else None
    if algorithms:
        unknown = [a for a in algorithms if a not in ALGORITHMS]
        if unknown:
            raise ConfigurationError(f"Algoritmos desconhecidos: {unknown}", {'unknown': unknown})
    frame = runtime_scaling(args.scales, trials=args.trials, algorithms=algorithms, N=args.N, snr_db=args.snr_db)
    exporter.export_csv(frame, args.out, schema=runtime_schema())
    return EXIT_OK


COMMANDS = {
    'gen-matrix': cmd_gen_matrix,
    'gen-instance': cmd_gen_instance,
    'subspace': cmd_subspace,
    'recover': cmd_recover,
    'rip': cmd_rip,
    'curve': cmd_curve,
    'complexity': cmd_complexity,
    'sweep': cmd_sweep,
    'runtime': cmd_runtime,
}


def main(argv: list[str] | None = None) -> int:
    """Funcao principal; retorna codigo de saida"""
    parser = create_parser()
    args = parser.parse_args(argv)

    if args.verbose:
        logger.logger.setLevel('DEBUG')

    logger.info(f"Comando: {args.command}")
    try:
        return COMMANDS[args.command](args, DataExporter())
    except ConfigurationError as e:
        logger.error(f"Configuracao invalida: {e}")
        return EXIT_CONFIG
    except SAMusicBaseException as e:
        logger.error(f"Erro: {e}")
        return EXIT_ERROR


if __name__ == '__main__':
    sys.exit(main())
