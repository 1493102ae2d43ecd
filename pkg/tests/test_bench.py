"""
Testes para configuracao, sementes, metricas e harness de varreduras
"""

import json
import shutil
import tempfile
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from samusic.bench import (
    ALGORITHMS,
    SweepRunner,
    recover_instance,
    run_sweep,
    run_trial,
    runtime_scaling,
    wilson_interval,
)
from samusic.config import ALGORITHM_NAMES, SweepConfig
from samusic.exceptions import ConfigurationError, InvalidInputError
from samusic.metrics import SweepMetrics, TimingCollector
from samusic.parallel import TrialExecutor
from samusic.seeding import cell_key, trial_seeds
from samusic.sensing import SensingSpec
from samusic.signal_model import FixedRank, NoiseSpec, SignalSpec, generate_instance


def small_config(**overrides) -> SweepConfig:
    """Varredura gaussiana pequena e sem ruido"""
    params = dict(
        name='teste', n=24, s=3, N=16, m_values=[8, 12], ranks=[2, 3],
        algorithms=['music', 'sa-music-ssomsp', 'ra-ormp'], trials=3,
        ensemble='gaussian', timing=False,
    )
    params.update(overrides)
    return SweepConfig(**params)


def _square(x):
    return x * x


def _fail_on_two(x):
    if x == 2:
        raise RuntimeError('falha')
    return x


class TestSweepConfig:
    """Testes para SweepConfig"""

    def test_defaults(self):
        """Testa ranks = [s] quando nenhum modelo e informado"""
        config = SweepConfig()

        assert config.ranks == [config.s]
        assert config.model_key == 'rank'
        assert config.signal_field == 'complex'
        assert config.snr_db == [None]

    def test_scalar_snr_wrapped(self):
        assert small_config(snr_db=20).snr_db == [20.0]

    def test_cells_order(self):
        """Testa ordem (snr, modelo, m)"""
        cells = small_config(snr_db=[None, 10.0]).cells()

        assert len(cells) == 2 * 2 * 2
        assert cells[0] == {'snr_db': None, 'rank': 2, 'm': 8}
        assert cells[1] == {'snr_db': None, 'rank': 2, 'm': 12}
        assert cells[2] == {'snr_db': None, 'rank': 3, 'm': 8}
        assert cells[4]['snr_db'] == 10.0

    def test_kappa_model(self):
        config = small_config(ranks=None, kappas=[1, 10.0])

        assert config.model_key == 'kappa'
        assert config.cells()[0] == {'snr_db': None, 'kappa': 1.0, 'm': 8}

    @pytest.mark.parametrize('overrides', [
        {'s': 30},
        {'m_values': [3]},
        {'m_values': []},
        {'ranks': [4]},
        {'ranks': [2], 'kappas': [2.0]},
        {'ranks': None, 'kappas': [0.5]},
        {'algorithms': ['nao-existe']},
        {'algorithms': ['music', 'music']},
        {'tau': 0.0},
        {'eta': 1.5},
        {'base_seed': -1},
        {'base_seed': 2 ** 64},
        {'ensemble': 'bernoulli'},
        {'trials': 0},
        {'n': True},
    ])
    def test_invalid(self, overrides):
        """Testa rejeicao de parametros invalidos"""
        with pytest.raises(ConfigurationError):
            small_config(**overrides)

    def test_tau_above_one_accepted(self):
        assert small_config(tau=2.0).tau == 2.0

    def test_from_dict_unknown_key(self):
        with pytest.raises(ConfigurationError):
            SweepConfig.from_dict({'n': 24, 'foo': 1})

    def test_from_dict_round_trip(self):
        config = small_config()

        assert SweepConfig.from_dict(config.to_dict()) == config


class TestConfigFiles:
    """Testes de leitura de configuracao em JSON"""

    @pytest.fixture
    def temp_dir(self):
        temp = tempfile.mkdtemp()
        yield temp
        shutil.rmtree(temp)

    def test_from_json(self, temp_dir):
        path = Path(temp_dir) / 'sweep.json'
        path.write_text(json.dumps({'n': 24, 's': 3, 'm_values': [8], 'ensemble': 'gaussian'}))

        config = SweepConfig.from_json(path)

        assert config.n == 24
        assert config.ranks == [3]

    def test_missing_file(self, temp_dir):
        with pytest.raises(ConfigurationError):
            SweepConfig.from_json(Path(temp_dir) / 'nao_existe.json')

    def test_invalid_json(self, temp_dir):
        path = Path(temp_dir) / 'ruim.json'
        path.write_text('{n: 1')

        with pytest.raises(ConfigurationError):
            SweepConfig.from_json(path)

    def test_not_an_object(self, temp_dir):
        path = Path(temp_dir) / 'lista.json'
        path.write_text('[1, 2]')

        with pytest.raises(ConfigurationError):
            SweepConfig.from_json(path)


class TestSeeding:
    """Testes para derivacao de sementes"""

    def test_deterministic(self):
        cell = {'m': 10, 'rank': 2, 'snr_db': None}

        assert trial_seeds(0, cell, 3) == trial_seeds(0, dict(reversed(list(cell.items()))), 3)

    def test_distinct_streams(self):
        """Testa sementes distintas entre ensaios, celulas e fontes"""
        cell = {'m': 10, 'rank': 2, 'snr_db': None}
        a = trial_seeds(0, cell, 0)
        b = trial_seeds(0, cell, 1)
        c = trial_seeds(0, dict(cell, m=11), 0)
        d = trial_seeds(1, cell, 0)

        assert len({a.trial_seed, b.trial_seed, c.trial_seed, d.trial_seed}) == 4
        assert len({a.sensing, a.signal, a.noise}) == 3
        assert 0 <= a.trial_seed < 2 ** 64

    def test_cell_key_stable(self):
        assert cell_key({'a': 1, 'b': None}) == cell_key({'b': None, 'a': 1})

    def test_negative_rejected(self):
        with pytest.raises(InvalidInputError):
            trial_seeds(-1, {}, 0)


class TestMetrics:
    """Testes para coletores de metricas"""

    def test_timing_collector(self):
        timings = TimingCollector()
        timings.record('music', 0.001)
        timings.record('music', 0.003)
        timings.record('music', 0.002)
        with timings.section('ssomsp'):
            pass

        assert timings.median_ms('music') == pytest.approx(2.0)
        assert timings.last('music') == 0.002
        assert np.isnan(timings.median_ms('ausente'))
        assert timings.summary()['music']['count'] == 3
        assert timings.summary()['ssomsp']['count'] == 1

    def test_sweep_metrics(self):
        metrics = SweepMetrics()
        metrics.record_trial('music', True)
        metrics.record_trial('music', False, failed=True)

        data = metrics.get_all_metrics()

        assert data['music'] == {'trials': 2, 'successes': 1, 'failures': 1, 'success_rate': 0.5}
        assert np.isnan(metrics.success_rate('ausente'))


class TestTrialExecutor:
    """Testes para TrialExecutor"""

    def test_serial_order(self):
        results = TrialExecutor(n_workers=1).map(_square, [(i,) for i in range(5)])

        assert results == [0, 1, 4, 9, 16]

    def test_threads_order(self):
        """Testa ordem deterministica com workers em paralelo"""
        results = TrialExecutor(n_workers=4, use_processes=False).map(_square, [(i,) for i in range(20)])

        assert results == [i * i for i in range(20)]

    def test_failed_task_is_none(self):
        executor = TrialExecutor(n_workers=1)

        results = executor.map(_fail_on_two, [(1,), (2,), (3,)])

        assert results == [1, None, 3]
        assert executor.failed_tasks == [1]


class TestWilson:
    """Testes para intervalo de Wilson"""

    def test_bounds(self):
        lo, hi = wilson_interval(7, 10)

        assert 0.0 <= lo < 0.7 < hi <= 1.0

    def test_extremes(self):
        lo, hi = wilson_interval(10, 10)

        assert hi == pytest.approx(1.0)
        assert lo == pytest.approx(10 / (10 + 1.959964 ** 2), rel=1e-5)
        assert wilson_interval(0, 10)[0] == pytest.approx(0.0, abs=1e-12)

    def test_no_trials(self):
        assert all(np.isnan(v) for v in wilson_interval(0, 0))


class TestRunTrial:
    """Testes para run_trial"""

    def test_registry_matches_names(self):
        assert tuple(ALGORITHMS) == ALGORITHM_NAMES

    def test_record_fields(self):
        config = small_config(algorithms=list(ALGORITHM_NAMES), n=12, s=3, m_values=[8], ranks=[2])
        cell = config.cells()[0]

        records = run_trial(config.to_dict(), cell, 0)

        assert [r['algorithm'] for r in records] == list(ALGORITHM_NAMES)
        for record in records:
            assert record['m'] == 8
            assert record['trial'] == 0
            assert record['seed'] == trial_seeds(0, cell, 0).trial_seed
            assert record['wall_time'] is None
            if record['error'] is None:
                assert isinstance(record['J'], str)

    def test_deterministic(self):
        """Testa reprodutibilidade por (configuracao, celula, ensaio)"""
        config = small_config()
        cell = config.cells()[1]

        assert run_trial(config.to_dict(), cell, 2) == run_trial(config.to_dict(), cell, 2)

    def test_tau_above_one_fails_per_trial(self):
        """Testa tau >= 1 registrado como falha sem abortar"""
        config = small_config(tau=1.5, algorithms=['music', 'ra-ormp'])

        records = run_trial(config.to_dict(), config.cells()[0], 0)

        assert records[0]['error'] is not None
        assert records[0]['exact_match'] is False
        assert records[1]['error'] is None

    def test_timing_recorded(self):
        config = small_config(timing=True)

        records = run_trial(config.to_dict(), config.cells()[0], 0)

        assert all(r['wall_time'] >= 0 for r in records)


class TestSweepRunner:
    """Testes para SweepRunner"""

    @pytest.fixture
    def temp_dir(self):
        temp = tempfile.mkdtemp()
        yield temp
        shutil.rmtree(temp)

    def test_writes_outputs(self, temp_dir):
        out = Path(temp_dir) / 'sweep' / 'results.csv'
        config = small_config(parquet=True)

        result = SweepRunner().run(config, out)

        assert result['status'] == 'success'
        assert out.exists()
        assert (out.parent / 'trials.jsonl').exists()
        assert (out.parent / 'trials.parquet').exists()
        assert out.with_suffix('.json').exists()

        frame = pd.read_csv(out)
        assert len(frame) == len(config.cells()) * len(config.algorithms)
        assert (frame['trials'] == 3).all()
        assert frame['median_ms'].isna().all()

        lines = (out.parent / 'trials.jsonl').read_text().splitlines()
        assert len(lines) == len(config.cells()) * 3 * len(config.algorithms)

    def test_full_rank_noiseless_music_succeeds(self, temp_dir):
        """Testa MUSIC com r = s sem ruido e medidas suficientes"""
        config = small_config(m_values=[12], ranks=[3], algorithms=['music'])

        result = run_sweep(config, Path(temp_dir) / 'results.csv')

        assert result['results']['success_rate'].iloc[0] == 1.0

    def test_byte_identical_without_timing(self, temp_dir):
        """Testa CSV identico em duas execucoes com timing desligado"""
        config = small_config()
        first = Path(temp_dir) / 'a' / 'results.csv'
        second = Path(temp_dir) / 'b' / 'results.csv'

        run_sweep(config, first)
        run_sweep(config, second)

        assert first.read_bytes() == second.read_bytes()
        assert (first.parent / 'trials.jsonl').read_bytes() == (second.parent / 'trials.jsonl').read_bytes()

    def test_serial_equals_parallel(self, temp_dir):
        """Testa tabela identica com 1 e 2 processos"""
        config = small_config()
        serial = Path(temp_dir) / 'serial' / 'results.csv'
        parallel = Path(temp_dir) / 'parallel' / 'results.csv'

        run_sweep(config, serial, n_workers=1)
        run_sweep(config, parallel, n_workers=2)

        assert serial.read_bytes() == parallel.read_bytes()

    def test_failures_counted(self, temp_dir):
        config = small_config(tau=1.5, algorithms=['music'], m_values=[8], ranks=[2])

        result = run_sweep(config, Path(temp_dir) / 'results.csv')

        assert result['failures'] == 3
        assert result['results']['failures'].iloc[0] == 3
        assert result['results']['success_rate'].iloc[0] == 0.0

    def test_execution_stats(self, temp_dir):
        runner = SweepRunner()
        config = small_config(m_values=[8], ranks=[2], algorithms=['music'])

        runner.run(config, Path(temp_dir) / 'results.csv')
        runner.run(config, Path(temp_dir) / 'again.csv')

        stats = runner.get_execution_stats()
        assert stats['total_executions'] == 2
        assert stats['total_records'] == 6

    def test_empty_stats(self):
        assert SweepRunner().get_execution_stats()['total_executions'] == 0


class TestRuntimeScaling:
    """Testes para runtime_scaling"""

    def test_rows(self):
        frame = runtime_scaling([1], trials=2, algorithms=['music', 'ra-ormp'], N=16, ensemble='gaussian')

        assert list(frame.columns) == ['scale', 'n', 's', 'm', 'rank', 'algorithm', 'median_ms']
        assert frame['n'].tolist() == [64, 64]
        assert frame['s'].tolist() == [4, 4]
        assert frame['m'].tolist() == [8, 8]
        assert frame['rank'].tolist() == [4, 4]
        assert (frame['median_ms'] > 0).all()

    @pytest.mark.slow
    def test_time_grows_with_scale(self):
        """Testa mediana na escala 4 >= escala 1 para cada algoritmo"""
        algorithms = ['music', 'sa-music-ssomp', 'sa-music-ssomsp']

        frame = runtime_scaling([1, 4], trials=5, algorithms=algorithms)

        assert len(frame) == 2 * len(algorithms)
        times = frame.pivot(index='algorithm', columns='scale', values='median_ms')
        assert (times[4] >= times[1]).all()
        assert frame[frame['scale'] == 4]['n'].unique().tolist() == [256]

    def test_invalid_scales(self):
        with pytest.raises(InvalidInputError):
            runtime_scaling([0])
        with pytest.raises(InvalidInputError):
            runtime_scaling([])


class TestRecoverInstance:
    """Testes para recover_instance"""

    def test_report(self):
        instance = generate_instance(
            SensingSpec('gaussian', 16, 40, seed=5),
            SignalSpec(n=40, s=4, N=32, model=FixedRank(4), field='real', seed=6),
            NoiseSpec.none(),
        )

        report = recover_instance(instance, 'music', tau=1e-3)

        assert report['exact_match'] is True
        assert report['J'] == list(instance.J0.indices)
        assert report['r_estimated'] == 4
        assert len(report['eigenvalues_biased']) == 16

    def test_unknown_algorithm(self):
        instance = generate_instance(
            SensingSpec('gaussian', 8, 12, seed=1),
            SignalSpec(n=12, s=2, N=8, model=FixedRank(2), field='real', seed=2),
            NoiseSpec.none(),
        )

        with pytest.raises(InvalidInputError):
            recover_instance(instance, 'nao-existe', tau=1e-3)
