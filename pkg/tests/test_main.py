"""
Testes para a CLI
"""

import json
import shutil
import tempfile
from pathlib import Path

import pandas as pd
import pytest

from main import EXIT_CONFIG, EXIT_ERROR, EXIT_OK, create_parser, main
from samusic.cmx import read_cmx, write_cmx


@pytest.fixture
def temp_dir():
    """Diretorio temporario"""
    temp = tempfile.mkdtemp()
    yield Path(temp)
    shutil.rmtree(temp)


def gen_instance(directory: Path, *extra: str) -> Path:
    out = directory / 'instance'
    code = main([
        'gen-instance', '--ensemble', 'gaussian', '--m', '16', '--n', '40', '--s', '4',
        '--N', '32', '--seed', '7', '--out', str(out), *extra,
    ])
    assert code == EXIT_OK
    return out


class TestParser:
    """Testes para create_parser"""

    def test_requires_command(self):
        with pytest.raises(SystemExit):
            create_parser().parse_args([])

    def test_rank_and_kappa_exclusive(self):
        with pytest.raises(SystemExit):
            create_parser().parse_args([
                'gen-instance', '--m', '8', '--n', '16', '--s', '2', '--rank', '2', '--kappa', '3', '--out', 'x'
            ])

    def test_scales_list(self):
        args = create_parser().parse_args(['runtime', '--scales', '1,2,4', '--out', 'x.csv'])

        assert args.scales == [1, 2, 4]


class TestCommands:
    """Testes de ponta a ponta por subcomando"""

    def test_gen_matrix(self, temp_dir):
        out = temp_dir / 'A.cmx'

        assert main(['gen-matrix', '--ensemble', 'fourier_bunched_rows', '--m', '6', '--n', '16', '--out', str(out)]) == 0

        A = read_cmx(out)
        assert A.shape == (6, 16)

    def test_gen_instance_reproducible(self, temp_dir):
        """Testa mesma semente com mesma instancia"""
        first = gen_instance(temp_dir / 'a')
        second = gen_instance(temp_dir / 'b')

        assert (first / 'Y.cmx').read_text() == (second / 'Y.cmx').read_text()
        assert json.loads((first / 'instance.json').read_text())['J0'] == \
            json.loads((second / 'instance.json').read_text())['J0']

    def test_recover_music(self, temp_dir):
        instance = gen_instance(temp_dir)
        out = temp_dir / 'report.json'

        assert main(['recover', '--algo', 'music', '--instance', str(instance), '--out', str(out)]) == EXIT_OK

        report = json.loads(out.read_text())
        assert report['exact_match'] is True
        assert report['r_estimated'] == 4

    def test_recover_sa_music_rank_deficient(self, temp_dir):
        instance = gen_instance(temp_dir, '--rank', '2')
        out = temp_dir / 'report.json'

        code = main(['recover', '--algo', 'sa-music-oracle', '--instance', str(instance), '--out', str(out)])

        assert code == EXIT_OK
        report = json.loads(out.read_text())
        assert report['r_estimated'] == 2
        assert report['exact_match'] is True

    def test_subspace(self, temp_dir):
        instance = gen_instance(temp_dir, '--rank', '3')
        out = temp_dir / 'S.cmx'

        assert main(['subspace', '--in', str(instance / 'Y.cmx'), '--out', str(out)]) == EXIT_OK

        assert read_cmx(out).shape == (16, 3)
        spectrum = json.loads(out.with_suffix('.json').read_text())
        assert spectrum['r'] == 3
        assert len(spectrum['eigenvalues_biased']) == 16

    def test_rip(self, temp_dir):
        matrix = temp_dir / 'I.cmx'
        write_cmx(matrix, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
        out = temp_dir / 'rip.json'

        assert main(['rip', '--matrix', str(matrix), '--support', '1', '--out', str(out)]) == EXIT_OK

        assert json.loads(out.read_text())['delta'] == pytest.approx(0.0)

    def test_curve(self, temp_dir):
        out = temp_dir / 'curve.csv'

        code = main(['curve', '--regime', 'sa_music_ssomsp', '--s', '8', '--r', '4', '--points', '20', '--out', str(out)])

        assert code == EXIT_OK
        frame = pd.read_csv(out)
        assert len(frame) == 20
        assert frame['eta_max'].is_monotonic_decreasing

    def test_complexity(self, temp_dir):
        out = temp_dir / 'm.json'

        code = main([
            'complexity', '--ensemble', 'gaussian', '--s', '8', '--n', '256',
            '--epsilon', '0.01', '--delta', '0.5', '--out', str(out),
        ])

        assert code == EXIT_OK
        report = json.loads(out.read_text())
        assert report['m'] > 8
        assert 'C1' in report

    def test_sweep(self, temp_dir):
        config = temp_dir / 'sweep.json'
        config.write_text(json.dumps({
            'name': 'cli', 'n': 20, 's': 3, 'N': 16, 'm_values': [8], 'trials': 2,
            'ensemble': 'gaussian', 'algorithms': ['music'], 'timing': False,
        }))
        out = temp_dir / 'out' / 'results.csv'

        assert main(['sweep', '--config', str(config), '--out', str(out)]) == EXIT_OK

        assert len(pd.read_csv(out)) == 1
        assert (out.parent / 'trials.jsonl').exists()


class TestExitCodes:
    """Testes para codigos de saida"""

    def test_bad_config(self, temp_dir):
        config = temp_dir / 'sweep.json'
        config.write_text(json.dumps({'n': 20, 's': 3, 'tau': -1.0}))

        assert main(['sweep', '--config', str(config), '--out', str(temp_dir / 'r.csv')]) == EXIT_CONFIG

    def test_missing_config(self, temp_dir):
        code = main(['sweep', '--config', str(temp_dir / 'nada.json'), '--out', str(temp_dir / 'r.csv')])

        assert code == EXIT_CONFIG

    def test_missing_instance(self, temp_dir):
        code = main(['recover', '--algo', 'music', '--instance', str(temp_dir), '--out', str(temp_dir / 'r.json')])

        assert code == EXIT_ERROR

    def test_curve_too_few_points(self, temp_dir):
        code = main(['curve', '--regime', 'music_full_rank', '--points', '1', '--out', str(temp_dir / 'c.csv')])

        assert code == EXIT_CONFIG
