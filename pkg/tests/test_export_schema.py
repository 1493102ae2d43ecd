"""
Testes para schemas de tabelas e exportacao
"""

import json
import shutil
import tempfile
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from samusic.exceptions import ValidationError
from samusic.export import DataExporter
from samusic.schema import ColumnSchema, DataType, TableSchema, curve_schema, results_schema


class TestSchema:
    """Testes para validacao de schema"""

    @pytest.fixture
    def results_frame(self):
        """Tabela de resultados valida"""
        return pd.DataFrame({
            'snr_db': [np.nan, np.nan],
            'rank': [8, 8],
            'm': [10, 12],
            'algorithm': ['music', 'music'],
            'trials': [10, 10],
            'successes': [10, 9],
            'failures': [0, 0],
            'success_rate': [1.0, 0.9],
            'ci_lo': [0.72, 0.6],
            'ci_hi': [1.0, 0.98],
            'median_ms': [np.nan, np.nan],
        })

    def test_column_range_fail(self):
        """Testa validacao de range que falha"""
        col = ColumnSchema('success_rate', DataType.FLOAT, min_value=0.0, max_value=1.0)

        result = col.validate(pd.Series([0.5, 1.5]))

        assert result['valid'] is False

    def test_column_integer_type(self):
        col = ColumnSchema('m', DataType.INTEGER)

        assert col.validate(pd.Series([1, 2]))['valid'] is True
        assert col.validate(pd.Series([1.5]))['valid'] is False

    def test_column_nullable_fail(self):
        col = ColumnSchema('algorithm', DataType.STRING, nullable=False)

        assert col.validate(pd.Series(['music', None]))['valid'] is False

    def test_results_schema_pass(self, results_frame):
        """Testa tabela de resultados valida"""
        report = results_schema().validate(results_frame)

        assert report['valid'] is True
        assert report['row_count'] == 2

    def test_missing_column(self, results_frame):
        """Testa coluna obrigatoria ausente"""
        report = results_schema().validate(results_frame.drop(columns=['ci_lo']))

        assert report['valid'] is False
        assert any('ci_lo' in err for err in report['errors'])

    def test_table_schema_chaining(self):
        schema = TableSchema('t').add_column(ColumnSchema('a', DataType.BOOLEAN))

        assert schema.validate(pd.DataFrame({'a': [True, False]}))['valid'] is True
        assert 'a' in schema.columns


class TestDataExporter:
    """Testes para exportacao"""

    @pytest.fixture
    def temp_dir(self):
        """Cria diretorio temporario para testes"""
        temp_path = Path(tempfile.mkdtemp())
        yield temp_path
        shutil.rmtree(temp_path)

    def test_export_csv_creates_parent(self, temp_dir):
        """Testa criacao de diretorio pai"""
        frame = pd.DataFrame({'regime': ['mbp'], 'delta': [0.1], 'eta_max': [0.0], 'noiseless_ok': [True]})

        path = DataExporter().export_csv(frame, temp_dir / 'a' / 'curve.csv', schema=curve_schema())

        assert path.exists()
        assert pd.read_csv(path)['delta'].tolist() == [0.1]

    def test_export_csv_rejects_invalid(self, temp_dir):
        """Testa rejeicao de tabela fora do schema"""
        frame = pd.DataFrame({'regime': ['mbp'], 'delta': [1.5], 'eta_max': [0.0], 'noiseless_ok': [True]})

        with pytest.raises(ValidationError):
            DataExporter().export_csv(frame, temp_dir / 'curve.csv', schema=curve_schema())

        assert not (temp_dir / 'curve.csv').exists()

    def test_export_jsonl_numpy_values(self, temp_dir):
        """Testa conversao de escalares numpy e NaN"""
        records = [{'m': np.int64(3), 'rate': np.float64(0.5), 'missing': float('nan')}]

        path = DataExporter().export_jsonl(records, temp_dir / 'trials.jsonl')

        lines = path.read_text().splitlines()
        assert json.loads(lines[0]) == {'m': 3, 'rate': 0.5, 'missing': None}

    def test_export_json_frame(self, temp_dir):
        frame = pd.DataFrame({'x': [1, 2]})

        path = DataExporter().export_json(frame, temp_dir / 'out.json')

        assert json.loads(path.read_text()) == {'records': [{'x': 1}, {'x': 2}]}

    def test_export_parquet(self, temp_dir):
        """Testa exportacao Parquet via pyarrow"""
        frame = pd.DataFrame({'algorithm': ['music'], 'exact_match': [True]})

        path = DataExporter().export_parquet(frame, temp_dir / 'trials.parquet')

        assert pd.read_parquet(path).equals(frame)
