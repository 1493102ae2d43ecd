"""
Exportacao de tabelas de resultados para CSV, JSON, JSON Lines e Parquet
"""

import json
from pathlib import Path
from typing import Any, Iterable

import numpy as np
import pandas as pd

from samusic.exceptions import ValidationError
from samusic.logger import get_logger
from samusic.schema import TableSchema

logger = get_logger('export')


def _to_builtin(value: Any) -> Any:
    """Converte escalares numpy e NaN para tipos JSON"""
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and np.isnan(value):
        return None
    if isinstance(value, np.ndarray):
        return [_to_builtin(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_to_builtin(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _to_builtin(v) for k, v in value.items()}
    return value


class DataExporter:
    """Exportador de tabelas e documentos de resultado"""

    def __init__(self):
        self.supported_formats = ['csv', 'json', 'jsonl', 'parquet']

    def _validate(self, df: pd.DataFrame, schema: TableSchema | None):
        if schema is None:
            return
        report = schema.validate(df)
        if not report['valid']:
            raise ValidationError(f"Tabela {schema.name} invalida", {'errors': report['errors']})

    def export_csv(self, df: pd.DataFrame, file_path: str | Path, schema: TableSchema | None = None) -> Path:
        """
        Exporta para CSV (floats com repr de ida e volta exata)

        Args:
            df: DataFrame para exportar
            file_path: Caminho do arquivo
            schema: Schema opcional validado antes da escrita

        Returns:
            Caminho gravado
        """
        self._validate(df, schema)
        path = Path(file_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        df.to_csv(path, index=False, lineterminator='\n')
        logger.info(f"CSV exportado: {path}")
        return path

    def export_parquet(self, df: pd.DataFrame, file_path: str | Path, schema: TableSchema | None = None) -> Path:
        """Exporta para Parquet (pyarrow)"""
        self._validate(df, schema)
        path = Path(file_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        df.to_parquet(path, engine='pyarrow', compression='snappy', index=False)
        logger.info(f"Parquet exportado: {path}")
        return path

    def export_json(self, data: dict[str, Any] | pd.DataFrame, file_path: str | Path, indent: int = 2) -> Path:
        """Exporta documento ou DataFrame (orient=records) para JSON"""
        path = Path(file_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        if isinstance(data, pd.DataFrame):
            data = {'records': data.to_dict(orient='records')}
        path.write_text(json.dumps(_to_builtin(data), indent=indent, sort_keys=True) + '\n', encoding='utf-8')
        logger.info(f"JSON exportado: {path}")
        return path

    def export_jsonl(self, records: Iterable[dict[str, Any]], file_path: str | Path) -> Path:
        """Exporta um registro JSON por linha"""
        path = Path(file_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        count = 0
        with open(path, 'w', encoding='utf-8') as f:
            for record in records:
                f.write(json.dumps(_to_builtin(record), sort_keys=True) + '\n')
                count += 1
        logger.info(f"JSON Lines exportado: {path} ({count} registros)")
        return path
