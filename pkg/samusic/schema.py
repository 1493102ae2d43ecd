"""
Schemas das tabelas produzidas pelas varreduras e calculadoras
"""

from enum import Enum
from typing import Any

import pandas as pd

from samusic.logger import get_logger

logger = get_logger('schema')


class DataType(Enum):
    """Tipos de coluna suportados"""
    STRING = 'string'
    INTEGER = 'integer'
    FLOAT = 'float'
    BOOLEAN = 'boolean'


class ColumnSchema:
    """Definicao de schema de uma coluna"""

    def __init__(
        self,
        name: str,
        dtype: DataType,
        nullable: bool = True,
        min_value: float | None = None,
        max_value: float | None = None
    ):
        self.name = name
        self.dtype = dtype
        self.nullable = nullable
        self.min_value = min_value
        self.max_value = max_value

    def validate(self, series: pd.Series) -> dict[str, Any]:
        """
        Valida serie contra schema

        Args:
            series: Serie para validar

        Returns:
            Dicionario com resultado da validacao
        """
        errors = []
        non_null = series.dropna()

        if not self.nullable and series.isna().any():
            errors.append(f"Coluna nao aceita nulos mas tem {int(series.isna().sum())} valores nulos")

        if self.dtype in (DataType.INTEGER, DataType.FLOAT) and not non_null.empty:
            numeric = pd.to_numeric(non_null, errors='coerce')
            if numeric.isna().any():
                errors.append(f"Valores nao numericos para tipo {self.dtype.value}")
            else:
                if self.dtype == DataType.INTEGER and (numeric != numeric.round()).any():
                    errors.append("Valores nao inteiros para tipo INTEGER")
                if self.min_value is not None and (numeric < self.min_value).any():
                    errors.append(f"Valores abaixo do minimo {self.min_value}")
                if self.max_value is not None and (numeric > self.max_value).any():
                    errors.append(f"Valores acima do maximo {self.max_value}")

        if self.dtype == DataType.BOOLEAN and not non_null.empty:
            if not non_null.map(lambda v: isinstance(v, (bool,)) or v in (0, 1)).all():
                errors.append("Valores nao booleanos para tipo BOOLEAN")

        return {'column': self.name, 'valid': len(errors) == 0, 'errors': errors}


class TableSchema:
    """Definicao de schema de uma tabela"""

    def __init__(self, name: str):
        self.name = name
        self.columns: dict[str, ColumnSchema] = {}

    def add_column(self, column: ColumnSchema) -> 'TableSchema':
        """Adiciona coluna ao schema"""
        self.columns[column.name] = column
        return self

    def validate(self, df: pd.DataFrame) -> dict[str, Any]:
        """
        Valida DataFrame contra schema

        Args:
            df: DataFrame para validar

        Returns:
            Relatorio de validacao
        """
        errors = []
        missing = [name for name in self.columns if name not in df.columns]
        if missing:
            errors.append(f"Colunas ausentes: {missing}")

        extra = [name for name in df.columns if name not in self.columns]
        if extra:
            logger.debug(f"Colunas extras em {self.name}: {extra}")

        column_results = [
            schema.validate(df[name]) for name, schema in self.columns.items() if name in df.columns
        ]
        for result in column_results:
            errors.extend(f"{result['column']}: {err}" for err in result['errors'])

        return {
            'table': self.name,
            'valid': len(errors) == 0,
            'errors': errors,
            'column_results': column_results,
            'row_count': len(df),
        }


def results_schema() -> TableSchema:
    """Uma linha por celula e algoritmo"""
    return (
        TableSchema('results')
        .add_column(ColumnSchema('m', DataType.INTEGER, nullable=False, min_value=1))
        .add_column(ColumnSchema('algorithm', DataType.STRING, nullable=False))
        .add_column(ColumnSchema('trials', DataType.INTEGER, nullable=False, min_value=1))
        .add_column(ColumnSchema('successes', DataType.INTEGER, nullable=False, min_value=0))
        .add_column(ColumnSchema('failures', DataType.INTEGER, nullable=False, min_value=0))
        .add_column(ColumnSchema('success_rate', DataType.FLOAT, nullable=False, min_value=0.0, max_value=1.0))
        .add_column(ColumnSchema('ci_lo', DataType.FLOAT, nullable=False, min_value=0.0, max_value=1.0))
        .add_column(ColumnSchema('ci_hi', DataType.FLOAT, nullable=False, min_value=0.0, max_value=1.0))
        .add_column(ColumnSchema('median_ms', DataType.FLOAT, min_value=0.0))
    )


def trials_schema() -> TableSchema:
    """Um registro por ensaio e algoritmo"""
    return (
        TableSchema('trials')
        .add_column(ColumnSchema('m', DataType.INTEGER, nullable=False, min_value=1))
        .add_column(ColumnSchema('trial', DataType.INTEGER, nullable=False, min_value=0))
        .add_column(ColumnSchema('seed', DataType.INTEGER, nullable=False, min_value=0))
        .add_column(ColumnSchema('algorithm', DataType.STRING, nullable=False))
        .add_column(ColumnSchema('J', DataType.STRING))
        .add_column(ColumnSchema('exact_match', DataType.BOOLEAN, nullable=False))
        .add_column(ColumnSchema('wall_time', DataType.FLOAT, min_value=0.0))
        .add_column(ColumnSchema('r_estimated', DataType.INTEGER, min_value=1))
        .add_column(ColumnSchema('error', DataType.STRING))
    )


def runtime_schema() -> TableSchema:
    return (
        TableSchema('runtime')
        .add_column(ColumnSchema('scale', DataType.INTEGER, nullable=False, min_value=1))
        .add_column(ColumnSchema('n', DataType.INTEGER, nullable=False, min_value=1))
        .add_column(ColumnSchema('s', DataType.INTEGER, nullable=False, min_value=1))
        .add_column(ColumnSchema('m', DataType.INTEGER, nullable=False, min_value=1))
        .add_column(ColumnSchema('rank', DataType.INTEGER, nullable=False, min_value=1))
        .add_column(ColumnSchema('algorithm', DataType.STRING, nullable=False))
        .add_column(ColumnSchema('median_ms', DataType.FLOAT, min_value=0.0))
    )


def curve_schema() -> TableSchema:
    return (
        TableSchema('curve')
        .add_column(ColumnSchema('regime', DataType.STRING, nullable=False))
        .add_column(ColumnSchema('delta', DataType.FLOAT, nullable=False, min_value=0.0, max_value=1.0))
        .add_column(ColumnSchema('eta_max', DataType.FLOAT, nullable=False, min_value=0.0, max_value=1.0))
        .add_column(ColumnSchema('noiseless_ok', DataType.BOOLEAN, nullable=False))
    )
