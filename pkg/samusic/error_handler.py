"""
Sistema de error handling para rotinas numericas e varreduras
"""

import traceback
from functools import wraps
from typing import Any, Callable

import numpy as np

from samusic.exceptions import InvalidInputError, SAMusicBaseException
from samusic.logger import get_logger

logger = get_logger('error_handler')


class ErrorHandler:
    """Handler centralizado de erros por ensaio"""

    def __init__(self, raise_on_error: bool = True):
        self.raise_on_error = raise_on_error
        self.errors: list[dict[str, Any]] = []

    def handle_error(self, error: Exception, context: str = '', reraise: bool | None = None) -> Exception | None:
        """
        Trata erro e registra

        Args:
            error: Excecao capturada
            context: Contexto do erro (ex.: celula e ensaio)
            reraise: Se deve re-lancar a excecao

        Returns:
            Exception se nao re-lancada
        """
        should_reraise = reraise if reraise is not None else self.raise_on_error

        error_info = {
            'type': type(error).__name__,
            'message': str(error),
            'context': context,
            'details': getattr(error, 'details', {}),
            'traceback': traceback.format_exc(),
        }
        self.errors.append(error_info)

        logger.warning(f"Erro no contexto '{context}': {type(error).__name__}: {error}")

        if should_reraise:
            raise error

        return error

    def get_error_summary(self) -> dict[str, Any]:
        """
        Retorna resumo de erros

        Returns:
            Dicionario com resumo
        """
        return {
            'total_errors': len(self.errors),
            'errors_by_type': self._group_errors_by_type(),
            'recent_errors': self.errors[-5:] if self.errors else [],
        }

    def _group_errors_by_type(self) -> dict[str, int]:
        """Agrupa erros por tipo"""
        error_types: dict[str, int] = {}
        for error in self.errors:
            error_types[error['type']] = error_types.get(error['type'], 0) + 1
        return error_types

    def clear_errors(self):
        """Limpa historico de erros"""
        self.errors = []


def handle_numeric_errors(context: str = '', error_type: type = InvalidInputError):
    """
    Decorator que converte falhas de LAPACK e de numpy em excecoes do pacote

    Args:
        context: Contexto da operacao
        error_type: Tipo de excecao a lancar
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs) -> Any:
            try:
                return func(*args, **kwargs)
            except SAMusicBaseException:
                raise
            except (np.linalg.LinAlgError, ValueError, FloatingPointError) as e:
                where = context or func.__name__
                logger.error(f"Erro numerico em {where}: {e}")
                raise error_type(f"Erro numerico em {where}: {e}", {'original_error': str(e)}) from e
        return wrapper
    return decorator
