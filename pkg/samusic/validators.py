"""
Validadores de entrada para matrizes, subespacos e frames
"""

from typing import Any

import numpy as np

from samusic.exceptions import InvalidInputError


def ensure_matrix(M: Any, name: str = 'M') -> np.ndarray:
    """
    Valida matriz densa finita com pelo menos uma linha e uma coluna

    Args:
        M: Matriz (array-like) real ou complexa
        name: Nome do argumento para mensagens

    Returns:
        Array 2D de ponto flutuante
    """
    arr = np.asarray(M)
    if arr.ndim != 2:
        raise InvalidInputError(f"{name} deve ser 2D, recebido ndim={arr.ndim}", {'argument': name, 'shape': arr.shape})
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise InvalidInputError(f"{name} vazio: shape {arr.shape}", {'argument': name, 'shape': arr.shape})
    if not np.issubdtype(arr.dtype, np.inexact):
        if not np.issubdtype(arr.dtype, np.number):
            raise InvalidInputError(f"{name} nao numerico", {'argument': name, 'dtype': str(arr.dtype)})
        arr = arr.astype(float)
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contem NaN ou Inf", {'argument': name})
    return arr


def ensure_vector(v: Any, name: str = 'v') -> np.ndarray:
    """Valida vetor 1D finito"""
    arr = np.asarray(v)
    if arr.ndim != 1 or arr.size < 1:
        raise InvalidInputError(f"{name} deve ser vetor 1D nao vazio", {'argument': name, 'shape': arr.shape})
    if not np.issubdtype(arr.dtype, np.inexact):
        arr = arr.astype(float)
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contem NaN ou Inf", {'argument': name})
    return arr


def ensure_hermitian(G: Any, name: str = 'G', rtol: float = 1e-10) -> np.ndarray:
    """
    Valida matriz quadrada hermitiana dentro de tolerancia relativa

    Args:
        G: Matriz candidata
        name: Nome do argumento
        rtol: Tolerancia relativa sobre ||G - G^H|| / ||G||

    Returns:
        Parte hermitiana (G + G^H) / 2
    """
    arr = ensure_matrix(G, name)
    if arr.shape[0] != arr.shape[1]:
        raise InvalidInputError(f"{name} deve ser quadrada, shape {arr.shape}", {'argument': name})
    scale = np.linalg.norm(arr)
    asym = np.linalg.norm(arr - arr.conj().T)
    if asym > rtol * max(scale, np.finfo(float).tiny):
        raise InvalidInputError(
            f"{name} nao e hermitiana: assimetria relativa {asym / max(scale, np.finfo(float).tiny):.3e}",
            {'argument': name, 'asymmetry': float(asym), 'norm': float(scale)}
        )
    return (arr + arr.conj().T) / 2


def ensure_same_ambient(dim_a: int, dim_b: int, names: tuple[str, str] = ('a', 'b')):
    """Valida que duas dimensoes ambientes coincidem"""
    if dim_a != dim_b:
        raise InvalidInputError(
            f"Dimensoes ambientes diferentes: {names[0]}={dim_a}, {names[1]}={dim_b}",
            {names[0]: dim_a, names[1]: dim_b}
        )


def ensure_count(value: Any, name: str, minimum: int = 0, maximum: int | None = None) -> int:
    """Valida inteiro dentro de [minimum, maximum]"""
    if isinstance(value, bool) or int(value) != value:
        raise InvalidInputError(f"{name} deve ser inteiro, recebido {value!r}", {'argument': name})
    value = int(value)
    if value < minimum or (maximum is not None and value > maximum):
        raise InvalidInputError(
            f"{name}={value} fora do intervalo [{minimum}, {maximum if maximum is not None else 'inf'}]",
            {'argument': name, 'value': value, 'minimum': minimum, 'maximum': maximum}
        )
    return value


class FrameValidator:
    """Validador de frames tight de norma unitaria com regras independentes"""

    def __init__(self, tol: float = 1e-10):
        self.tol = tol
        self.validation_results: list[dict[str, Any]] = []

    def validate_unit_columns(self, A: np.ndarray) -> dict[str, Any]:
        """
        Valida que todas as colunas tem norma l2 unitaria

        Args:
            A: Matriz m x n

        Returns:
            Dicionario com resultado da validacao
        """
        result: dict[str, Any] = {'rule': 'unit_columns', 'passed': True, 'errors': []}
        deviation = np.abs(np.linalg.norm(A, axis=0) - 1.0)
        bad = np.flatnonzero(deviation > self.tol)
        if bad.size:
            result['passed'] = False
            result['errors'].append(
                f"{bad.size} colunas fora da norma unitaria (desvio maximo {deviation.max():.3e})"
            )
        result['max_deviation'] = float(deviation.max())
        self.validation_results.append(result)
        return result

    def validate_orthogonal_rows(self, A: np.ndarray) -> dict[str, Any]:
        """Valida que as linhas sao mutuamente ortogonais"""
        result: dict[str, Any] = {'rule': 'orthogonal_rows', 'passed': True, 'errors': []}
        gram = A @ A.conj().T
        off = gram - np.diag(np.diag(gram))
        scale = max(float(np.max(np.abs(np.diag(gram)))), np.finfo(float).tiny)
        worst = float(np.max(np.abs(off))) / scale if A.shape[0] > 1 else 0.0
        if worst > self.tol:
            result['passed'] = False
            result['errors'].append(f"Produto interno relativo entre linhas {worst:.3e} acima de {self.tol:g}")
        result['max_off_diagonal'] = worst
        self.validation_results.append(result)
        return result

    def validate_spectral_norm(self, A: np.ndarray) -> dict[str, Any]:
        """Valida ||A|| = sqrt(n/m)"""
        result: dict[str, Any] = {'rule': 'spectral_norm', 'passed': True, 'errors': []}
        m, n = A.shape
        expected = np.sqrt(n / m)
        observed = float(np.linalg.norm(A, 2))
        if abs(observed - expected) > self.tol * expected:
            result['passed'] = False
            result['errors'].append(f"||A|| = {observed:.12g}, esperado {expected:.12g}")
        result['observed'] = observed
        result['expected'] = float(expected)
        self.validation_results.append(result)
        return result

    def validate_all(self, A: Any) -> dict[str, Any]:
        """
        Executa as tres regras e consolida

        Args:
            A: Matriz m x n

        Returns:
            Relatorio consolidado
        """
        A = ensure_matrix(A, 'A')
        self.validation_results = []
        results = [
            self.validate_unit_columns(A),
            self.validate_orthogonal_rows(A),
            self.validate_spectral_norm(A),
        ]
        passed = sum(1 for r in results if r['passed'])
        return {
            'all_passed': passed == len(results),
            'total_rules': len(results),
            'passed': passed,
            'failed': len(results) - passed,
            'results': results,
        }
