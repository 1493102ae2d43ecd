"""
Leitura e escrita de matrizes no formato texto CMX v1

Linha 1: ``cmx <rows> <cols> <real|complex>``; seguem rows*cols linhas em
ordem column-major, cada uma ``re`` ou ``re im`` com a menor representacao
decimal que reproduz o float exatamente.
"""

from pathlib import Path
from typing import Any

import numpy as np

from samusic.exceptions import MatrixFormatError
from samusic.logger import get_logger
from samusic.validators import ensure_matrix

logger = get_logger('cmx')

FIELDS = ('real', 'complex')


def format_cmx(M: Any, field: str | None = None) -> str:
    """
    Serializa matriz em texto CMX v1

    Args:
        M: Matriz real ou complexa
        field: Forca 'real' ou 'complex' (padrao: inferido do dtype)

    Returns:
        Conteudo do arquivo
    """
    M = ensure_matrix(M, 'M')
    field = field or ('complex' if np.iscomplexobj(M) else 'real')
    if field not in FIELDS:
        raise MatrixFormatError(f"Campo CMX desconhecido: {field}", {'field': field})
    if field == 'real' and np.iscomplexobj(M):
        if np.any(M.imag != 0):
            raise MatrixFormatError("Matriz com parte imaginaria nao pode ser gravada como real")
        M = M.real

    lines = [f"cmx {M.shape[0]} {M.shape[1]} {field}"]
    flat = M.flatten(order='F')
    if field == 'real':
        lines.extend(repr(float(x)) for x in flat)
    else:
        flat = flat.astype(complex)
        lines.extend(f"{float(z.real)!r} {float(z.imag)!r}" for z in flat)
    return '\n'.join(lines) + '\n'


def parse_cmx(text: str) -> np.ndarray:
    """
    Le matriz de texto CMX v1

    Args:
        text: Conteudo do arquivo

    Returns:
        Array float64 ou complex128
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MatrixFormatError("Arquivo CMX vazio")

    header = lines[0].split()
    if len(header) != 4 or header[0] != 'cmx' or header[3] not in FIELDS:
        raise MatrixFormatError(f"Cabecalho CMX invalido: {lines[0]!r}", {'header': lines[0]})
    try:
        rows, cols = int(header[1]), int(header[2])
    except ValueError as e:
        raise MatrixFormatError(f"Dimensoes invalidas: {lines[0]!r}") from e
    if rows < 1 or cols < 1:
        raise MatrixFormatError(f"Dimensoes invalidas: {rows}x{cols}", {'rows': rows, 'cols': cols})

    field = header[3]
    body = lines[1:]
    if len(body) != rows * cols:
        raise MatrixFormatError(
            f"Esperadas {rows * cols} entradas, encontradas {len(body)}",
            {'expected': rows * cols, 'found': len(body)}
        )

    width = 1 if field == 'real' else 2
    values = np.empty(rows * cols, dtype=float if field == 'real' else complex)
    for k, line in enumerate(body):
        tokens = line.split()
        if len(tokens) != width:
            raise MatrixFormatError(f"Linha {k + 2} com {len(tokens)} campos, esperado {width}", {'line': k + 2})
        try:
            parts = [float(t) for t in tokens]
        except ValueError as e:
            raise MatrixFormatError(f"Valor invalido na linha {k + 2}: {line!r}", {'line': k + 2}) from e
        values[k] = parts[0] if width == 1 else complex(parts[0], parts[1])

    if not np.all(np.isfinite(values)):
        raise MatrixFormatError("Entradas nao finitas no arquivo CMX")
    return values.reshape((rows, cols), order='F')


def write_cmx(path: str | Path, M: Any, field: str | None = None) -> Path:
    """Grava matriz em arquivo CMX v1"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_cmx(M, field), encoding='utf-8')
    logger.debug(f"CMX gravado: {path}")
    return path


def read_cmx(path: str | Path) -> np.ndarray:
    """Le matriz de arquivo CMX v1"""
    path = Path(path)
    if not path.exists():
        raise MatrixFormatError(f"Arquivo CMX nao encontrado: {path}", {'path': str(path)})
    return parse_cmx(path.read_text(encoding='utf-8'))
