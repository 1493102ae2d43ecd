"""
Excecoes customizadas para recuperacao de suporte conjunto
"""


class SAMusicBaseException(Exception):
    """Excecao base do pacote samusic"""

    def __init__(self, message: str, details: dict | None = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class InvalidInputError(SAMusicBaseException):
    """Entrada fora do dominio da operacao"""
    pass


class DegenerateInputError(InvalidInputError):
    """Entrada valida em forma mas sem conteudo util (ex.: matriz nula)"""
    pass


class NoGapError(SAMusicBaseException):
    """Nenhum gap espectral atinge o limiar; details['spectrum'] guarda o espectro"""
    pass


class SpanExhaustedError(SAMusicBaseException):
    """Todos os candidatos ja pertencem ao span selecionado"""
    pass


class BudgetExceededError(SAMusicBaseException):
    """Busca exaustiva acima do orcamento de subconjuntos"""
    pass


class UnsupportedSizeError(SAMusicBaseException):
    """Problema grande demais para enumeracao exata"""
    pass


class NoConvergenceError(SAMusicBaseException):
    """Laco iterativo excedeu o numero maximo de iteracoes"""
    pass


class ConfigurationError(SAMusicBaseException):
    """Erro de configuracao"""
    pass


class MatrixFormatError(SAMusicBaseException):
    """Arquivo CMX malformado"""
    pass


class ValidationError(SAMusicBaseException):
    """Tabela de resultados nao confere com o schema"""
    pass
