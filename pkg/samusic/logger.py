"""
Sistema de logging estruturado para experimentos de recuperacao de suporte
"""

import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path

_LEVELS = {
    'DEBUG': logging.DEBUG,
    'INFO': logging.INFO,
    'WARNING': logging.WARNING,
    'ERROR': logging.ERROR,
    'CRITICAL': logging.CRITICAL,
}


class ExperimentLogger:
    """Logger estruturado para operacoes numericas e varreduras Monte-Carlo"""

    def __init__(self, name: str = 'samusic', log_dir: Path | None = None, level: int = logging.INFO):
        self.name = name
        self.log_dir = Path(log_dir) if log_dir else Path(os.environ.get('SAMUSIC_LOG_DIR', 'logs'))
        self.log_dir.mkdir(parents=True, exist_ok=True)
        self.level = level
        self.logger = self._setup_logger()

    def _setup_logger(self) -> logging.Logger:
        """
        Configura logger com handlers para arquivo e console

        Returns:
            Logger configurado
        """
        logger = logging.getLogger(f'samusic.{self.name}')
        logger.setLevel(self.level)
        logger.propagate = False

        if logger.handlers:
            return logger

        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )

        file_handler = RotatingFileHandler(
            self.log_dir / f'{self.name}.log',
            maxBytes=10 * 1024 * 1024,
            backupCount=5,
            encoding='utf-8',
            delay=True
        )
        file_handler.setLevel(self.level)
        file_handler.setFormatter(formatter)

        console_handler = logging.StreamHandler(sys.stdout)
        console_handler.setLevel(max(self.level, logging.INFO))
        console_handler.setFormatter(formatter)

        logger.addHandler(file_handler)
        logger.addHandler(console_handler)

        return logger

    def info(self, message: str, **kwargs):
        """Log nivel INFO"""
        self.logger.info(message, **kwargs)

    def warning(self, message: str, **kwargs):
        """Log nivel WARNING"""
        self.logger.warning(message, **kwargs)

    def error(self, message: str, **kwargs):
        """Log nivel ERROR"""
        self.logger.error(message, **kwargs)

    def debug(self, message: str, **kwargs):
        """Log nivel DEBUG"""
        self.logger.debug(message, **kwargs)

    def critical(self, message: str, **kwargs):
        """Log nivel CRITICAL"""
        self.logger.critical(message, **kwargs)

    def log_estimate(self, r: int, m: int, tau: float):
        """Log especifico para estimacao de subespaco"""
        self.debug(f"Subespaco - Dimensao: {r}/{m} | Tau: {tau:g}")

    def log_recovery(self, algorithm: str, size: int, exact: bool | None = None):
        """Log especifico para recuperacao de suporte"""
        status = 'n/a' if exact is None else ('exato' if exact else 'falhou')
        self.debug(f"Recuperacao - Algoritmo: {algorithm} | Tamanho: {size} | Status: {status}")

    def log_cell(self, cell: dict, success_rate: float, trials: int):
        """Log especifico para celula de varredura"""
        self.info(f"Celula {cell} | Taxa de sucesso: {success_rate:.3f} | Ensaios: {trials}")

    def log_sweep(self, name: str, duration: float, records: int, failures: int = 0):
        """Log especifico para execucao de varredura"""
        self.info(f"Varredura: {name} | Duracao: {duration:.2f}s | Registros: {records} | Falhas: {failures}")


def get_logger(name: str = 'samusic', log_dir: Path | None = None, level: int | None = None) -> ExperimentLogger:
    """
    Factory function para criar logger

    Args:
        name: Nome do logger
        log_dir: Diretorio de logs (padrao: $SAMUSIC_LOG_DIR ou logs/)
        level: Nivel de logging (padrao: $LOG_LEVEL ou INFO)

    Returns:
        Instancia de ExperimentLogger
    """
    if level is None:
        level = _LEVELS.get(os.environ.get('LOG_LEVEL', 'INFO').upper(), logging.INFO)
    return ExperimentLogger(name, log_dir, level)
