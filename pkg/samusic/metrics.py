"""
Metricas de tempo e de sucesso para varreduras
"""

import time
from collections import defaultdict
from contextlib import contextmanager
from typing import Any, Iterator

import numpy as np


class TimingCollector:
    """Acumula duracoes (time.perf_counter) por nome de secao"""

    def __init__(self):
        self.durations: dict[str, list[float]] = defaultdict(list)

    @contextmanager
    def section(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.durations[name].append(time.perf_counter() - start)

    def record(self, name: str, seconds: float):
        self.durations[name].append(float(seconds))

    def last(self, name: str) -> float:
        return self.durations[name][-1]

    def median_ms(self, name: str) -> float:
        """Mediana em milissegundos (NaN sem amostras)"""
        values = self.durations.get(name)
        if not values:
            return float('nan')
        return float(np.median(values) * 1000.0)

    def summary(self) -> dict[str, dict[str, float]]:
        return {
            name: {'count': len(values), 'median_ms': self.median_ms(name), 'total_s': float(sum(values))}
            for name, values in self.durations.items()
        }


class SweepMetrics:
    """Contadores de ensaios, acertos e falhas por algoritmo"""

    def __init__(self):
        self.counters: dict[str, dict[str, int]] = defaultdict(lambda: {'trials': 0, 'successes': 0, 'failures': 0})

    def record_trial(self, algorithm: str, exact: bool, failed: bool = False):
        counter = self.counters[algorithm]
        counter['trials'] += 1
        counter['successes'] += int(bool(exact))
        counter['failures'] += int(bool(failed))

    def success_rate(self, algorithm: str) -> float:
        counter = self.counters.get(algorithm)
        if not counter or not counter['trials']:
            return float('nan')
        return counter['successes'] / counter['trials']

    def get_all_metrics(self) -> dict[str, Any]:
        return {
            algorithm: dict(counter, success_rate=self.success_rate(algorithm))
            for algorithm, counter in self.counters.items()
        }
