"""
Execucao paralela de ensaios com resultados em ordem deterministica
"""

from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor, as_completed
from os import cpu_count
from typing import Any, Callable

from tqdm import tqdm

from samusic.logger import get_logger

logger = get_logger('parallel')


class TrialExecutor:
    """Mapeia uma funcao sobre tarefas indexadas e devolve resultados ordenados pelo indice"""

    def __init__(self, n_workers: int | None = 1, use_processes: bool = True, progress: bool = False):
        """
        Inicializa executor

        Args:
            n_workers: Numero de workers (None = CPU count; 1 = serial no processo)
            use_processes: True para processos, False para threads
            progress: Exibe barra tqdm
        """
        self.n_workers = n_workers or cpu_count() or 1
        self.use_processes = use_processes
        self.progress = progress
        self.failed_tasks: list[int] = []

    def map(self, func: Callable[..., Any], tasks: list[tuple], desc: str = 'ensaios') -> list[Any]:
        """
        Executa func(*task) para cada tarefa

        Args:
            func: Funcao de modulo (serializavel) aplicada a cada tarefa
            tasks: Lista de tuplas de argumentos
            desc: Descricao da barra de progresso

        Returns:
            Resultados na ordem das tarefas (None para tarefas que falharam)
        """
        self.failed_tasks = []
        if self.n_workers == 1 or len(tasks) <= 1:
            results = []
            for i, task in enumerate(tqdm(tasks, desc=desc, disable=not self.progress, leave=False)):
                results.append(self._run_one(func, task, i))
            return results

        logger.info(f"Processando {len(tasks)} tarefas com {self.n_workers} workers")
        Executor = ProcessPoolExecutor if self.use_processes else ThreadPoolExecutor
        indexed: list[tuple[int, Any]] = []
        with Executor(max_workers=self.n_workers) as executor:
            future_to_task = {executor.submit(func, *task): i for i, task in enumerate(tasks)}
            for future in tqdm(as_completed(future_to_task), total=len(tasks), desc=desc,
                               disable=not self.progress, leave=False):
                task_idx = future_to_task[future]
                try:
                    indexed.append((task_idx, future.result()))
                except Exception as e:
                    logger.error(f"Tarefa {task_idx} falhou: {e}")
                    self.failed_tasks.append(task_idx)
                    indexed.append((task_idx, None))

        indexed.sort(key=lambda item: item[0])
        return [result for _, result in indexed]

    def _run_one(self, func: Callable[..., Any], task: tuple, index: int) -> Any:
        try:
            return func(*task)
        except Exception as e:
            logger.error(f"Tarefa {index} falhou: {e}")
            self.failed_tasks.append(index)
            return None
