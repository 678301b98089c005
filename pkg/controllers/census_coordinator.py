# controllers/census_coordinator.py
"""
Coordinador de trabajos por bloques de códigos.

Reparte rangos [lo, hi) entre procesos y devuelve los resultados parciales en
orden de bloque, de modo que la fusión no depende del número de workers.
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from config import CHUNK_SIZE, DEFAULT_JOBS

logger = logging.getLogger(__name__)


@dataclass
class CoordinatorStats:
    """Estadísticas de la última ejecución."""
    label: str = ""
    total: int = 0
    chunks: int = 0
    jobs: int = 1
    completed: int = 0
    extra: Dict[str, Any] = field(default_factory=dict)


_last_stats = CoordinatorStats()


def get_last_stats() -> CoordinatorStats:
    return _last_stats


def chunk_ranges(total: int, chunk: int = CHUNK_SIZE) -> List[Tuple[int, int]]:
    """Rangos contiguos [lo, hi) que cubren 0..total-1."""
    if chunk < 1:
        raise ValueError("chunk size must be >= 1")
    return [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]


def resolve_jobs(jobs: Optional[int]) -> int:
    if jobs is None:
        return max(1, DEFAULT_JOBS)
    return max(1, int(jobs))


def map_chunks(
    fn: Callable[..., Any],
    args: Sequence[Any],
    total: int,
    jobs: Optional[int] = None,
    chunk: int = CHUNK_SIZE,
    label: str = "chunks",
) -> List[Any]:
    """
    Evalúa fn(*args, lo, hi) sobre cada bloque.

    Args:
        fn: Función a nivel de módulo (serializable con pickle)
        args: Argumentos fijos previos al rango
        total: Número total de códigos
        jobs: Procesos; 1 ejecuta en el proceso actual
        chunk: Códigos por bloque
        label: Etiqueta para logs

    Returns:
        List: Resultados en orden de bloque
    """
    global _last_stats
    ranges = chunk_ranges(total, chunk)
    workers = min(resolve_jobs(jobs), max(1, len(ranges)))
    _last_stats = CoordinatorStats(label=label, total=total, chunks=len(ranges), jobs=workers)
    logger.info(f"🚀 {label}: {total:,} codes in {len(ranges)} chunks with {workers} worker(s)")

    step = max(1, len(ranges) // 10)
    results: List[Any] = []
    if workers == 1:
        for idx, (lo, hi) in enumerate(ranges):
            results.append(fn(*args, lo, hi))
            _progress(label, idx, len(ranges), step)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(fn, *args, lo, hi) for lo, hi in ranges]
            for idx, future in enumerate(futures):
                results.append(future.result())
                _progress(label, idx, len(ranges), step)

    _last_stats.completed = len(results)
    logger.info(f"✅ {label}: done")
    return results


def _progress(label: str, idx: int, count: int, step: int) -> None:
    if (idx + 1) % step == 0 or idx + 1 == count:
        logger.info(f"⏳ {label}: {idx + 1}/{count} chunks")
    else:
        logger.debug(f"{label}: chunk {idx + 1}/{count}")
