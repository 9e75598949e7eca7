import logging
import time
from functools import lru_cache
from typing import Any, Dict, List, Optional, Tuple

from celery import group
from celery_config import celery_app
from helpers.config import Config
from controllers.RootSystemController import RootSystemController
from models.algebra import CartanSpec, RootSystem
from services.ClassificationService import ClassificationService, Grid, SweepSummary
from api.metrics_routes import record_celery_task, record_sweep

logger = logging.getLogger(__name__)


@lru_cache(maxsize=8)
def _services(tolerance: float) -> Tuple[RootSystemController, ClassificationService]:
    conf = Config(tolerance=tolerance)
    return RootSystemController(conf), ClassificationService(conf)


@celery_app.task(name="celery_tasks.tasks.sweep_chunk")
def sweep_chunk(spec_name: str, grid_json: Dict[str, list], real_index: Optional[int],
                start: int, stop: int, method: str, cap: int, tolerance: float) -> Dict[str, Any]:
    """Decide one contiguous index range of a sweep grid and return its SweepSummary as JSON."""
    start_time = time.time()
    try:
        root_systems, classification = _services(tolerance)
        rs = root_systems.build_root_system(CartanSpec.parse(spec_name))
        summary = classification.sweep(rs, Grid.from_json(grid_json), real_index=real_index, cap=cap,
                                       start=start, stop=stop, method=method)
        record_celery_task("sweep_chunk", "success", time.time() - start_time)
        return summary.to_json()
    except Exception:
        record_celery_task("sweep_chunk", "failed", time.time() - start_time)
        raise


def chunk_bounds(count: int, chunks: int) -> List[Tuple[int, int]]:
    """Split [0, count) into at most `chunks` contiguous non-empty ranges."""
    chunks = max(1, min(chunks, count)) if count else 1
    size, extra = divmod(count, chunks)
    bounds, start = [], 0
    for i in range(chunks):
        stop = start + size + (1 if i < extra else 0)
        bounds.append((start, stop))
        start = stop
    return bounds


def dispatch_sweep(rs: RootSystem, grid: Grid, conf: Config, real_index: Optional[int] = None,
                   method: str = "both", cap: Optional[int] = None) -> SweepSummary:
    """
    Fan a sweep out over `conf.sweep_workers` chunks and merge the results.

    Raises:
        EnumerationCapExceeded: before any task is dispatched
    """
    cap = conf.enumeration_cap if cap is None else cap
    _, classification = _services(conf.tolerance)
    count = classification.check_cap(rs, grid, cap)
    start_time = time.time()

    signatures = [
        sweep_chunk.s(rs.spec.name, grid.to_json(), real_index, start, stop, method, cap, conf.tolerance)
        for start, stop in chunk_bounds(count, conf.sweep_workers)
    ]
    if celery_app.conf.task_always_eager:
        results = [sig.apply().get() for sig in signatures]
    else:
        logger.info(f"Dispatching {len(signatures)} sweep chunks to {conf.broker_url}")
        results = group(signatures).apply_async().get()

    summary = SweepSummary(spec=rs.spec.name)
    for result in results:
        summary.merge(SweepSummary.from_json(result))
    duration = time.time() - start_time
    record_sweep(rs.spec.name, summary.total, duration)
    logger.info(
        f"Sweep on {rs.spec.name} decided {summary.total} assignments in {duration:.2f}s "
        f"(agreement {summary.agreement_rate:.2%})"
    )
    return summary
