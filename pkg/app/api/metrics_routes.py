from fastapi import APIRouter, Request
from fastapi.responses import JSONResponse, Response
from prometheus_client import (
    generate_latest,
    CONTENT_TYPE_LATEST,
    Counter,
    Histogram,
    REGISTRY,
)
import time
import logging

logger = logging.getLogger(__name__)

router = APIRouter()

# FastAPI Metrics
http_requests_total = Counter(
    'http_requests_total',
    'Total HTTP requests',
    ['method', 'endpoint', 'status']
)

http_request_duration_seconds = Histogram(
    'http_request_duration_seconds',
    'HTTP request duration in seconds',
    ['method', 'endpoint']
)

api_errors_total = Counter(
    'api_errors_total',
    'Total API errors',
    ['error_type', 'endpoint']
)

# Celery Metrics
celery_tasks_total = Counter(
    'celery_tasks_total',
    'Total Celery tasks',
    ['task_name', 'status']
)

celery_task_duration_seconds = Histogram(
    'celery_task_duration_seconds',
    'Celery task duration in seconds',
    ['task_name']
)

# Decider Metrics
decider_evaluations_total = Counter(
    'decider_evaluations_total',
    'Per-triple involutivity verdicts',
    ['method', 'verdict']
)

decider_disagreements_total = Counter(
    'decider_disagreements_total',
    'Triples where the rule table and the Nijenhuis oracle disagree',
    ['algebra']
)

structures_verified_total = Counter(
    'structures_verified_total',
    'Structures verified',
    ['algebra', 'result']
)

# Sweep Metrics
sweep_assignments_total = Counter(
    'sweep_assignments_total',
    'Assignments decided by sweeps',
    ['algebra']
)

sweep_duration_seconds = Histogram(
    'sweep_duration_seconds',
    'Sweep duration in seconds',
    ['algebra']
)


# Middleware function for request metrics (to be applied to main app)
async def metrics_middleware(request: Request, call_next):
    start_time = time.time()
    response = await call_next(request)
    duration = time.time() - start_time

    http_requests_total.labels(
        method=request.method,
        endpoint=request.url.path,
        status=response.status_code
    ).inc()

    http_request_duration_seconds.labels(
        method=request.method,
        endpoint=request.url.path
    ).observe(duration)

    if response.status_code >= 400:
        api_errors_total.labels(
            error_type=f"{response.status_code}",
            endpoint=request.url.path
        ).inc()

    return response


def render_metrics() -> bytes:
    return generate_latest(REGISTRY)


def write_metrics(path: str) -> None:
    """Dump the current registry in the Prometheus text format."""
    with open(path, "wb") as f:
        f.write(render_metrics())
    logger.info(f"Metrics written to {path}")


@router.get("/metrics")
async def get_metrics():
    """Prometheus metrics endpoint"""
    try:
        return Response(render_metrics(), media_type=CONTENT_TYPE_LATEST)
    except Exception as e:
        logger.error(f"Error generating metrics: {e}", exc_info=True)
        return JSONResponse(status_code=500, content={"error": f"Error generating metrics: {e}"})


@router.get("/health")
async def health_check():
    from celery_config import celery_app

    return {
        "status": "healthy",
        "timestamp": time.time(),
        "services": {
            "api": "healthy",
            "workers": "eager" if celery_app.conf.task_always_eager else "broker",
        },
    }


# Helper functions for other parts of the application to record metrics
def record_decider_evaluation(method: str, involutive: bool):
    decider_evaluations_total.labels(
        method=method,
        verdict="involutive" if involutive else "not_involutive"
    ).inc()


def record_disagreement(algebra: str):
    decider_disagreements_total.labels(algebra=algebra).inc()


def record_structure_verified(algebra: str, result: str):
    structures_verified_total.labels(algebra=algebra, result=result).inc()


def record_sweep(algebra: str, assignments: int, duration: float = None):
    sweep_assignments_total.labels(algebra=algebra).inc(assignments)
    if duration:
        sweep_duration_seconds.labels(algebra=algebra).observe(duration)


def record_celery_task(task_name: str, status: str, duration: float = None):
    """Record Celery task metrics"""
    celery_tasks_total.labels(
        task_name=task_name,
        status=status
    ).inc()

    if duration:
        celery_task_duration_seconds.labels(
            task_name=task_name
        ).observe(duration)
