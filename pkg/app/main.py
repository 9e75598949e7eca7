from helpers.config import Config
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from slowapi import _rate_limit_exceeded_handler
from slowapi.errors import RateLimitExceeded
import uvicorn, sentry_sdk, logging
from api import DiracRoutes
from api import metrics_routes
from celery_config import configure_celery

logger = logging.getLogger(__name__)


def create_app(conf: Config = None) -> FastAPI:
    conf = conf or Config()
    DiracRoutes.configure(conf)
    configure_celery(conf)

    if conf.sentry_dsn:
        sentry_sdk.init(
            dsn=conf.sentry_dsn,
            traces_sample_rate=conf.sentry_traces_sample_rate,
            environment=conf.env,
            release=conf.release,
        )

    app = FastAPI(
        title=conf.app_title,
        description=conf.app_description,
        version=conf.app_version,
        debug=conf.app_debug
    )

    app.state.limiter = DiracRoutes.limiter
    app.add_exception_handler(RateLimitExceeded, _rate_limit_exceeded_handler)

    # Add metrics middleware
    app.middleware("http")(metrics_routes.metrics_middleware)

    # Register routes
    app.include_router(DiracRoutes.router, tags=["Dirac structures"])
    app.include_router(metrics_routes.router, tags=["Metrics"])

    # Global exception handler for user-friendly error responses
    @app.exception_handler(Exception)
    async def global_exception_handler(request: Request, exc: Exception):
        logger.error(f"Unhandled exception at {request.url.path}: {exc}", exc_info=True)
        return JSONResponse(
            status_code=500,
            content={
                "error": "Internal server error.",
                "detail": str(exc),
                "path": request.url.path
            },
        )

    @app.get("/")
    async def ping():
        return {"ping": "pong!"}

    return app


def run(conf: Config) -> None:
    logger.info(f"Serving {conf.app_title} on {conf.app_host}:{conf.app_port}")
    uvicorn.run(create_app(conf), host=conf.app_host, port=conf.app_port, log_level=conf.log_level.lower())


app = create_app()

if __name__ == "__main__":
    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler()]
    )
    run(Config())
