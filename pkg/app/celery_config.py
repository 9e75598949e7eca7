from celery import Celery
from sentry_sdk.integrations.celery import CeleryIntegration
import sentry_sdk
from helpers.config import Config
import logging

logger = logging.getLogger(__name__)

celery_app = Celery(
    'flag_dirac',
    include=["celery_tasks.tasks"],
)

celery_app.conf.task_serializer = "json"
celery_app.conf.result_serializer = "json"
celery_app.conf.accept_content = ["json"]


def configure_celery(conf: Config) -> Celery:
    """Point the shared app at the configured broker; the in-memory broker runs tasks eagerly."""
    celery_app.conf.update(
        broker_url=conf.broker_url,
        result_backend=conf.result_backend,
        task_always_eager=conf.eager,
        task_eager_propagates=True,
    )
    if conf.sentry_dsn:
        sentry_sdk.init(
            dsn=conf.sentry_dsn,
            integrations=[CeleryIntegration()],
            environment=conf.env,
            release=conf.release,
        )
    logger.debug(f"Celery configured with broker {conf.broker_url} (eager={conf.eager})")
    return celery_app


configure_celery(Config())
