from typing import Optional

# config class holding process-wide defaults; the CLI overrides fields from flags

class Config():

    def __init__(self, **overrides) -> None:
        self.tolerance = 1e-9
        self.enumeration_cap = 250_000
        self.default_epsilon = 1
        self.log_level = "INFO"

        self.sweep_workers = 1
        self.broker_url = "memory://"
        self.result_backend = "cache+memory://"

        self.app_port = 8080
        self.app_host = "0.0.0.0"
        self.app_title = "Flag Dirac API"
        self.app_description = "Decide and classify invariant complex Dirac structures on maximal flag manifolds."
        self.app_version = "0.1.0"
        self.app_debug = False
        self.sweep_rate_limit = "10/minute"

        self.sentry_dsn: Optional[str] = None
        self.sentry_traces_sample_rate = 1.0
        self.env = "local"
        self.release = "0.1.0"

        for key, value in overrides.items():
            if not hasattr(self, key):
                raise ValueError(f"Unknown config option: {key}")
            if value is not None:
                setattr(self, key, value)

    @property
    def eager(self) -> bool:
        return self.broker_url.startswith("memory://")
