"""Configuration for conemetric."""

from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load .env file into environment variables
load_dotenv()


class Settings(BaseSettings):
    """Settings loaded from environment variables.

    Settings can be configured via:
    - Environment variables prefixed with ``CONE_METRIC_``
    - .env file in the project root
    - Constructor arguments
    """

    model_config = SettingsConfigDict(
        env_prefix="CONE_METRIC_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Parallelism cap for grid sweeps (CONE_METRIC_THREADS)
    threads: int = Field(default=1, ge=1)

    # Logging configuration
    log_level: str = "WARNING"
    enable_logfire: bool = False

    # Output formatting
    json_indent: int = 2

    class EvaluatorSettings(BaseSettings):
        """Numerical verification of metric fields."""

        model_config = SettingsConfigDict(env_prefix="CONE_METRIC_EVAL_", extra="ignore")

        chart_switch_radius: float = 2.0
        stencil_margin: int = 5  # in units of h
        fit_rmin: float = 1e-4
        fit_rmax: float = 1e-2
        fit_samples: int = 50
        fit_rays: int = 8
        radial_samples: int = 48
        angular_samples: int = 64
        quad_epsabs: float = 1e-12
        quad_epsrel: float = 1e-12
        pole_clearance_factor: float = 0.1

    class PlannerSettings(BaseSettings):
        """Football-gluing plan search."""

        model_config = SettingsConfigDict(env_prefix="CONE_METRIC_PLAN_", extra="ignore")

        max_nodes: int = 20000
        enumerate_limit: int = 8
        allow_unit_leaves: bool = False

    class OracleSettings(BaseSettings):
        """Bounds for exhaustive small-instance sweeps."""

        model_config = SettingsConfigDict(env_prefix="CONE_METRIC_ORACLE_", extra="ignore")

        max_len: int = 8
        max_entry: int = 6
        size_limit: int = 12

    evaluator: EvaluatorSettings = EvaluatorSettings()
    planner: PlannerSettings = PlannerSettings()
    oracle: OracleSettings = OracleSettings()


# Global settings instance
settings = Settings()
