import logging
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="KPN_",
        case_sensitive=False,
        extra="ignore",
    )

    # Exhaustive oracle
    budget: int = 10**8
    workers: int = 1
    max_reported_violations: int = 20
    tolerance: float = 1e-9

    # Linear program
    lp_max_elements: int = 8

    # Output
    output_format: str = "json"
    log_level: str = "WARNING"


# Global settings instance
settings = Settings()


def get_budget(override: Optional[int] = None) -> int:
    """Resolve the enumeration budget, an explicit value winning over settings."""
    if override is not None:
        return override
    return settings.budget


def configure_logging(level: Optional[str] = None) -> None:
    """Install a stderr handler for the ``src`` loggers."""
    logging.basicConfig(
        level=(level or settings.log_level).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
