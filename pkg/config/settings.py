"""
Runtime settings read from the environment.

python-dotenv loads a local .env first (main.py does this before the first
call to get_settings()); values are then validated by pydantic.
"""

import os
from functools import lru_cache
from typing import Optional

from pydantic import BaseModel, Field, field_validator


class Settings(BaseModel):
    """Tunable limits for the exact core and its worker pool."""

    threads: int = Field(..., ge=1, description="Cap on internal worker processes")
    parallel_min_items: int = Field(64, ge=1, description="Below this many work items the sequential path is used")
    numeric_dps: int = Field(50, description="Decimal digits for numeric fallbacks")
    max_cremona_steps: int = Field(100_000, ge=1, description="Step limit for Cremona reduction")
    log_dir: str = Field("logs", description="Directory for timestamped log files")
    log_level: str = Field("INFO", description="Console log level")

    @field_validator("numeric_dps")
    @classmethod
    def _enough_digits(cls, value: int) -> int:
        # fallbacks promise an error bound of 1e-30
        if value < 35:
            raise ValueError("STAIRCASE_NUMERIC_DPS must be at least 35")
        return value

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.upper()
        if value not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level {value}")
        return value


def _env(name: str) -> Optional[str]:
    value = os.getenv(name)
    return value if value not in (None, "") else None


def load_settings() -> Settings:
    """Build Settings from the current environment (no caching)."""
    values = {
        "threads": _env("STAIRCASE_THREADS") or os.cpu_count() or 1,
        "parallel_min_items": _env("STAIRCASE_PARALLEL_MIN_ITEMS"),
        "numeric_dps": _env("STAIRCASE_NUMERIC_DPS"),
        "max_cremona_steps": _env("STAIRCASE_MAX_CREMONA_STEPS"),
        "log_dir": _env("STAIRCASE_LOG_DIR"),
        "log_level": _env("LOG_LEVEL"),
    }
    return Settings(**{key: value for key, value in values.items() if value is not None})


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return load_settings()
