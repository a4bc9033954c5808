"""
Configuration settings for the 3SUM-Indexing laboratory
"""

from contextlib import contextmanager
from contextvars import ContextVar
from functools import lru_cache
from typing import Iterator, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings"""

    model_config = SettingsConfigDict(
        env_prefix="TSUMLAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    app_name: str = "tsumlab"
    app_version: str = "1.0.0"
    environment: str = Field(default="development")
    schema_version: int = Field(default=1)

    # Monitoring & Logging
    log_level: str = Field(default="INFO")
    log_format: str = Field(default="console")
    enable_metrics: bool = Field(default=True)
    progress: bool = Field(default=False)

    # Cell-probe model
    word_bits: int = Field(default=64, ge=1)

    # Desk-scale caps
    max_group_order: int = Field(default=2**24, ge=1)
    max_set_size: int = Field(default=2**12, ge=1)
    max_chain_work: int = Field(default=2**22, ge=1)

    # Experiments
    default_seed: int = Field(default=0, ge=0, lt=2**64)
    lsd_epsilon: float = Field(default=0.5, gt=0)
    hellman_chains: int = Field(default=16, ge=1)
    hellman_chain_length: int = Field(default=16, ge=1)
    owf_trials: int = Field(default=1000, ge=1)

    @field_validator("environment")
    @classmethod
    def validate_environment(cls, v: str) -> str:
        allowed_envs = ["development", "testing", "production"]
        if v not in allowed_envs:
            raise ValueError(f"Environment must be one of: {allowed_envs}")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        allowed_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in allowed_levels:
            raise ValueError(f"Log level must be one of: {allowed_levels}")
        return v.upper()

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v: str) -> str:
        if v not in ("console", "json"):
            raise ValueError("Log format must be 'console' or 'json'")
        return v


@lru_cache()
def load_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()


_run_settings: ContextVar[Optional[Settings]] = ContextVar("tsumlab_run_settings", default=None)


def get_settings() -> Settings:
    """Settings of the current run, falling back to the cached environment settings"""
    scoped = _run_settings.get()
    return scoped if scoped is not None else load_settings()


@contextmanager
def settings_scope(settings: Settings) -> Iterator[Settings]:
    """Make a copy with command-line overrides the active settings for one run"""
    token = _run_settings.set(settings)
    try:
        yield settings
    finally:
        _run_settings.reset(token)
