from functools import lru_cache
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

DEFAULT_MAX_AMPLITUDES = 2 ** 26

# Algebraic identities (norms, inner products, Weyl relation)
ALGEBRA_TOLERANCE = 1e-12
# Pass/fail comparisons against the oracle
VERIFICATION_TOLERANCE = 1e-10
# Outcomes at or below this probability are infeasible
PROBABILITY_FLOOR = 1e-12


class Settings(BaseSettings):
    """Runtime configuration, read from QUSWAP_* environment variables"""

    model_config = SettingsConfigDict(env_prefix="QUSWAP_", extra="ignore")

    max_amplitudes: int = Field(DEFAULT_MAX_AMPLITUDES, ge=1, description="Size guard on D^N amplitudes")
    database_url: str = Field("sqlite:///./quswap.db", description="Verification ledger")
    log_level: str = Field("WARNING", description="Root log level for the CLI")
    workers: int = Field(1, ge=1, description="Process pool width for campaigns")


_override: Optional[Settings] = None


@lru_cache
def _environment_settings() -> Settings:
    return Settings()


def get_settings() -> Settings:
    if _override is not None:
        return _override
    return _environment_settings()


def configure_settings(**overrides) -> Settings:
    """Replace the process-wide settings: environment values, then validated overrides"""
    global _override
    _override = Settings(**overrides)
    return _override


def reset_settings() -> None:
    global _override
    _override = None
    _environment_settings.cache_clear()
