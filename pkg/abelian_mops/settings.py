# -*- coding: utf-8 -*-
"""Runtime settings read from the environment (ABELIAN_MOPS_*)."""

from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="ABELIAN_MOPS_", extra="ignore")

    threads: int = Field(default=1, ge=1, description="cap on worker threads for node evaluation")
    log_level: str = "WARNING"


@lru_cache(maxsize=1)
def get_settings():
    return Settings()
