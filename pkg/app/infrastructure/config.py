"""Process-level settings.

Read from RSC_* environment variables and an optional .env file. Experiment
definitions live in JSON files; these settings only override what every run
shares (seed, output location, logging, parallelism).
"""
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="RSC_", env_file=".env", env_file_encoding="utf-8", extra="ignore")

    seed: Optional[int] = Field(None, ge=0, description="Overrides the experiment seed")
    output_dir: Optional[str] = Field(None, description="Overrides the experiment output directory")
    log_level: str = "INFO"
    log_format: str = "text"
    log_file: Optional[str] = None
    workers: int = Field(1, ge=1, description="Processes used by sweeps")


def get_settings() -> Settings:
    return Settings()
