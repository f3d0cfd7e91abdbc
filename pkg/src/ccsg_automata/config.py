"""Configuration management for ccsg-automata using pydantic-settings."""

from functools import lru_cache
from pathlib import Path
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_file=Path(__file__).parent.parent.parent / ".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    # Logging
    log_level: str = Field(default="INFO", alias="LOG_LEVEL", description="Logging level")
    log_json: bool = Field(
        default=True,
        alias="LOG_JSON",
        description="Emit one JSON object per log line (false: plain text)",
    )

    # Synthesis
    synthesis_max_degree: int = Field(
        default=32,
        alias="SYNTHESIS_MAX_DEGREE",
        ge=1,
        description=(
            "Largest polynomial degree the meet-in-the-middle CA synthesis will search. "
            "Work grows as 2^(degree/2)."
        ),
    )

    # Attack
    attack_max_passes: int = Field(
        default=64,
        alias="ATTACK_MAX_PASSES",
        ge=1,
        description="Upper bound on propagate/complete passes before reconstruct stops.",
    )
    report_listing_limit: int = Field(
        default=10_000,
        alias="REPORT_LISTING_LIMIT",
        ge=0,
        description="Suppress the position->bit listing in attack reports above this many entries.",
    )

    # Output
    default_output_format: Literal["text", "structured"] = Field(
        default="text",
        alias="DEFAULT_OUTPUT_FORMAT",
        description="Report format used when --format is not given.",
    )
    metrics_textfile: str | None = Field(
        default=None,
        alias="METRICS_TEXTFILE",
        description="If set, the CLI writes Prometheus metrics to this file after each command.",
    )


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance.

    Returns:
        Settings instance with environment variables loaded
    """
    return Settings()
