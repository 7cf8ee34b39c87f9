"""
Configuration settings for the priority channel system toolkit.
Search budgets and logging are loaded from environment variables (or a .env file).
"""

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Hardy computation budgets
    pcs_budget_steps: int = 10_000_000
    pcs_budget_value: int = 1_000_000

    # Search bounds (forward enumeration, backward saturation, tree searches)
    pcs_max_configs: int = 100_000
    pcs_max_channel_len: int = 16

    # Default seed for `sim` when none is given
    pcs_default_seed: int = 0

    # Logging
    pcs_log_level: str = "WARNING"

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )


# Global settings instance
settings = Settings()
