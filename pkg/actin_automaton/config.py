import os
from pathlib import Path

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from actin_automaton.errors import ConfigError

# ======================================================
# ENVIRONMENT
# ======================================================

# A .env in the working directory is picked up automatically; real
# environment variables win over it.
load_dotenv()

ENV_PREFIX = "ACTIN_"

BOND_MODES = ("records-only", "infer", "records-then-infer")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


# ======================================================
# SETTINGS SCHEMA
# ======================================================

class Settings(BaseModel):
    model_config = ConfigDict(frozen=True)

    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    log_level: str = "WARNING"
    bond_tolerance: float = Field(0.45, ge=0.0)
    bond_mode: str = "records-then-infer"
    max_steps_factor: int = Field(100, ge=1)
    history_cap_mb: float = Field(256.0, gt=0.0)
    series_limit: int | None = Field(None, ge=1)

    def max_steps_for(self, node_count: int) -> int:
        return max(1, self.max_steps_factor * node_count)


def _from_env() -> dict:
    raw = {
        "threads":          os.getenv(f"{ENV_PREFIX}THREADS"),
        "log_level":        os.getenv(f"{ENV_PREFIX}LOG_LEVEL"),
        "bond_tolerance":   os.getenv(f"{ENV_PREFIX}BOND_TOLERANCE"),
        "bond_mode":        os.getenv(f"{ENV_PREFIX}BOND_MODE"),
        "max_steps_factor": os.getenv(f"{ENV_PREFIX}MAX_STEPS_FACTOR"),
        "history_cap_mb":   os.getenv(f"{ENV_PREFIX}HISTORY_CAP_MB"),
        "series_limit":     os.getenv(f"{ENV_PREFIX}SERIES_LIMIT"),
    }
    return {k: v for k, v in raw.items() if v not in (None, "")}


def load_settings(config_file: str | Path | None = None, **overrides) -> Settings:
    """
    Build Settings from (lowest to highest precedence):
    built-in defaults, .env, process environment, --config FILE, CLI overrides.
    """
    if config_file is not None:
        path = Path(config_file)
        if not path.is_file():
            raise ConfigError(f"Config file not found: '{path}'")
        load_dotenv(path, override=True)

    values = _from_env()
    values.update({k: v for k, v in overrides.items() if v is not None})

    try:
        settings = Settings(**values)
    except ValidationError as e:
        raise ConfigError(f"Invalid configuration: {e.errors()[0]['loc'][0]} {e.errors()[0]['msg']}") from e

    if settings.bond_mode not in BOND_MODES:
        raise ConfigError(
            f"Invalid bond mode: '{settings.bond_mode}'. Allowed: {', '.join(BOND_MODES)}"
        )
    if settings.log_level.upper() not in LOG_LEVELS:
        raise ConfigError(f"Invalid log level: '{settings.log_level}'")

    return settings
