import logging
import os
from dataclasses import dataclass

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

_TRUE = {"1", "true", "yes", "on"}


def _env_bool(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    return raw.strip().lower() in _TRUE


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning(f"Ignoring {name}={raw!r}: not an integer, using {default}")
        return default


@dataclass(frozen=True)
class Settings:
    """Defaults for the solver and the command line, read from TSP_* variables."""
    seed: int = 0
    deterministic: bool = False
    check_invariants: bool = False
    workers: int = 1
    log_level: str = "INFO"
    trace_dir: str = "."
    six_cycle_priority: bool = True


def get_settings() -> Settings:
    # a .env file in the working directory fills variables that are not set
    load_dotenv()
    return Settings(
        seed=_env_int("TSP_SEED", 0),
        deterministic=_env_bool("TSP_DETERMINISTIC", False),
        check_invariants=_env_bool("TSP_CHECK_INVARIANTS", False),
        workers=max(1, _env_int("TSP_WORKERS", 1)),
        log_level=os.getenv("TSP_LOG_LEVEL", "INFO").upper(),
        trace_dir=os.getenv("TSP_TRACE_DIR", "."),
        six_cycle_priority=_env_bool("TSP_SIX_CYCLE_PRIORITY", True),
    )
