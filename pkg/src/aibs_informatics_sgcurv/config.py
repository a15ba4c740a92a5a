__all__ = ["SgcurvConfig"]

from dataclasses import dataclass
from typing import Callable, Optional, TypeVar

from aibs_informatics_core.utils.logging import get_logger
from aibs_informatics_core.utils.os_operations import get_env_var

from aibs_informatics_sgcurv.constants.env import (
    DEFAULT_CORPUS_SIZE,
    DEFAULT_LOG_LEVEL,
    DEFAULT_MAX_WORKERS,
    DEFAULT_SEED,
    SGCURV_CORPUS_SIZE_VAR,
    SGCURV_LOG_LEVEL_VAR,
    SGCURV_MAX_WORKERS_VAR,
    SGCURV_SEED_VAR,
)

logger = get_logger(__name__)

T = TypeVar("T")


def _resolve(key: str, parse: Callable[[str], T], default: T) -> T:
    raw: Optional[str] = get_env_var(key)
    if raw is None or raw.strip() == "":
        return default
    try:
        return parse(raw.strip())
    except ValueError:
        logger.warning(f"Ignoring invalid value {raw!r} for {key}; using {default!r}")
        return default


@dataclass(frozen=True)
class SgcurvConfig:
    """Runtime settings resolved from the environment.

    Attributes:
        seed: Seed of the random verification corpus.
        corpus_size: Number of random instances drawn by the identity/inequality suites.
        log_level: Logging level name used by the command line.
        max_workers: Thread pool width for per-edge and per-grid-point fan-out.
    """

    seed: int = DEFAULT_SEED
    corpus_size: int = DEFAULT_CORPUS_SIZE
    log_level: str = DEFAULT_LOG_LEVEL
    max_workers: int = DEFAULT_MAX_WORKERS

    @classmethod
    def from_env(cls) -> "SgcurvConfig":
        return cls(
            seed=_resolve(SGCURV_SEED_VAR, int, DEFAULT_SEED),
            corpus_size=_resolve(SGCURV_CORPUS_SIZE_VAR, int, DEFAULT_CORPUS_SIZE),
            log_level=_resolve(SGCURV_LOG_LEVEL_VAR, str.upper, DEFAULT_LOG_LEVEL),
            max_workers=max(1, _resolve(SGCURV_MAX_WORKERS_VAR, int, DEFAULT_MAX_WORKERS)),
        )
