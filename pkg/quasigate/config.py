"""
Central configuration loader.
Reads settings from .env / the environment and exposes them to the rest of
the package. Command-line flags override these values.
"""
import logging
import os

from dotenv import load_dotenv

load_dotenv()  # Loads from .env in the project root

logger = logging.getLogger("quasigate.config")


def _int_setting(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        logger.warning("[CONFIG] WARNING: %s=%r is not an integer, using %d", name, raw, default)
        return default


SEED = _int_setting("QG_SEED", 20240611)
TRIALS = _int_setting("QG_TRIALS", 100)
GENERIC_RETRIES = _int_setting("QG_GENERIC_RETRIES", 16)
SIMPLIFY_ROUNDS = _int_setting("QG_SIMPLIFY_ROUNDS", 64)
DENOMINATOR_BASE = _int_setting("QG_DENOMINATOR_BASE", 1009)
LOG_LEVEL = os.getenv("QG_LOG_LEVEL", "WARNING").upper()


def configure_logging(level: str = None) -> None:
    level = (level or LOG_LEVEL).upper()
    if not isinstance(logging.getLevelName(level), int):
        logger.warning("[CONFIG] WARNING: unknown log level %r, using WARNING", level)
        level = "WARNING"
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s %(message)s")
    logging.getLogger("quasigate").setLevel(level)
