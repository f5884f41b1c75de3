import os
import logging
from fractions import Fraction

from dotenv import load_dotenv

from src.errors import ConfigError

load_dotenv(dotenv_path=os.path.join(os.path.dirname(__file__), "..", ".env"))


def _int_setting(name: str, default: int) -> int:
    raw = os.getenv(name, str(default))
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{name} must be an integer, got '{raw}'") from exc


MAX_K = _int_setting("NILALG_MAX_K", 8)
TOWER_DEPTH = _int_setting("NILALG_TOWER_DEPTH", 2)
GROEBNER_BUDGET = _int_setting("NILALG_GROEBNER_BUDGET", 20000)
N_JOBS = _int_setting("NILALG_N_JOBS", 1)
PARAM_SAMPLES = os.getenv("NILALG_PARAM_SAMPLES", "0,1,-1,2,1/2,i")
GRAPH_DIR = os.getenv(
    "NILALG_GRAPH_DIR", os.path.join(os.path.dirname(__file__), "..", "data")
)
LOG_LEVEL = os.getenv("NILALG_LOG_LEVEL", "INFO").upper()

# coefficient set, exponent range and scan budget used by search_witness
SEARCH_COEFFICIENTS = (Fraction(1), Fraction(-1), Fraction(2), Fraction(-2),
                       Fraction(1, 2), Fraction(-1, 2))
SEARCH_MAX_POW = _int_setting("NILALG_SEARCH_MAX_POW", 3)
SEARCH_ROW_TERMS = _int_setting("NILALG_SEARCH_ROW_TERMS", 2)
SEARCH_BUDGET = _int_setting("NILALG_SEARCH_BUDGET", 5000)

if MAX_K < 2:
    raise ConfigError(f"NILALG_MAX_K must be at least 2, got {MAX_K}")
if TOWER_DEPTH < 0:
    raise ConfigError(f"NILALG_TOWER_DEPTH must be non-negative, got {TOWER_DEPTH}")


def configure_logging(level: str = None):
    """Set up root logging the same way for every entry point."""
    logging.basicConfig(
        level=getattr(logging, level or LOG_LEVEL, logging.INFO),
        format="%(asctime)s %(levelname)s: %(message)s",
    )
