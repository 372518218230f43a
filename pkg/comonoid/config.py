import os


def _env_int(name, default):
    """Read a positive integer from the environment, falling back to default"""
    raw = os.getenv(name, "").strip()
    if raw.isdigit() and int(raw) > 0:
        return int(raw)
    return default


# Configuration
DEFAULT_NODE_BUDGET = _env_int("COMONOID_NODE_BUDGET", 10_000_000)
FREENESS_MAX_GENERATORS = 16
MAX_TERM_ARITY = 20
MAX_PRODUCT_SIZE = 4096
MAX_COORDINATE_BITS = 5
UNION_CHECK_MAX_WORDS = 12

STRUCTURE_FORMAT_TAG = "chu2-family"
STRUCTURE_FORMAT_VERSION = 1

DEFAULT_LANGUAGE = "en"
LANGUAGE_ENV_VAR = "COMONOID_LANG"
