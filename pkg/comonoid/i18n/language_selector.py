import os

from ..config import DEFAULT_LANGUAGE, LANGUAGE_ENV_VAR

LANGUAGE_ALIASES = {
    "en": "en",
    "english": "en",
    "es": "es",
    "spanish": "es",
    "español": "es",
}


def get_language(requested=None):
    """Get language from the command line, then the environment, then the default"""
    for candidate in (requested, os.getenv(LANGUAGE_ENV_VAR, "")):
        if candidate:
            code = LANGUAGE_ALIASES.get(candidate.strip().lower())
            if code:
                return code
    return DEFAULT_LANGUAGE
