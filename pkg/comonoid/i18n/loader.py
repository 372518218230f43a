import json
import os

from ..config import DEFAULT_LANGUAGE


def _read_catalog(path):
    if not os.path.exists(path):
        return {}
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def load_messages(script_name, language=DEFAULT_LANGUAGE):
    """Load messages for a specific script and language, falling back to English per key"""
    base_path = os.path.dirname(__file__)

    # Common messages first, then the script catalog
    messages = _read_catalog(os.path.join(base_path, "common.json"))
    if language != DEFAULT_LANGUAGE:
        messages.update(_read_catalog(os.path.join(base_path, DEFAULT_LANGUAGE, f"{script_name}.json")))
    messages.update(_read_catalog(os.path.join(base_path, language, f"{script_name}.json")))

    return messages
