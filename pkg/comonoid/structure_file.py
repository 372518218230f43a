"""Text format for families.

    chu2-family v1
    size 3
    labels a b c        (optional)
    000
    100
    110

Blank lines and lines starting with '#' are ignored. Character k of a word
line is element k. Duplicate words are dropped with a warning.
"""

import logging
from dataclasses import dataclass
from pathlib import Path

from .config import STRUCTURE_FORMAT_TAG, STRUCTURE_FORMAT_VERSION
from .core import Family, GroundSet, Word
from .errors import ParseError, PreconditionError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class StructureFile:
    version: int
    ground: GroundSet
    words: tuple
    duplicates: int = 0

    def family(self):
        return Family.from_masks(self.ground, (Word.from_bitstring(self.ground, word).bits for word in self.words))


def _content_lines(text):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield number, line


def _parse_header(number, line):
    parts = line.split()
    if len(parts) != 2 or parts[0] != STRUCTURE_FORMAT_TAG:
        raise ParseError(f"expected header '{STRUCTURE_FORMAT_TAG} v{STRUCTURE_FORMAT_VERSION}'", number, 1)
    version = parts[1][1:] if parts[1].startswith("v") else ""
    if not version.isdigit():
        raise ParseError(f"malformed version {parts[1]!r}", number, len(parts[0]) + 2)
    if int(version) != STRUCTURE_FORMAT_VERSION:
        raise ParseError(f"unsupported version {version}, expected {STRUCTURE_FORMAT_VERSION}", number, len(parts[0]) + 2)
    return int(version)


def _parse_size(entry):
    if entry is None:
        raise ParseError("missing 'size' line")
    number, line = entry
    parts = line.split()
    if len(parts) != 2 or parts[0] != "size" or not parts[1].isdigit():
        raise ParseError("expected 'size N'", number, 1)
    return int(parts[1])


def _check_word(number, line, size):
    for column, ch in enumerate(line, start=1):
        if ch not in "01":
            raise ParseError(f"unexpected character {ch!r} in word", number, column)
    if len(line) != size:
        raise ParseError(f"word has length {len(line)}, expected {size}", number, min(len(line), size) + 1)


def parse_structure(text):
    """Parse structure-file text into a Family; errors carry line and column"""
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty structure file", 1, 1)
    version = _parse_header(*lines[0])
    size = _parse_size(lines[1] if len(lines) > 1 else None)
    rest = lines[2:]
    labels = None
    if rest and rest[0][1].split()[0] == "labels":
        number, line = rest[0]
        labels = tuple(line.split()[1:])
        rest = rest[1:]
        try:
            ground = GroundSet(size, labels)
        except PreconditionError as e:
            raise ParseError(str(e), number, 1) from e
    else:
        ground = GroundSet(size)
    words = []
    seen = set()
    duplicates = 0
    for number, line in rest:
        if size == 0 and line == "-":
            line = ""
        _check_word(number, line, size)
        if line in seen:
            duplicates += 1
            log.warning("line %d: duplicate word %s dropped", number, line or "-")
            continue
        seen.add(line)
        words.append(line)
    return StructureFile(version, ground, tuple(words), duplicates)


def read_structure(path):
    with open(path, "r", encoding="utf-8") as f:
        return parse_structure(f.read())


def load(path):
    """Read a structure file into a Family"""
    return read_structure(path).family()


def format_structure(family):
    """Text form of a family, words in canonical order"""
    lines = [f"{STRUCTURE_FORMAT_TAG} v{STRUCTURE_FORMAT_VERSION}", f"size {family.ground.size}"]
    if family.ground.labels is not None:
        lines.append("labels " + " ".join(family.ground.labels))
    lines += [word.to_bitstring() or "-" for word in family]
    return "\n".join(lines) + "\n"


def save(family, path):
    Path(path).write_text(format_structure(family), encoding="utf-8")
