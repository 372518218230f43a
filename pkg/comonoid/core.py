"""Value types everything else consumes: ground sets, words, families, crosswords, preorders.

A word is a subset of a finite ground set, stored as an int mask with
element k at bit k. Sorting words by that integer is the canonical order
used for every "first word such that ..." choice in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import GroundSetMismatchError, PreconditionError


def mask_to_vector(mask, size):
    """Unpack an int mask into a boolean vector of the given length"""
    return np.array([(mask >> k) & 1 for k in range(size)], dtype=bool)


def vector_to_mask(vector):
    """Pack a boolean vector into an int mask (entry k becomes bit k)"""
    mask = 0
    for k in np.flatnonzero(vector):
        mask |= 1 << int(k)
    return mask


def iter_bits(mask):
    """Yield the indices of the set bits of mask in increasing order"""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def compress_mask(mask, positions):
    """Re-index the bits of mask found at positions to 0..len(positions)-1"""
    out = 0
    for new, old in enumerate(positions):
        if (mask >> old) & 1:
            out |= 1 << new
    return out


def expand_mask(mask, positions):
    """Inverse of compress_mask: bit k moves to positions[k]"""
    out = 0
    for new, old in enumerate(positions):
        if (mask >> new) & 1:
            out |= 1 << old
    return out


def require_ground(ground, items):
    """Raise GroundSetMismatchError unless every item lives on ground"""
    for item in items:
        if item.ground != ground:
            raise GroundSetMismatchError(f"expected ground set {ground}, got {item.ground}")


@dataclass(frozen=True)
class GroundSet:
    """The finite set A; elements are the indices 0..size-1, labels are presentation only"""

    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.size < 0:
            raise PreconditionError(f"ground set size must be nonnegative, got {self.size}")
        if self.labels is not None:
            labels = tuple(str(label) for label in self.labels)
            if not labels and self.size == 0:
                # the empty ground set has one presentation
                object.__setattr__(self, "labels", None)
                return
            if len(labels) != self.size:
                raise PreconditionError(f"expected {self.size} labels, got {len(labels)}")
            if len(set(labels)) != len(labels):
                raise PreconditionError("ground set labels must be pairwise distinct")
            object.__setattr__(self, "labels", labels)

    @property
    def full_mask(self):
        return (1 << self.size) - 1

    def label(self, a):
        self.check_index(a)
        return self.labels[a] if self.labels is not None else str(a)

    def index_of(self, label):
        if self.labels is not None and label in self.labels:
            return self.labels.index(label)
        if label.isdigit() and int(label) < self.size:
            return int(label)
        raise PreconditionError(f"unknown element {label!r}")

    def check_index(self, a):
        if not 0 <= a < self.size:
            raise PreconditionError(f"element index {a} out of range for ground set of size {self.size}")

    def empty(self):
        return Word(self, 0)

    def full(self):
        return Word(self, self.full_mask)

    def word(self, elements):
        return Word.from_elements(self, elements)

    def all_words(self):
        """Every subset of the ground set, in canonical order"""
        return (Word(self, mask) for mask in range(1 << self.size))


@dataclass(frozen=True)
class Word:
    """A subset of the ground set.

    Comparison operators are inclusion, as for frozenset; canonical
    ordering goes through ``sort_key``.
    """

    ground: GroundSet
    bits: int

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.ground.size:
            raise PreconditionError(f"mask {self.bits:#x} does not fit a ground set of size {self.ground.size}")

    @classmethod
    def from_elements(cls, ground, elements):
        mask = 0
        for a in elements:
            ground.check_index(a)
            mask |= 1 << a
        return cls(ground, mask)

    @classmethod
    def from_bitstring(cls, ground, text):
        """Character k is element k, so the leftmost character is element 0"""
        if len(text) != ground.size or set(text) - {"0", "1"}:
            raise PreconditionError(f"bitstring {text!r} is not a word on a ground set of size {ground.size}")
        return cls(ground, sum(1 << k for k, ch in enumerate(text) if ch == "1"))

    def to_bitstring(self):
        return "".join("1" if (self.bits >> k) & 1 else "0" for k in range(self.ground.size))

    def elements(self):
        return tuple(iter_bits(self.bits))

    def vector(self):
        return mask_to_vector(self.bits, self.ground.size)

    @property
    def sort_key(self):
        return self.bits

    @property
    def is_empty(self):
        return self.bits == 0

    @property
    def is_full(self):
        return self.bits == self.ground.full_mask

    def same_ground(self, other):
        if other.ground != self.ground:
            raise GroundSetMismatchError(f"words live on different ground sets: {self.ground} vs {other.ground}")
        return other

    def __contains__(self, a):
        return 0 <= a < self.ground.size and (self.bits >> a) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self):
        return self.bits.bit_count()

    def __and__(self, other):
        return Word(self.ground, self.bits & self.same_ground(other).bits)

    def __or__(self, other):
        return Word(self.ground, self.bits | self.same_ground(other).bits)

    def __sub__(self, other):
        return Word(self.ground, self.bits & ~self.same_ground(other).bits)

    def __invert__(self):
        return Word(self.ground, self.ground.full_mask & ~self.bits)

    def __le__(self, other):
        return self.bits & ~self.same_ground(other).bits == 0

    def __lt__(self, other):
        return self <= other and self.bits != other.bits

    def __ge__(self, other):
        return other <= self

    def __gt__(self, other):
        return other < self

    def isdisjoint(self, other):
        return self.bits & self.same_ground(other).bits == 0

    def __str__(self):
        return "{" + ",".join(self.ground.label(a) for a in self) + "}"

    def __repr__(self):
        return f"Word({self})"


@dataclass(frozen=True)
class Family:
    """Duplicate-free set of words on one ground set, kept in canonical order"""

    ground: GroundSet
    masks: tuple[int, ...]

    def __post_init__(self):
        masks = tuple(self.masks)
        if any(b <= a for a, b in zip(masks, masks[1:])):
            raise PreconditionError("family masks must be strictly increasing; build families with canonicalize")
        if masks and (masks[0] < 0 or masks[-1] > self.ground.full_mask):
            raise PreconditionError("family mask out of range for its ground set")
        object.__setattr__(self, "masks", masks)

    @classmethod
    def from_masks(cls, ground, masks):
        return cls(ground, tuple(sorted(set(masks))))

    @classmethod
    def power_set(cls, ground):
        return cls(ground, tuple(range(1 << ground.size)))

    @classmethod
    def trivial(cls, ground):
        """The family {∅, A}"""
        return cls.from_masks(ground, (0, ground.full_mask))

    @cached_property
    def mask_set(self):
        return frozenset(self.masks)

    @cached_property
    def words(self):
        return tuple(Word(self.ground, mask) for mask in self.masks)

    def has_mask(self, mask):
        return mask in self.mask_set

    def __contains__(self, word):
        if not isinstance(word, Word):
            return False
        word.same_ground(self.ground.empty())
        return word.bits in self.mask_set

    def __iter__(self) -> Iterator[Word]:
        return iter(self.words)

    def __len__(self):
        return len(self.masks)

    def __getitem__(self, index):
        return self.words[index]

    def index(self, word):
        return self.masks.index(word.bits)

    @property
    def has_bounds(self):
        """True when ∅ and A are both members"""
        return 0 in self.mask_set and self.ground.full_mask in self.mask_set

    def with_masks(self, masks):
        return Family.from_masks(self.ground, self.mask_set | set(masks))

    def with_bounds(self):
        return self.with_masks((0, self.ground.full_mask))

    def same_ground(self, other):
        if other.ground != self.ground:
            raise GroundSetMismatchError("families live on different ground sets")
        return other

    def to_bitstrings(self):
        return [word.to_bitstring() for word in self.words]

    def __str__(self):
        return "{" + ", ".join(str(word) for word in self.words) + "}"


def canonicalize(words: Iterable[Word], ground: GroundSet | None = None) -> Family:
    """Deduplicate and sort words into a Family; the input order is irrelevant"""
    words = list(words)
    if ground is None:
        ground = words[0].ground if words else GroundSet(0)
    for word in words:
        if word.ground != ground:
            raise GroundSetMismatchError("canonicalize received words on different ground sets")
    return Family.from_masks(ground, (word.bits for word in words))


class Axis(str, Enum):
    ROW = "row"
    COL = "col"


@dataclass(frozen=True, eq=False)
class Crossword:
    """A |A|×|A| bit matrix; row a is {b | C[a][b]}, column a is {b | C[b][a]}"""

    ground: GroundSet
    bits: np.ndarray

    def __post_init__(self):
        n = self.ground.size
        matrix = np.array(self.bits, dtype=bool).reshape(n, n) if n == 0 else np.array(self.bits, dtype=bool)
        if matrix.shape != (n, n):
            raise PreconditionError(f"crossword must be {n}x{n}, got shape {matrix.shape}")
        matrix.setflags(write=False)
        object.__setattr__(self, "bits", matrix)

    @classmethod
    def zeros(cls, ground):
        return cls(ground, np.zeros((ground.size, ground.size), dtype=bool))

    @classmethod
    def ones(cls, ground):
        return cls(ground, np.ones((ground.size, ground.size), dtype=bool))

    @classmethod
    def identity(cls, ground):
        return cls(ground, np.eye(ground.size, dtype=bool))

    @classmethod
    def from_row_masks(cls, ground, row_masks):
        n = ground.size
        matrix = np.zeros((n, n), dtype=bool)
        for a, mask in enumerate(row_masks):
            matrix[a] = mask_to_vector(mask, n)
        return cls(ground, matrix)

    @classmethod
    def from_rows(cls, rows: Sequence[Word]):
        ground = rows[0].ground
        for row in rows:
            rows[0].same_ground(row)
        return cls.from_row_masks(ground, [row.bits for row in rows])

    @classmethod
    def from_bitstrings(cls, ground, lines):
        return cls.from_rows([Word.from_bitstring(ground, line) for line in lines]) if lines else cls.zeros(ground)

    @classmethod
    def product(cls, x, y):
        """x×y: the cell (a, b) is set iff a ∈ x and b ∈ y"""
        x.same_ground(y)
        return cls(x.ground, np.outer(x.vector(), y.vector()))

    def row(self, a):
        self.ground.check_index(a)
        return Word(self.ground, vector_to_mask(self.bits[a, :]))

    def col(self, a):
        self.ground.check_index(a)
        return Word(self.ground, vector_to_mask(self.bits[:, a]))

    def rows(self):
        return tuple(self.row(a) for a in range(self.ground.size))

    def cols(self):
        return tuple(self.col(a) for a in range(self.ground.size))

    def diagonal(self):
        return Word(self.ground, vector_to_mask(np.diagonal(self.bits)))

    def transpose(self):
        return Crossword(self.ground, self.bits.T.copy())

    def complement(self):
        return Crossword(self.ground, ~self.bits)

    def __or__(self, other):
        return Crossword(self.ground, self.bits | other.bits)

    def __and__(self, other):
        return Crossword(self.ground, self.bits & other.bits)

    def __eq__(self, other):
        if not isinstance(other, Crossword):
            return NotImplemented
        return self.ground == other.ground and np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((self.ground, self.bits.tobytes()))

    def to_bitstrings(self):
        return [row.to_bitstring() for row in self.rows()]

    def __repr__(self):
        return f"Crossword({'/'.join(self.to_bitstrings())})"


def diagonal(crossword: Crossword) -> Word:
    """The word {b | C[b][b] = 1}"""
    return crossword.diagonal()


def slice_word(crossword: Crossword, a: int, axis: Axis | str = Axis.ROW) -> Word:
    """Row a ({b | C[a][b]}) or column a ({b | C[b][a]}) of a crossword"""
    axis = Axis(axis)
    return crossword.row(a) if axis is Axis.ROW else crossword.col(a)


def transitive_closure(rel):
    """Warshall closure of a boolean relation matrix"""
    closure = np.array(rel, dtype=bool)
    for k in range(closure.shape[0]):
        closure |= np.outer(closure[:, k], closure[k, :])
    return closure


@dataclass(frozen=True, eq=False)
class Preorder:
    """rel[a][b] is True iff a ≼ b"""

    ground: GroundSet
    rel: np.ndarray

    def __post_init__(self):
        n = self.ground.size
        rel = np.array(self.rel, dtype=bool).reshape(n, n)
        if not np.all(np.diagonal(rel)):
            raise PreconditionError("preorder relation must be reflexive")
        composed = (rel.astype(np.int64) @ rel.astype(np.int64)) > 0
        if np.any(composed & ~rel):
            raise PreconditionError("preorder relation must be transitive")
        rel.setflags(write=False)
        object.__setattr__(self, "rel", rel)

    @classmethod
    def from_pairs(cls, ground, pairs):
        """Least preorder containing the given (a, b) pairs, read as a ≼ b"""
        rel = np.eye(ground.size, dtype=bool)
        for a, b in pairs:
            ground.check_index(a)
            ground.check_index(b)
            rel[a, b] = True
        return cls(ground, transitive_closure(rel))

    @classmethod
    def chain(cls, size, labels=None):
        ground = GroundSet(size, labels)
        return cls(ground, np.triu(np.ones((size, size), dtype=bool)))

    @classmethod
    def antichain(cls, size, labels=None):
        ground = GroundSet(size, labels)
        return cls(ground, np.eye(size, dtype=bool))

    def leq(self, a, b):
        return bool(self.rel[a, b])

    @cached_property
    def down_masks(self):
        """down_masks[b] = {a | a ≼ b}"""
        return tuple(vector_to_mask(self.rel[:, b]) for b in range(self.ground.size))

    @cached_property
    def up_masks(self):
        """up_masks[a] = {b | a ≼ b}"""
        return tuple(vector_to_mask(self.rel[a, :]) for a in range(self.ground.size))

    def least(self):
        """An element below everything, or None"""
        for a in range(self.ground.size):
            if np.all(self.rel[a, :]):
                return a
        return None

    def greatest(self):
        for a in range(self.ground.size):
            if np.all(self.rel[:, a]):
                return a
        return None

    def __eq__(self, other):
        if not isinstance(other, Preorder):
            return NotImplemented
        return self.ground == other.ground and np.array_equal(self.rel, other.rel)

    def __hash__(self):
        return hash((self.ground, self.rel.tobytes()))
