"""Crossword validation, the witness constructions, and the search for a crossword with a given diagonal.

The search fills rows top-down. Each column keeps a pointer into a prefix
trie over the family's words (element 0 first), so a row can be placed only
if every column still has a member of the family extending it.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .budget import Budget, BudgetExhausted
from .core import Crossword, Family, GroundSet, Word, expand_mask, require_ground
from .errors import InvariantViolation, PreconditionError
from .lattice import WordOp

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ValidationReport:
    """Row, column and diagonal membership of a crossword; bad_* are first offending indices"""

    rows_ok: bool
    cols_ok: bool
    diag_in_w: bool
    bad_row: int | None
    bad_col: int | None
    diagonal: Word

    @property
    def is_crossword(self):
        return self.rows_ok and self.cols_ok


def validate(crossword, family):
    """Check rows and columns against the family and report whether the diagonal is a member"""
    require_ground(family.ground, (crossword,))
    bad_row = next((a for a, row in enumerate(crossword.rows()) if not family.has_mask(row.bits)), None)
    bad_col = next((a for a, col in enumerate(crossword.cols()) if not family.has_mask(col.bits)), None)
    diagonal = crossword.diagonal()
    return ValidationReport(
        rows_ok=bad_row is None,
        cols_ok=bad_col is None,
        diag_in_w=family.has_mask(diagonal.bits),
        bad_row=bad_row,
        bad_col=bad_col,
        diagonal=diagonal,
    )


def binary_witness(kind, x, y):
    """x×y for meets (diagonal x∧y), (x×A)∨(A×y) for joins (diagonal x∨y)"""
    kind = WordOp(kind)
    x.same_ground(y)
    if kind is WordOp.MEET:
        return Crossword.product(x, y)
    if kind is WordOp.JOIN:
        return Crossword(x.ground, np.logical_or.outer(x.vector(), y.vector()))
    raise PreconditionError(f"binary witness kind must be meet or join, got {kind.value}")


def _witness_ground(xs, ground):
    if ground is None:
        if not xs:
            raise PreconditionError("an empty word list needs an explicit ground set")
        ground = xs[0].ground
    require_ground(ground, xs)
    return ground


def near_disjoint_witness(xs, ground=None):
    """The crossword ⋁ x×x; its diagonal is ⋁ x"""
    xs = list(xs)
    ground = _witness_ground(xs, ground)
    bits = np.zeros((ground.size, ground.size), dtype=bool)
    for x in xs:
        vector = x.vector()
        bits |= np.outer(vector, vector)
    return Crossword(ground, bits)


def cover_multiplicity(xs, ground=None):
    """Number of words covering each point"""
    xs = list(xs)
    ground = _witness_ground(xs, ground)
    counts = np.zeros(ground.size, dtype=int)
    for x in xs:
        counts += x.vector()
    return tuple(int(count) for count in counts)


@dataclass(frozen=True)
class Decomposition:
    z: Word
    parts: dict = field(default_factory=dict)


def decompose_diagonal(crossword):
    """Split the diagonal into x_a = meet of the rows and columns through a, one per diagonal point"""
    ground = crossword.ground
    rows = [row.bits for row in crossword.rows()]
    cols = [col.bits for col in crossword.cols()]
    z = crossword.diagonal()
    parts = {}
    union = 0
    for a in z:
        part = ground.full_mask
        for line in rows + cols:
            if (line >> a) & 1:
                part &= line
        if not (part >> a) & 1:
            raise InvariantViolation(f"point {a} missing from its own part")
        parts[a] = Word(ground, part)
        union |= part
    if union != z.bits:
        raise InvariantViolation("diagonal differs from the union of its parts")
    return Decomposition(z, parts)


class SearchStatus(str, Enum):
    FOUND = "found"
    UNSAT = "unsat"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class SolveResult:
    status: SearchStatus
    crossword: Crossword | None = None
    nodes: int = 0

    @property
    def found(self):
        return self.status is SearchStatus.FOUND


class WordTrie:
    """Prefix trie over a family's words read from element 0 upward.

    Nodes are integers; ``zero[node]`` and ``one[node]`` give the child along
    a 0 or 1 bit, or -1.
    """

    def __init__(self, family):
        self.size = family.ground.size
        self.zero = [-1]
        self.one = [-1]
        for mask in family.masks:
            node = 0
            for k in range(self.size):
                children = self.one if (mask >> k) & 1 else self.zero
                if children[node] < 0:
                    children[node] = len(self.zero)
                    self.zero.append(-1)
                    self.one.append(-1)
                node = children[node]

    def allowed(self, nodes):
        """Masks of the columns that can take a 1, and a 0, in the next row"""
        can_one = can_zero = 0
        for c, node in enumerate(nodes):
            if self.one[node] >= 0:
                can_one |= 1 << c
            if self.zero[node] >= 0:
                can_zero |= 1 << c
        return can_one, can_zero

    def advance(self, nodes, row):
        return tuple(
            self.one[node] if (row >> c) & 1 else self.zero[node]
            for c, node in enumerate(nodes)
        )


@lru_cache(maxsize=64)
def _trie_for(family):
    return WordTrie(family)


@lru_cache(maxsize=64)
def _candidates_for(family):
    """candidates[d][bit] = members whose bit d equals bit, canonical order"""
    return tuple(
        tuple(tuple(mask for mask in family.masks if (mask >> d) & 1 == bit) for bit in (0, 1))
        for d in range(family.ground.size)
    )


class _DiagonalSearch:
    def __init__(self, family, target, budget):
        self.size = family.ground.size
        self.full = family.ground.full_mask
        self.trie = _trie_for(family)
        self.candidates = _candidates_for(family)
        self.target = target
        self.budget = budget
        self.failed = set()
        self.rows = []

    def run(self):
        return self._fill(0, (0,) * self.size)

    def _fill(self, depth, nodes):
        if depth == self.size:
            return True
        if (depth, nodes) in self.failed:
            return False
        can_one, can_zero = self.trie.allowed(nodes)
        bit = (self.target >> depth) & 1
        for row in self.candidates[depth][bit]:
            if row & ~can_one or ~row & self.full & ~can_zero:
                continue
            self.budget.spend()
            self.rows.append(row)
            if self._fill(depth + 1, self.trie.advance(nodes, row)):
                return True
            self.rows.pop()
        self.failed.add((depth, nodes))
        return False


def solve_diagonal(family, z, budget=None):
    """First crossword over the family (rows in canonical order) whose diagonal is z"""
    require_ground(family.ground, (z,))
    budget = Budget.coerce(budget)
    start = budget.used
    search = _DiagonalSearch(family, z.bits, budget)
    try:
        found = search.run()
    except BudgetExhausted:
        log.debug("solve_diagonal: budget exhausted after %d nodes for %s", budget.used - start, z.to_bitstring())
        return SolveResult(SearchStatus.BUDGET_EXCEEDED, nodes=budget.used - start)
    nodes = budget.used - start
    log.debug("solve_diagonal: target %s %s in %d nodes", z.to_bitstring(), "found" if found else "unsat", nodes)
    if not found:
        return SolveResult(SearchStatus.UNSAT, nodes=nodes)
    crossword = Crossword.from_row_masks(family.ground, search.rows)
    return SolveResult(SearchStatus.FOUND, crossword, nodes)


@dataclass(frozen=True)
class DiagonalStep:
    """Diagonals reachable from crosswords over a family; complete is False when the budget cut the sweep"""

    family: Family
    complete: bool
    unresolved: tuple = ()
    witnesses: dict = field(default_factory=dict, compare=False)


def diagonal_step(family, budget=None):
    """Every diagonal of a crossword over the family, as a family"""
    budget = Budget.coerce(budget)
    ground = family.ground
    bounded = family.has_bounds
    reached = []
    unresolved = []
    witnesses = {}
    for target in range(1 << ground.size):
        z = Word(ground, target)
        if bounded and family.has_mask(target):
            reached.append(target)
            continue
        result = solve_diagonal(family, z, budget)
        if result.status is SearchStatus.FOUND:
            reached.append(target)
            witnesses[target] = result.crossword
        elif result.status is SearchStatus.BUDGET_EXCEEDED:
            unresolved.append(target)
    log.debug("diagonal_step: %d words in, %d diagonals, %d unresolved", len(family), len(reached), len(unresolved))
    return DiagonalStep(
        family=Family.from_masks(ground, reached),
        complete=not unresolved,
        unresolved=tuple(unresolved),
        witnesses=witnesses,
    )


@dataclass(frozen=True)
class DiversityReport:
    distinct_rows: int
    distinct_cols: int
    bound_ok: bool


def diversity_check(crossword):
    """Count distinct rows κ and columns λ; λ ≤ 2^κ and κ ≤ 2^λ always hold"""
    if crossword.ground.size == 0:
        return DiversityReport(0, 0, True)
    kappa = len(np.unique(crossword.bits, axis=0))
    lam = len(np.unique(crossword.bits, axis=1).T)
    bound_ok = lam <= 2**kappa and kappa <= 2**lam
    if not bound_ok:
        raise InvariantViolation(f"{kappa} distinct rows but {lam} distinct columns")
    return DiversityReport(kappa, lam, bound_ok)


def interval_lift(crossword, u, v):
    """Lift a crossword on the points of v - u to (u×v) ∨ (v×u) ∨ C on the full ground set"""
    u.same_ground(v)
    if not u <= v:
        raise PreconditionError("interval endpoints must satisfy u ≤ v")
    positions = (v - u).elements()
    if crossword.ground.size != len(positions):
        raise PreconditionError(f"crossword has side {crossword.ground.size}, interval has {len(positions)} points")
    ground = u.ground
    rows = [0] * ground.size
    for k, a in enumerate(positions):
        rows[a] = expand_mask(crossword.row(k).bits, positions)
    lifted = Crossword.from_row_masks(ground, rows)
    return lifted | Crossword.product(u, v) | Crossword.product(v, u)


def pullback_crossword(crossword, f, source=None):
    """Inverse image of a crossword under f×f; source defaults to GroundSet(len(f))"""
    if source is None:
        source = GroundSet(len(f))
    elif not isinstance(source, GroundSet):
        source = GroundSet(int(source))
    if len(f) != source.size:
        raise PreconditionError(f"map must be total: expected {source.size} images, got {len(f)}")
    for image in f:
        crossword.ground.check_index(image)
    index = np.asarray(f, dtype=int)
    return Crossword(source, crossword.bits[np.ix_(index, index)] if source.size else np.zeros((0, 0), dtype=bool))


def complement_crossword(crossword):
    """Cellwise negation; rows and columns become complements"""
    return crossword.complement()
