"""Word algebra, family transforms, lattice closure, freeness tests and monotone terms."""

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

from .config import FREENESS_MAX_GENERATORS, MAX_TERM_ARITY
from .core import Family, GroundSet, Word, compress_mask, require_ground
from .errors import BudgetError, InvariantViolation, PreconditionError, TermError

log = logging.getLogger(__name__)


class WordOp(str, Enum):
    MEET = "meet"
    JOIN = "join"
    NEGATE = "negate"
    LEQ = "leq"


def word_algebra(op, x, y=None):
    """Apply meet, join, negate or the inclusion test to words"""
    op = WordOp(op)
    if op is WordOp.NEGATE:
        if y is not None:
            raise PreconditionError("negate takes a single word")
        return ~x
    if y is None:
        raise PreconditionError(f"{op.value} needs two words")
    if op is WordOp.MEET:
        return x & y
    if op is WordOp.JOIN:
        return x | y
    return x <= y


def meet_all(words, ground):
    """Intersection of words; the empty meet is A"""
    words = list(words)
    require_ground(ground, words)
    mask = ground.full_mask
    for word in words:
        mask &= word.bits
    return Word(ground, mask)


def join_all(words, ground):
    """Union of words; the empty join is ∅"""
    words = list(words)
    require_ground(ground, words)
    mask = 0
    for word in words:
        mask |= word.bits
    return Word(ground, mask)


def dual_family(family):
    """Complements of the members"""
    full = family.ground.full_mask
    return Family.from_masks(family.ground, (full & ~mask for mask in family.masks))


def intersect_families(families):
    """Members common to every family, all over one ground set"""
    families = list(families)
    if not families:
        raise PreconditionError("intersect_families needs at least one family")
    ground = families[0].ground
    require_ground(ground, families)
    common = set(families[0].masks)
    for family in families[1:]:
        common &= family.mask_set
    return Family.from_masks(ground, common)


def _fibers(f, source, target):
    """fibers[b] = mask of the points of source sent to b"""
    if len(f) != source.size:
        raise PreconditionError(f"map must be total: expected {source.size} images, got {len(f)}")
    fibers = [0] * target.size
    for a, image in enumerate(f):
        if not 0 <= image < target.size:
            raise PreconditionError(f"image {image} of element {a} out of range for target of size {target.size}")
        fibers[image] |= 1 << a
    return fibers


def preimage_mask(fibers, mask):
    """Union of the fibers over the elements of mask"""
    out = 0
    for b, fiber in enumerate(fibers):
        if (mask >> b) & 1:
            out |= fiber
    return out


def _target_ground(f, target):
    if target is None:
        return GroundSet(max(f) + 1 if len(f) else 0)
    if isinstance(target, GroundSet):
        return target
    return GroundSet(int(target))


def pullback_family(f, family, target=None):
    """Subsets of the target whose preimage under f lies in family.

    f is a sequence giving the image of each source element. target is a
    GroundSet or a size; by default the least size covering the image.
    """
    target = _target_ground(f, target)
    fibers = _fibers(f, family.ground, target)
    masks = [mask for mask in range(1 << target.size) if family.has_mask(preimage_mask(fibers, mask))]
    return Family(target, tuple(masks))


def interval_ground(ground, positions):
    """Ground set for the points at positions, keeping their labels"""
    if ground.labels is None and list(positions) == list(range(ground.size)):
        return ground
    return GroundSet(len(positions), tuple(ground.label(a) for a in positions))


def interval_family(family, u, v):
    """Words x - u for members u ≤ x ≤ v, re-indexed onto the points of v - u"""
    require_ground(family.ground, (u, v))
    if u not in family or v not in family:
        raise PreconditionError("interval endpoints must be members of the family")
    if not u <= v:
        raise PreconditionError(f"interval endpoints must satisfy u ≤ v, got {u} and {v}")
    positions = (v - u).elements()
    ground = interval_ground(family.ground, positions)
    masks = (
        compress_mask(mask & ~u.bits, positions)
        for mask in family.masks
        if mask & u.bits == u.bits and mask & ~v.bits == 0
    )
    return ground, Family.from_masks(ground, masks)


def close_masks(masks, full):
    """Close a mask set under pairwise & and |, seeded with 0 and full.

    Returns the closed set and, for every mask added, the (op, x, y) that
    produced it first. Each unordered pair is combined exactly once.
    """
    members = set(masks) | {0, full}
    derivations = {}
    queue = deque(sorted(members))
    processed = []
    while queue:
        x = queue.popleft()
        processed.append(x)
        for y in processed:
            for op, value in ((WordOp.MEET, x & y), (WordOp.JOIN, x | y)):
                if value not in members:
                    members.add(value)
                    derivations[value] = (op, min(x, y), max(x, y))
                    queue.append(value)
    return members, derivations


def lattice_close(family):
    """Least superset of the family containing ∅ and A and closed under meet and join"""
    members, derivations = close_masks(family.masks, family.ground.full_mask)
    log.debug("lattice_close: %d words in, %d out", len(family), len(members))
    return Family.from_masks(family.ground, members)


@dataclass(frozen=True)
class LatticeDefect:
    x: Word
    y: Word
    op: WordOp
    result: Word


def lattice_defect(family):
    """First pair, in canonical order, whose meet or join leaves the family"""
    words = family.words
    for i, x in enumerate(words):
        for y in words[i:]:
            for op, value in ((WordOp.MEET, x.bits & y.bits), (WordOp.JOIN, x.bits | y.bits)):
                if not family.has_mask(value):
                    return LatticeDefect(x, y, op, Word(family.ground, value))
    return None


def is_lattice(family):
    """Bounded and closed under pairwise unions and intersections"""
    return family.has_bounds and lattice_defect(family) is None


@dataclass(frozen=True)
class FreenessReport:
    """Outcome of a freeness test; on failure joins ∨ ≥ meets ∧ (indices into the family)"""

    free: bool
    joins: tuple = ()
    meets: tuple = ()
    block: int | None = None

    def __bool__(self):
        return self.free


def _indices(mask):
    return tuple(k for k in range(mask.bit_length()) if (mask >> k) & 1)


def _relation_holds(masks, join_set, meet_set, full):
    joined = 0
    for k in _indices(join_set):
        joined |= masks[k]
    met = full
    for k in _indices(meet_set):
        met &= masks[k]
    return met & ~joined == 0


def _shrink_joins(masks, join_set, meet_set, full):
    for k in _indices(join_set):
        trial = join_set & ~(1 << k)
        if trial and _relation_holds(masks, trial, meet_set, full):
            join_set = trial
    return join_set


def _relation_for(masks, meet_set, full):
    """Minimal join side for the given meet side, or None when no relation has that meet side"""
    rest = ((1 << len(masks)) - 1) & ~meet_set
    if not rest or not _relation_holds(masks, rest, meet_set, full):
        return None
    return _shrink_joins(masks, rest, meet_set, full)


def _meet_sides(count):
    """Nonempty index sets, smallest first; within a size the latest generators come first"""
    for size in range(1, count + 1):
        for combo in reversed(list(itertools.combinations(range(count), size))):
            yield sum(1 << k for k in combo)


def _check_generator_count(family):
    if len(family) > FREENESS_MAX_GENERATORS:
        raise BudgetError(f"freeness test is limited to {FREENESS_MAX_GENERATORS} generators, got {len(family)}")


def is_free_family(family):
    """True iff no join of one nonempty subfamily majorizes the meet of a disjoint nonempty one.

    The reported relation has the smallest meet side, so a single late
    generator below the join of earlier ones is found before anything else.
    """
    _check_generator_count(family)
    masks = family.masks
    full = family.ground.full_mask
    for meet_set in _meet_sides(len(masks)):
        join_set = _relation_for(masks, meet_set, full)
        if join_set is not None:
            return FreenessReport(False, _indices(join_set), _indices(meet_set))
    return FreenessReport(True)


def _check_partition(size, blocks):
    seen = set()
    for block in blocks:
        block = set(block)
        if not block or block & seen or not all(0 <= k < size for k in block):
            raise PreconditionError("blocks must be nonempty, disjoint and index the family")
        seen |= block
    if len(seen) != size:
        raise PreconditionError("blocks must cover every member of the family")


def partitioned_freeness(family, blocks):
    """Freeness restricted to relations whose meet side lies in one block up to one element.

    blocks is a partition of the family's index set 0..len(family)-1.
    """
    _check_generator_count(family)
    blocks = [tuple(sorted(block)) for block in blocks]
    _check_partition(len(family), blocks)
    block_masks = [sum(1 << k for k in block) for block in blocks]
    masks = family.masks
    full = family.ground.full_mask
    for meet_set in _meet_sides(len(masks)):
        outside = [(meet_set & ~block).bit_count() for block in block_masks]
        if min(outside) > 1:
            continue
        home = outside.index(min(outside))
        join_set = _relation_for(masks, meet_set, full)
        if join_set is not None:
            return FreenessReport(False, _indices(join_set), _indices(meet_set), home)
    return FreenessReport(True)


class Expr:
    """Raw lattice expression; ``&`` builds meets and ``|`` builds joins"""

    def __and__(self, other):
        return Meet(self, other)

    def __or__(self, other):
        return Join(self, other)


@dataclass(frozen=True)
class Var(Expr):
    index: int


@dataclass(frozen=True)
class Const(Expr):
    value: int


@dataclass(frozen=True, init=False)
class Meet(Expr):
    operands: tuple

    def __init__(self, *operands):
        object.__setattr__(self, "operands", tuple(operands))


@dataclass(frozen=True, init=False)
class Join(Expr):
    operands: tuple

    def __init__(self, *operands):
        object.__setattr__(self, "operands", tuple(operands))


def _minimize(clauses):
    """Drop every clause that strictly contains another"""
    return frozenset(c for c in clauses if not any(d < c for d in clauses))


@dataclass(frozen=True)
class MonotoneTerm:
    """Join of meets over variables 0..arity-1, or a constant"""

    arity: int
    clauses: frozenset = frozenset()
    constant: int | None = None

    def __post_init__(self):
        if self.arity < 1:
            raise TermError(f"term arity must be positive, got {self.arity}")
        if self.arity > MAX_TERM_ARITY:
            raise BudgetError(f"term arity is limited to {MAX_TERM_ARITY}, got {self.arity}")
        clauses = frozenset(frozenset(clause) for clause in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.constant is not None:
            if self.constant not in (0, 1):
                raise TermError(f"constant must be 0 or 1, got {self.constant}")
            if clauses:
                raise TermError("a constant term carries no clauses")
            return
        if not clauses:
            raise TermError("a term with no clauses must be written as constant 0")
        for clause in clauses:
            if not clause or not all(isinstance(k, int) and 0 <= k < self.arity for k in clause):
                raise TermError(f"clause {sorted(clause)} is empty or mentions a variable outside 0..{self.arity - 1}")
        if _minimize(clauses) != clauses:
            raise TermError("clauses must form an antichain under inclusion")

    @cached_property
    def clause_masks(self):
        return tuple(sorted(sum(1 << k for k in clause) for clause in self.clauses))

    @property
    def relevant_variables(self):
        return frozenset().union(*self.clauses) if self.clauses else frozenset()

    @property
    def depends_on_all(self):
        return self.relevant_variables == frozenset(range(self.arity))

    def evaluate(self, values):
        if len(values) != self.arity:
            raise PreconditionError(f"expected {self.arity} values, got {len(values)}")
        if self.constant is not None:
            return self.constant
        assignment = sum(1 << k for k, value in enumerate(values) if value)
        return int(any(clause & ~assignment == 0 for clause in self.clause_masks))

    def __str__(self):
        if self.constant is not None:
            return str(self.constant)
        parts = []
        for mask in self.clause_masks:
            names = [f"v{k}" for k in range(mask.bit_length()) if (mask >> k) & 1]
            parts.append("∧".join(names) if len(names) == 1 else "(" + "∧".join(names) + ")")
        return "∨".join(parts)


def _clauses_of(expr):
    if isinstance(expr, Var):
        if not isinstance(expr.index, int) or expr.index < 0:
            raise TermError(f"bad variable index {expr.index!r}")
        return {frozenset({expr.index})}
    if isinstance(expr, Const):
        if expr.value not in (0, 1):
            raise TermError(f"constant must be 0 or 1, got {expr.value!r}")
        return {frozenset()} if expr.value else set()
    if isinstance(expr, (Meet, Join)):
        if not expr.operands:
            raise TermError(f"empty {type(expr).__name__} node")
        parts = [_clauses_of(operand) for operand in expr.operands]
        if isinstance(expr, Join):
            return _minimize(set().union(*parts))
        result = {frozenset()}
        for part in parts:
            result = _minimize({c | d for c in result for d in part})
        return result
    if isinstance(expr, MonotoneTerm):
        if expr.constant is not None:
            return {frozenset()} if expr.constant else set()
        return set(expr.clauses)
    raise TermError(f"not a lattice expression: {expr!r}")


def _max_variable(expr):
    if isinstance(expr, Var):
        return expr.index
    if isinstance(expr, (Meet, Join)):
        return max((_max_variable(operand) for operand in expr.operands), default=-1)
    return -1


def term_normalize(expr, arity=None):
    """Antichain normal form of a MonotoneTerm or a Var/Const/Meet/Join tree"""
    if arity is None:
        arity = expr.arity if isinstance(expr, MonotoneTerm) else max(_max_variable(expr) + 1, 1)
    clauses = _minimize(_clauses_of(expr))
    if any(k >= arity for clause in clauses for k in clause):
        raise TermError(f"expression mentions a variable outside 0..{arity - 1}")
    if not clauses:
        return MonotoneTerm(arity, constant=0)
    if frozenset() in clauses:
        return MonotoneTerm(arity, constant=1)
    return MonotoneTerm(arity, clauses)


def evaluate(expr, values):
    """Evaluate a MonotoneTerm or a raw expression tree on 0/1 values"""
    if isinstance(expr, MonotoneTerm):
        return expr.evaluate(values)
    if isinstance(expr, Var):
        return int(bool(values[expr.index]))
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Meet):
        return int(all(evaluate(operand, values) for operand in expr.operands))
    if isinstance(expr, Join):
        return int(any(evaluate(operand, values) for operand in expr.operands))
    raise TermError(f"not a lattice expression: {expr!r}")


def pinning_assignment(term, split):
    """Lexicographically first prefix c with t(c, 0, …, 0) = 0 and t(c, 1, …, 1) = 1"""
    term = term_normalize(term)
    if not 0 <= split < term.arity:
        raise PreconditionError(f"split point must lie in 0..{term.arity - 1}, got {split}")
    if not term.depends_on_all:
        missing = sorted(set(range(term.arity)) - term.relevant_variables)
        raise PreconditionError(f"term does not depend on variables {missing}")
    tail = term.arity - split
    for prefix in itertools.product((0, 1), repeat=split):
        if term.evaluate(prefix + (0,) * tail) == 0 and term.evaluate(prefix + (1,) * tail) == 1:
            return prefix
    raise InvariantViolation(f"no pinning prefix for {term} at split {split}")
