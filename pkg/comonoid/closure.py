"""Decide whether a family is a comonoid and compute the least comonoid containing a family."""

import logging
from dataclasses import dataclass
from enum import Enum

from .budget import Budget
from .config import UNION_CHECK_MAX_WORDS
from .core import Family, Word
from .crossword import SearchStatus, diagonal_step, solve_diagonal
from .errors import BudgetError, InvariantViolation
from .lattice import WordOp, close_masks, lattice_defect

log = logging.getLogger(__name__)


class CheckStatus(str, Enum):
    OK = "ok"
    COUNTEREXAMPLE = "counterexample"
    MISSING_CONSTANT = "missing_constant"
    BUDGET_EXCEEDED = "budget_exceeded"


@dataclass(frozen=True)
class ComonoidCheck:
    """Outcome of is_comonoid; a counterexample carries a crossword over W whose diagonal is outside W"""

    status: CheckStatus
    crossword: object = None
    missing: Word | None = None
    unresolved: tuple = ()

    @property
    def ok(self):
        return self.status is CheckStatus.OK


def is_comonoid(family, budget=None, shortcut=False):
    """Check ∅, A ∈ W and that every crossword over W has its diagonal in W.

    Targets outside W are searched in canonical order and the first one with
    a crossword is reported. With shortcut=True a family that is already a
    bounded lattice is accepted without search: at finite size every diagonal
    is a join of meets of rows and columns.
    """
    ground = family.ground
    for constant in (ground.empty(), ground.full()):
        if not family.has_mask(constant.bits):
            return ComonoidCheck(CheckStatus.MISSING_CONSTANT, missing=constant)
    if shortcut and lattice_defect(family) is None:
        log.debug("is_comonoid: bounded lattice, search skipped")
        return ComonoidCheck(CheckStatus.OK)
    budget = Budget.coerce(budget)
    unresolved = []
    for target in range(1 << ground.size):
        if family.has_mask(target):
            continue
        result = solve_diagonal(family, Word(ground, target), budget)
        if result.status is SearchStatus.FOUND:
            return ComonoidCheck(CheckStatus.COUNTEREXAMPLE, crossword=result.crossword)
        if result.status is SearchStatus.BUDGET_EXCEEDED:
            unresolved.append(target)
            break
    if unresolved:
        return ComonoidCheck(CheckStatus.BUDGET_EXCEEDED, unresolved=tuple(unresolved))
    return ComonoidCheck(CheckStatus.OK)


class ClosureRule(str, Enum):
    SEED = "seed"
    DISJOINT_UNION = "disjoint_union"
    MEET = "meet"
    JOIN = "join"
    DIAGONAL = "diagonal"


@dataclass(frozen=True)
class ClosureStep:
    word: Word
    rule: ClosureRule
    sources: tuple = ()
    crossword: object = None


@dataclass(frozen=True)
class ClosureResult:
    """Closed family plus the rule that added each word; certified only after a complete sweep found nothing new"""

    family: Family
    certified: bool
    trace: tuple
    rounds: int

    def rule_counts(self):
        counts = {}
        for step in self.trace:
            counts[step.rule] = counts.get(step.rule, 0) + 1
        return counts


def _disjoint_unions(members, ground, trace):
    """Add unions of pairwise disjoint members until none is missing"""
    added = True
    while added:
        added = False
        current = sorted(members)
        for i, x in enumerate(current):
            for y in current[i + 1:]:
                if x & y == 0 and x | y not in members:
                    members.add(x | y)
                    trace.append(ClosureStep(Word(ground, x | y), ClosureRule.DISJOINT_UNION, (Word(ground, x), Word(ground, y))))
                    added = True


def close(family, budget=None):
    """Least family containing the input, ∅ and A that is closed under crossword diagonals"""
    ground = family.ground
    budget = Budget.coerce(budget)
    limit = 1 << ground.size
    trace = [ClosureStep(word, ClosureRule.SEED) for word in family.words]
    members = set(family.masks)
    for constant in (0, ground.full_mask):
        if constant not in members:
            members.add(constant)
            trace.append(ClosureStep(Word(ground, constant), ClosureRule.SEED))
    rounds = 0
    while True:
        rounds += 1
        _disjoint_unions(members, ground, trace)
        members, derivations = close_masks(members, ground.full_mask)
        for mask, (op, x, y) in sorted(derivations.items()):
            rule = ClosureRule.MEET if op is WordOp.MEET else ClosureRule.JOIN
            trace.append(ClosureStep(Word(ground, mask), rule, (Word(ground, x), Word(ground, y))))
        if len(members) > limit:
            raise InvariantViolation(f"closure grew past {limit} words")
        current = Family.from_masks(ground, members)
        step = diagonal_step(current, budget)
        fresh = [mask for mask in step.family.masks if mask not in members]
        log.debug("close: round %d, %d words, %d new diagonals", rounds, len(members), len(fresh))
        for mask in fresh:
            trace.append(ClosureStep(Word(ground, mask), ClosureRule.DIAGONAL, crossword=step.witnesses.get(mask)))
        members.update(fresh)
        if not step.complete:
            log.warning("close: budget exhausted in round %d with %d words", rounds, len(members))
            return ClosureResult(Family.from_masks(ground, members), False, tuple(trace), rounds)
        if not fresh:
            return ClosureResult(current, True, tuple(trace), rounds)


@dataclass(frozen=True)
class UnionCheck:
    closed: bool
    indices: tuple = ()
    union: Word | None = None


def union_closure_check(family):
    """First subfamily (by index set) whose union falls outside the family"""
    if len(family) > UNION_CHECK_MAX_WORDS:
        raise BudgetError(f"union check is limited to {UNION_CHECK_MAX_WORDS} words, got {len(family)}")
    masks = family.masks
    for subset in range(1 << len(masks)):
        union = 0
        for k, mask in enumerate(masks):
            if (subset >> k) & 1:
                union |= mask
        if not family.has_mask(union):
            indices = tuple(k for k in range(len(masks)) if (subset >> k) & 1)
            return UnionCheck(False, indices, Word(family.ground, union))
    return UnionCheck(True)
