import numpy as np
import pytest

from comonoid.budget import Budget
from comonoid.constructions import power_set, trivial_family
from comonoid.core import Crossword, Family, GroundSet, Word
from comonoid.crossword import (
    SearchStatus,
    binary_witness,
    complement_crossword,
    cover_multiplicity,
    decompose_diagonal,
    diagonal_step,
    diversity_check,
    interval_lift,
    near_disjoint_witness,
    pullback_crossword,
    solve_diagonal,
    validate,
)
from comonoid.errors import GroundSetMismatchError, PreconditionError
from comonoid.lattice import interval_family
from helpers import brute_force_diagonals, random_family


def random_crossword(rng, size):
    ground = GroundSet(size)
    bits = np.array([[rng.random() < 0.5 for _ in range(size)] for _ in range(size)], dtype=bool)
    return Crossword(ground, bits.reshape(size, size))


def test_validate_reports_first_bad_lines(ground3):
    family = Family.from_masks(ground3, [0, 0b011])
    crossword = Crossword.from_bitstrings(ground3, ["110", "100", "000"])
    report = validate(crossword, family)
    assert not report.rows_ok and report.bad_row == 1
    assert not report.cols_ok and report.bad_col == 1
    assert report.diagonal.to_bitstring() == "100"
    assert not report.diag_in_w
    assert not report.is_crossword


def test_validate_rejects_other_ground(ground3):
    with pytest.raises(GroundSetMismatchError):
        validate(Crossword.zeros(GroundSet(2)), power_set(3))


def test_binary_witnesses(rng):
    for _ in range(1000):
        size = rng.randrange(1, 6)
        family = random_family(rng, size, rng.randrange(1, 5), bounds=True)
        ground = family.ground
        x = Word(ground, rng.randrange(1 << size))
        y = Word(ground, rng.randrange(1 << size))
        family = family.with_masks([x.bits, y.bits])
        meet = validate(binary_witness("meet", x, y), family)
        join = validate(binary_witness("join", x, y), family)
        assert meet.is_crossword and meet.diagonal == x & y
        assert join.is_crossword and join.diagonal == x | y


def test_binary_witness_kind(ground3):
    with pytest.raises(PreconditionError):
        binary_witness("negate", ground3.empty(), ground3.full())


def test_near_disjoint_witness(rng):
    for _ in range(200):
        size = rng.randrange(1, 7)
        ground = GroundSet(size)
        # random partition of a random subset into blocks
        labels = [rng.randrange(-1, 3) for _ in range(size)]
        xs = [
            Word.from_elements(ground, [a for a, label in enumerate(labels) if label == block])
            for block in range(3)
        ]
        family = Family.from_masks(ground, [x.bits for x in xs] + [0])
        report = validate(near_disjoint_witness(xs, ground), family)
        assert report.is_crossword
        assert report.diagonal.bits == sum(x.bits for x in xs)
        assert max(cover_multiplicity(xs, ground), default=0) <= 1


def test_near_disjoint_needs_ground_for_empty_list():
    with pytest.raises(PreconditionError):
        near_disjoint_witness([])
    assert near_disjoint_witness([], GroundSet(2)) == Crossword.zeros(GroundSet(2))


def test_decomposition_and_diversity(rng):
    for _ in range(1000):
        size = rng.randrange(1, 6)
        crossword = random_crossword(rng, size)
        decomposition = decompose_diagonal(crossword)
        union = 0
        for a, part in decomposition.parts.items():
            assert a in part
            union |= part.bits
        assert union == crossword.diagonal().bits
        report = diversity_check(crossword)
        assert report.bound_ok
        assert 1 <= report.distinct_rows <= size
        assert report.distinct_cols <= 2**report.distinct_rows


def test_solver_finds_meet(down_up3):
    ground = down_up3.ground
    result = solve_diagonal(down_up3, Word(ground, 0b010))
    assert result.status is SearchStatus.FOUND
    assert result.crossword.to_bitstrings() == ["000", "110", "110"]
    assert validate(result.crossword, down_up3).is_crossword


def test_solver_unsat_on_trivial_family():
    family = trivial_family(2)
    result = solve_diagonal(family, Word(family.ground, 0b01))
    assert result.status is SearchStatus.UNSAT
    assert not result.found


def test_solver_budget():
    family = power_set(3)
    result = solve_diagonal(family, Word(family.ground, 0b101), Budget(2))
    assert result.status is SearchStatus.BUDGET_EXCEEDED
    assert solve_diagonal(family, Word(family.ground, 0b101), Budget(3)).found


def test_budget_is_shared():
    family = power_set(3)
    budget = Budget(4)
    assert solve_diagonal(family, family.ground.full(), budget).found
    assert budget.used == 3
    result = solve_diagonal(family, family.ground.empty(), budget)
    assert result.status is SearchStatus.BUDGET_EXCEEDED


def test_solver_agrees_with_brute_force(rng):
    checked = 0
    while checked < 100:
        size = rng.randrange(1, 5)
        family = random_family(rng, size, rng.randrange(1, 9))
        if len(family) > 8:
            continue
        expected = brute_force_diagonals(family)
        for target in range(1 << size):
            result = solve_diagonal(family, Word(family.ground, target))
            assert result.found == (target in expected)
            if result.found:
                report = validate(result.crossword, family)
                assert report.is_crossword and report.diagonal.bits == target
        checked += 1


def test_diagonal_step_matches_brute_force(rng):
    for _ in range(30):
        size = rng.randrange(1, 4)
        family = random_family(rng, size, rng.randrange(1, 6), bounds=rng.random() < 0.5)
        step = diagonal_step(family)
        assert step.complete
        assert step.family.mask_set == brute_force_diagonals(family)
        for mask, crossword in step.witnesses.items():
            assert crossword.diagonal().bits == mask


def test_diagonal_step_budget(down_up3):
    step = diagonal_step(down_up3, Budget(1))
    assert not step.complete
    assert step.unresolved


def test_interval_lift(down_up3):
    ground = down_up3.ground
    u, v = Word(ground, 0b001), ground.full()
    interval_ground, interval = interval_family(down_up3, u, v)
    inner = Crossword.product(Word(interval_ground, 0b11), Word(interval_ground, 0b01))
    lifted = interval_lift(inner, u, v)
    assert validate(lifted, down_up3).is_crossword
    assert lifted.diagonal() == u | Word(ground, 0b010)


def test_pullback_crossword():
    target = power_set(2)
    crossword = Crossword.from_bitstrings(target.ground, ["10", "01"])
    f = [0, 1, 1]
    pulled = pullback_crossword(crossword, f)
    assert pulled.to_bitstrings() == ["100", "011", "011"]
    # the inverse image of the diagonal is the diagonal of the pullback
    assert pulled.diagonal().bits == 0b111


def test_complement_crossword(rng):
    crossword = random_crossword(rng, 4)
    complement = complement_crossword(crossword)
    for a in range(4):
        assert complement.row(a) == ~crossword.row(a)
        assert complement.col(a) == ~crossword.col(a)
