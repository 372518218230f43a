import itertools

import pytest

from comonoid.constructions import antichain_family, coordinate_family, order_comonoid, power_set
from comonoid.core import Family, GroundSet, Preorder, Word
from comonoid.errors import BudgetError, PreconditionError, TermError
from comonoid.lattice import (
    Const,
    Join,
    Meet,
    MonotoneTerm,
    Var,
    WordOp,
    close_masks,
    dual_family,
    evaluate,
    intersect_families,
    interval_family,
    is_free_family,
    is_lattice,
    join_all,
    lattice_close,
    lattice_defect,
    meet_all,
    partitioned_freeness,
    pinning_assignment,
    pullback_family,
    term_normalize,
    word_algebra,
)
from helpers import random_expr, random_family, set_partitions, truth_value


def test_word_algebra(ground3):
    x = ground3.word([0, 1])
    y = ground3.word([1, 2])
    assert word_algebra(WordOp.MEET, x, y) == x & y
    assert word_algebra("join", x, y).is_full
    assert word_algebra("negate", x) == ground3.word([2])
    assert word_algebra("leq", x & y, x) is True
    with pytest.raises(PreconditionError):
        word_algebra("meet", x)


def test_empty_meet_and_join(ground3):
    assert meet_all([], ground3).is_full
    assert join_all([], ground3).is_empty


def test_dual_and_intersection(down_up3):
    assert dual_family(down_up3) == down_up3
    ground = down_up3.ground
    evens = Family.from_masks(ground, [0, 2, 4, 6])
    assert intersect_families([down_up3, evens]).masks == (0, 4, 6)


def test_pullback_family():
    target = power_set(2)
    # both source points go to 0
    pulled = pullback_family([0, 0], Family.from_masks(GroundSet(2), [3]), target=2)
    assert pulled.masks == (1, 3)
    assert pullback_family([0, 1], target).masks == target.masks


def test_pullback_rejects_partial_map(ground3):
    with pytest.raises(PreconditionError):
        pullback_family([0, 1], power_set(3))


def test_interval_family(down_up3):
    ground = down_up3.ground
    u = Word(ground, 0b001)
    v = ground.full()
    interval_ground, interval = interval_family(down_up3, u, v)
    assert interval_ground.size == 2
    # {0}, {0,1}, A above {0}; minus {0}, on points 1, 2
    assert interval.masks == (0b00, 0b01, 0b11)


def test_interval_requires_members(down_up3):
    ground = down_up3.ground
    with pytest.raises(PreconditionError):
        interval_family(down_up3, Word(ground, 0b010), ground.full())


def test_close_masks_records_derivations():
    members, derivations = close_masks([0b011, 0b110], 0b111)
    assert members == {0, 0b010, 0b011, 0b110, 0b111}
    assert derivations[0b010] == (WordOp.MEET, 0b011, 0b110)
    assert 0b111 not in derivations


def test_lattice_defect_and_close(down_up3):
    defect = lattice_defect(down_up3)
    assert defect is not None
    assert defect.op is WordOp.JOIN
    assert defect.result == defect.x | defect.y
    assert defect.result.bits == 0b101
    assert defect.result not in down_up3
    closed = lattice_close(down_up3)
    assert is_lattice(closed)
    assert len(closed) == 8


def test_lattice_close_random(rng):
    for _ in range(50):
        family = random_family(rng, 4, rng.randrange(1, 6))
        closed = lattice_close(family)
        assert set(family.masks) <= closed.mask_set
        assert is_lattice(closed)
        assert lattice_close(closed) == closed


def test_antichain_collapse_relation():
    _, family = antichain_family([{0, 1}, {1, 2}, {0, 2}])
    # e_n = antichain members containing n
    e0, e1, e2 = (Word(family.ground, mask) for mask in (0b101, 0b011, 0b110))
    report = is_free_family(family)
    assert not report
    assert {family[k] for k in report.joins} == {e0, e1}
    assert [family[k] for k in report.meets] == [e2]
    assert meet_all([e2], family.ground) <= join_all([e0, e1], family.ground)


def test_antichain_collapse_within_blocks():
    _, family = antichain_family([{0, 1}, {1, 2}, {0, 2}])
    e0, e1, e2 = (family.index(Word(family.ground, mask)) for mask in (0b101, 0b011, 0b110))
    report = partitioned_freeness(family, [[e0, e1], [e2]])
    assert not report
    assert set(report.joins) == {e0, e1}
    assert report.meets == (e2,)
    assert report.block == 1


def test_coordinates_are_free():
    _, family = coordinate_family(3)
    assert is_free_family(family)


def test_freeness_generator_guard():
    family = Family.power_set(GroundSet(5))
    with pytest.raises(BudgetError):
        is_free_family(family)


def test_partitioned_freeness():
    _, family = coordinate_family(2, "with_complements")
    # e_0 ∧ ¬e_0 = ∅ lies below everything
    assert not is_free_family(family)
    report = partitioned_freeness(family, [[0, 1], [2, 3]])
    assert not report
    assert report.block is not None


def test_partitioned_freeness_requires_partition():
    _, family = coordinate_family(2)
    with pytest.raises(PreconditionError):
        partitioned_freeness(family, [[0]])
    with pytest.raises(PreconditionError):
        partitioned_freeness(family, [[0, 1], [1]])


def test_term_normalize_absorbs():
    expr = Var(0) | (Var(0) & Var(1))
    term = term_normalize(expr, arity=2)
    assert term.clauses == frozenset({frozenset({0})})
    assert not term.depends_on_all


def test_term_normalize_distributes():
    expr = (Var(0) | Var(1)) & Var(2)
    term = term_normalize(expr)
    assert term.arity == 3
    assert term.clause_masks == (0b101, 0b110)
    assert str(term) == "(v0∧v2)∨(v1∧v2)"


def test_term_normalize_constants():
    assert term_normalize(Var(0) | Const(1)).constant == 1
    assert term_normalize(Var(0) & Const(0)).constant == 0
    with pytest.raises(TermError):
        term_normalize(Meet())


def test_term_evaluation_matches_tree():
    expr = Join(Meet(Var(0), Var(1)), Meet(Var(2), Join(Var(0), Var(3))))
    term = term_normalize(expr)
    for values in itertools.product((0, 1), repeat=4):
        assert term.evaluate(values) == evaluate(expr, values)


def test_monotone_term_validation():
    with pytest.raises(TermError):
        MonotoneTerm(2, frozenset({frozenset({0}), frozenset({0, 1})}))
    with pytest.raises(TermError):
        MonotoneTerm(2, frozenset({frozenset({2})}))
    with pytest.raises(BudgetError):
        MonotoneTerm(21, frozenset({frozenset({0})}))


@pytest.mark.parametrize("split", [0, 1, 2])
def test_pinning_assignment(split):
    # majority of three variables
    term = term_normalize((Var(0) & Var(1)) | (Var(1) & Var(2)) | (Var(0) & Var(2)))
    prefix = pinning_assignment(term, split)
    assert len(prefix) == split
    tail = term.arity - split
    assert term.evaluate(prefix + (0,) * tail) == 0
    assert term.evaluate(prefix + (1,) * tail) == 1


def test_pinning_assignment_lexicographically_first():
    term = term_normalize((Var(0) & Var(1)) | (Var(1) & Var(2)) | (Var(0) & Var(2)))
    assert pinning_assignment(term, 2) == (0, 1)


def test_pinning_assignment_preconditions():
    term = term_normalize(Var(0) | (Var(0) & Var(1)), arity=2)
    with pytest.raises(PreconditionError):
        pinning_assignment(term, 1)
    with pytest.raises(PreconditionError):
        pinning_assignment(term_normalize(Var(0) & Var(1)), 2)


def test_term_normalize_matches_truth_table(rng):
    for _ in range(150):
        arity = rng.randrange(1, 7)
        expr = random_expr(rng, arity, 4)
        term = term_normalize(expr, arity=arity)
        for values in itertools.product((0, 1), repeat=arity):
            assert term.evaluate(values) == truth_value(expr, values)
        assert term_normalize(term) == term


def test_term_normalize_wide_terms(rng):
    for _ in range(40):
        arity = rng.randrange(7, 21)
        expr = random_expr(rng, arity, 3)
        term = term_normalize(expr, arity=arity)
        for _ in range(64):
            values = tuple(rng.randrange(2) for _ in range(arity))
            assert term.evaluate(values) == truth_value(expr, values)


@pytest.mark.parametrize(
    "expr, expected",
    [
        (Var(0) & Var(1), (1,)),
        (Var(0) | Var(1), (0,)),
        ((Var(0) & Var(1)) | (Var(1) & Var(2)) | (Var(0) & Var(2)), (0,)),
    ],
)
def test_pinning_examples(expr, expected):
    assert pinning_assignment(term_normalize(expr), 1) == expected


def test_free_families_pass_every_partition(rng):
    families = [coordinate_family(m)[1] for m in (2, 3, 4)]
    while len(families) < 12:
        family = random_family(rng, rng.randrange(2, 6), rng.randrange(2, 5))
        if is_free_family(family):
            families.append(family)
    for family in families:
        for blocks in set_partitions(range(len(family))):
            assert partitioned_freeness(family, blocks)


def test_pullback_along_a_collapse():
    chain3 = order_comonoid(Preorder.chain(3), "down")
    pulled = pullback_family([0, 1, 1], chain3)
    assert pulled.ground == GroundSet(2)
    # ∅, {0}, {0,1}
    assert pulled.masks == (0b00, 0b01, 0b11)


def test_interval_degenerate_endpoints(down_up3):
    ground = down_up3.ground
    u = Word(ground, 0b011)
    point_ground, point = interval_family(down_up3, u, u)
    assert point_ground == GroundSet(0)
    assert point == Family.from_masks(GroundSet(0), [0])
    whole_ground, whole = interval_family(down_up3, ground.empty(), ground.full())
    assert whole_ground == ground
    assert whole == down_up3


def test_empty_ground_labels_are_normalized():
    assert GroundSet(0, ()) == GroundSet(0)
    assert GroundSet(0, ()).labels is None
