"""T1 classification, separating words, back-and-forth completion, indecomposables and chain constructions.

Every "choose" step picks the canonically least candidate, so each
derivation is reproducible. Chains are finite: the terminal element of a
descending chain stands for its intersection and the terminal element of
an ascending chain for its union.
"""

import logging
from dataclasses import dataclass, field

from .core import Crossword, Family, Word, require_ground
from .crossword import complement_crossword, near_disjoint_witness, validate
from .errors import ChainError, HypothesisError, InvariantViolation, NotT1Error, PreconditionError
from .lattice import dual_family, join_all, lattice_close, lattice_defect, meet_all

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Classification:
    t1: bool
    unseparated: tuple | None
    discrete: bool
    complement_closed: bool


def first_unseparated_pair(family):
    """First ordered pair (a, b), a ≠ b, with no member containing a but not b"""
    n = family.ground.size
    full = family.ground.full_mask
    for a in range(n):
        separated = 0
        for mask in family.masks:
            if (mask >> a) & 1:
                separated |= full & ~mask
        for b in range(n):
            if b != a and not (separated >> b) & 1:
                return a, b
    return None


def classify(family):
    """Separation and closure flags of a family"""
    pair = first_unseparated_pair(family)
    return Classification(
        t1=pair is None,
        unseparated=pair,
        discrete=len(family) == 1 << family.ground.size,
        complement_closed=dual_family(family) == family,
    )


@dataclass(frozen=True)
class Separation:
    """x with x ∧ A0 = y; choices maps (a, b) to the member containing a but not b"""

    word: Word
    choices: dict = field(default_factory=dict)


def _separator(family, a, b):
    for mask in family.masks:
        if (mask >> a) & 1 and not (mask >> b) & 1:
            return mask
    raise NotT1Error((a, b))


def separating_word(family, a0, y):
    """⋁_{a∈y} ⋀_{b∈A0-{a}} x_{a,b}, each x_{a,b} the first member containing a but not b"""
    ground = family.ground
    require_ground(ground, (a0, y))
    if not y <= a0:
        raise PreconditionError(f"{y} is not contained in {a0}")
    pair = first_unseparated_pair(family)
    if pair is not None:
        raise NotT1Error(pair)
    choices = {}
    result = 0
    for a in y:
        part = ground.full_mask
        for b in a0:
            if b != a:
                chosen = _separator(family, a, b)
                choices[(a, b)] = Word(ground, chosen)
                part &= chosen
        result |= part
    if result & a0.bits != y.bits:
        raise InvariantViolation(f"separating word meets {a0} in {Word(ground, result & a0.bits)}, expected {y}")
    return Separation(Word(ground, result), choices)


def back_and_forth(family, z):
    """Crossword with diagonal z built a row and a column at a time.

    Row n agrees with the earlier columns at position n and column n with
    the earlier rows; both are separating words over A0 = {0..n}. Works in
    the lattice generated by the family when it is not already one.
    """
    ground = family.ground
    require_ground(ground, (z,))
    pair = first_unseparated_pair(family)
    if pair is not None:
        raise NotT1Error(pair)
    lattice = family if family.has_bounds and lattice_defect(family) is None else lattice_close(family)
    rows, cols = [], []
    for n in range(ground.size):
        a0 = Word(ground, (1 << (n + 1)) - 1)
        diagonal_bit = (z.bits >> n) & 1
        row_prefix = sum(((cols[k] >> n) & 1) << k for k in range(n)) | diagonal_bit << n
        col_prefix = sum(((rows[k] >> n) & 1) << k for k in range(n)) | diagonal_bit << n
        rows.append(separating_word(lattice, a0, Word(ground, row_prefix)).word.bits)
        cols.append(separating_word(lattice, a0, Word(ground, col_prefix)).word.bits)
    crossword = Crossword.from_row_masks(ground, rows)
    if [col.bits for col in crossword.cols()] != cols:
        raise InvariantViolation("rows and columns of the completed crossword disagree")
    report = validate(crossword, lattice)
    if not report.is_crossword or report.diagonal != z:
        raise InvariantViolation(f"back-and-forth produced an invalid crossword for {z}")
    return crossword


@dataclass(frozen=True)
class Indecomposables:
    """Strongly indecomposable members relative to base, and their classes under "not disjoint" """

    base: Word
    elements: tuple
    classes: tuple
    dual: bool = False

    def class_of(self, word):
        for index, members in enumerate(self.classes):
            if word in members:
                return index
        return None


def _semilattice_analysis(family, base_mask):
    """SI masks and classes in {y ∈ W | y ≥ base} with base as zero"""
    above = [mask for mask in family.masks if mask & base_mask == base_mask]
    nonzero = [mask for mask in above if mask != base_mask]
    lower = {}

    def meets_nonzero(mask):
        # some nonzero element lies below mask
        if mask not in lower:
            lower[mask] = any(y & ~mask == 0 for y in nonzero)
        return lower[mask]

    def disjoint(x, y):
        return not meets_nonzero(x & y)

    elements = []
    for x in nonzero:
        below = [y for y in nonzero if y != x and y & ~x == 0]
        if not any(disjoint(y1, y2) for i, y1 in enumerate(below) for y2 in below[i + 1:]):
            elements.append(x)
    classes = []
    for x in elements:
        home = next((c for c in classes if not disjoint(c[0], x)), None)
        if home is None:
            classes.append([x])
        else:
            home.append(x)
    for c in classes:
        for i, x in enumerate(c):
            for y in c[i + 1:]:
                if disjoint(x, y):
                    raise InvariantViolation("non-disjointness is not transitive on indecomposables")
    for i, c in enumerate(classes):
        for d in classes[i + 1:]:
            if not disjoint(c[0], d[0]):
                raise InvariantViolation("two classes of indecomposables meet")
    return elements, classes


def strongly_indecomposable(family, base=None, dual=False):
    """Strongly indecomposable members of W relative to base (∅ by default).

    With dual=True the dual notion: computed among complements relative to ¬base,
    reported back as members of W.
    """
    ground = family.ground
    if base is None:
        base = ground.full() if dual else ground.empty()
    require_ground(ground, (base,))
    if base not in family:
        raise PreconditionError(f"base {base} is not a member of the family")
    work, base_mask = (dual_family(family), ground.full_mask & ~base.bits) if dual else (family, base.bits)
    elements, classes = _semilattice_analysis(work, base_mask)

    def back(mask):
        return Word(ground, ground.full_mask & ~mask if dual else mask)

    elements = tuple(sorted((back(mask) for mask in elements), key=lambda w: w.bits))
    classes = [tuple(sorted((back(mask) for mask in c), key=lambda w: w.bits)) for c in classes]
    classes.sort(key=lambda c: c[0].bits)
    return Indecomposables(base, elements, tuple(classes), dual)


@dataclass(frozen=True)
class ClassProfile:
    indecomposables: Indecomposables
    profile: dict


def class_profile(family, base=None):
    """Map each member y ≥ base to the set of indecomposable classes it majorizes"""
    info = strongly_indecomposable(family, base)
    base = info.base
    profile = {}
    for y in family:
        if not base <= y:
            continue
        profile[y] = frozenset(
            index for index, members in enumerate(info.classes) if any(e <= y for e in members)
        )
        if (not profile[y]) != (y == base):
            raise InvariantViolation(f"{y} has class profile {sorted(profile[y])}")
    for x in profile:
        for y in profile:
            meet = x & y
            if meet in profile and profile[meet] != profile[x] & profile[y]:
                raise InvariantViolation(f"class profile does not respect the meet of {x} and {y}")
    return ClassProfile(info, profile)


@dataclass(frozen=True)
class DominatedClass:
    index: int
    members: tuple
    meet: Word


def dominated_classes(a, family):
    """Classes E such that every member containing a majorizes some member of E"""
    ground = family.ground
    ground.check_index(a)
    info = strongly_indecomposable(family, ground.empty())
    holders = [w for w in family if a in w]
    t1 = first_unseparated_pair(family) is None
    result = []
    for index, members in enumerate(info.classes):
        if all(any(e <= w for e in members) for w in holders):
            meet = meet_all(members, ground)
            if t1 and meet.bits not in (0, 1 << a):
                raise InvariantViolation(f"class dominated by {a} has intersection {meet}")
            result.append(DominatedClass(index, members, meet))
    return result


def _check_chain(words, descending, strict, name):
    for k, (u, v) in enumerate(zip(words, words[1:])):
        ordered = v <= u if descending else u <= v
        if not ordered or (strict and u == v):
            kind = "descending" if descending else "ascending"
            raise ChainError(f"{name} is not {'strictly ' if strict else ''}{kind} at position {k}")


def _chains(xs, ys, strict=False, same_length=True):
    xs, ys = list(xs), list(ys)
    if not xs or not ys:
        raise ChainError("chains must be nonempty")
    ground = xs[0].ground
    require_ground(ground, xs + ys)
    if same_length and len(xs) != len(ys):
        raise ChainError(f"chains have lengths {len(xs)} and {len(ys)}")
    _check_chain(xs, True, strict, "xs")
    _check_chain(ys, False, strict, "ys")
    return ground, xs, ys


@dataclass(frozen=True)
class ChainUnion:
    word: Word
    crossword: Crossword
    route: str


def chain_union(xs, ys):
    """⋁ x_n ∧ y_n for a descending xs and an ascending ys, with a crossword having it as diagonal"""
    ground, xs, ys = _chains(xs, ys)
    union = join_all((x & y for x, y in zip(xs, ys)), ground)
    if xs[-1].is_empty:
        crossword = near_disjoint_witness([x & y for x, y in zip(xs, ys)], ground)
        route = "near_disjoint"
    elif ys[-1].is_full:
        shifted_ys = [ground.empty()] + ys
        padded_xs = xs + [xs[-1]]
        complements = [~(x | y) for x, y in zip(padded_xs, shifted_ys)]
        crossword = complement_crossword(near_disjoint_witness(complements, ground))
        route = "dual"
    else:
        raise ChainError("need last(xs) = ∅ or last(ys) = A")
    if crossword.diagonal() != union:
        raise InvariantViolation(f"{route} witness has diagonal {crossword.diagonal()}, expected {union}")
    return ChainUnion(union, crossword, route)


@dataclass(frozen=True)
class ContinuumWitness:
    m: tuple
    n: tuple
    z: Word
    zs: tuple


def continuum_witness(xs, ys):
    """Index sequences m(·), n(·) with z = ⋁ x_{m(i)} ∧ y_{n(i)} and z_i = z ∨ (x_{m(i)} ∧ y_{n(i+1)}).

    The z_i strictly exceed z and pairwise meet in z.
    """
    ground, xs, ys = _chains(xs, ys, same_length=False)
    if not xs[-1].is_empty:
        raise ChainError("the descending chain must end in ∅")
    top = ys[-1]
    last_m, last_n = len(xs) - 1, len(ys) - 1
    for m in range(last_m):
        for n in range(last_n):
            if xs[m] & top <= ys[n]:
                raise HypothesisError((m, n), f"y_{n} contains x_{m} ∧ ⋁y")
    ms, ns = [0], [0]
    while True:
        candidates = (xs[ms[-1]] & top) - ys[ns[-1]]
        if candidates.is_empty:
            break
        a = candidates.elements()[0]
        next_n = next((k for k in range(ns[-1] + 1, last_n) if a in ys[k]), None)
        next_m = next((k for k in range(ms[-1] + 1, last_m) if a not in xs[k]), None)
        if next_n is None or next_m is None:
            break
        ns.append(next_n)
        ms.append(next_m)
    z = join_all((xs[m] & ys[n] for m, n in zip(ms, ns)), ground)
    zs = tuple(z | (xs[ms[i]] & ys[ns[i + 1]]) for i in range(len(ms) - 1))
    for i, zi in enumerate(zs):
        if not z < zi:
            raise InvariantViolation(f"z_{i} does not strictly exceed z")
        for j in range(i + 1, len(zs)):
            if zi & zs[j] != z:
                raise InvariantViolation(f"z_{i} ∧ z_{j} differs from z")
    log.debug("continuum_witness: m=%s n=%s", ms, ns)
    return ContinuumWitness(tuple(ms), tuple(ns), z, zs)


def infinite_crossword(xs, ys):
    """C = ⋁ x_n × y_n; its rows and columns are chain members"""
    ground, xs, ys = _chains(xs, ys, strict=True)
    if not xs[-1].is_empty or not ys[-1].is_full:
        raise ChainError("need last(xs) = ∅ and last(ys) = A")
    crossword = Crossword.zeros(ground)
    for x, y in zip(xs, ys):
        crossword = crossword | Crossword.product(x, y)
    allowed = {w.bits for w in xs + ys} | {0}
    lines = crossword.rows() + crossword.cols()
    if any(line.bits not in allowed for line in lines):
        raise InvariantViolation("a row or column of the chain crossword is not a chain member")
    return crossword


def chain_family(xs, ys):
    """Family of the chain members, the ambient W for validating chain crosswords"""
    ground, xs, ys = _chains(xs, ys, same_length=False)
    return Family.from_masks(ground, [w.bits for w in xs + ys] + [0, ground.full_mask])
