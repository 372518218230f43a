"""Generators for the concrete structures, the counterexample evaluator at finite parameters,
sunflower extraction and the generated-lattice tests on finite products of posets.
"""

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .config import MAX_COORDINATE_BITS, MAX_PRODUCT_SIZE
from .core import Family, GroundSet, Preorder, Word, require_ground
from .errors import (
    BudgetError,
    InvariantViolation,
    MissingBoundsError,
    NotAntichainError,
    NotUpSetError,
    PreconditionError,
    SunflowerError,
)
from .lattice import close_masks, join_all, meet_all

log = logging.getLogger(__name__)


class OrderDirection(str, Enum):
    DOWN = "down"
    UP = "up"


def _topological_classes(preorder):
    """Equivalence classes of the preorder as masks, each after every class below it"""
    seen = 0
    classes = []
    for a in range(preorder.ground.size):
        if (seen >> a) & 1:
            continue
        members = preorder.down_masks[a] & preorder.up_masks[a]
        seen |= members
        classes.append((preorder.down_masks[a].bit_count(), a, members))
    classes.sort()
    return [(preorder.down_masks[a], members) for _, a, members in classes]


def down_sets(preorder):
    """All down-sets of a preorder in canonical order, by backtracking over its classes"""
    classes = _topological_classes(preorder)
    found = []

    def extend(k, current):
        if k == len(classes):
            found.append(current)
            return
        extend(k + 1, current)
        below, members = classes[k]
        if below & ~members & ~current == 0:
            extend(k + 1, current | members)

    extend(0, 0)
    return sorted(found)


def order_comonoid(preorder, direction=OrderDirection.DOWN):
    """The family of all down-sets (or all up-sets) of a preorder"""
    direction = OrderDirection(direction)
    masks = down_sets(preorder)
    if direction is OrderDirection.UP:
        full = preorder.ground.full_mask
        masks = [full & ~mask for mask in masks]
    return Family.from_masks(preorder.ground, masks)


def power_set(n):
    """Every subset of n elements"""
    return Family.power_set(GroundSet(n))


def trivial_family(n):
    return Family.trivial(GroundSet(n))


def down_up_union(n):
    """Down-sets together with up-sets of the chain 0 < 1 < … < n-1"""
    chain = Preorder.chain(n)
    down = order_comonoid(chain, OrderDirection.DOWN)
    up = order_comonoid(chain, OrderDirection.UP)
    return down.with_masks(up.masks)


def omega_infty(n):
    """Chain 0 < … < n-1 < ∞ with every down-set except {0..n-1}"""
    if n < 1:
        raise PreconditionError(f"omega_infty needs n ≥ 1, got {n}")
    ground = GroundSet(n + 1, tuple(str(k) for k in range(n)) + ("∞",))
    masks = [(1 << k) - 1 for k in range(n + 2) if k != n]
    return ground, Family.from_masks(ground, masks)


class CoordinateFlavor(str, Enum):
    E_ONLY = "e_only"
    WITH_COMPLEMENTS = "with_complements"


def subset_label(mask):
    """Set notation for a mask"""
    return "{" + ",".join(str(k) for k in range(mask.bit_length()) if (mask >> k) & 1) + "}"


def coordinate_generators(m):
    """Ground set of the 2^m subsets of {0..m-1} and the words e_i = {points containing i}"""
    if m < 1:
        raise PreconditionError(f"coordinate family needs m ≥ 1, got {m}")
    if m > MAX_COORDINATE_BITS:
        raise BudgetError(f"coordinate family is limited to m ≤ {MAX_COORDINATE_BITS}, got {m}")
    ground = GroundSet(1 << m, tuple(subset_label(p) for p in range(1 << m)))
    generators = [
        Word(ground, sum(1 << p for p in range(1 << m) if (p >> i) & 1))
        for i in range(m)
    ]
    return ground, generators


def coordinate_family(m, flavor=CoordinateFlavor.E_ONLY):
    """Coordinate ground set and the family of its generators, optionally with their complements"""
    flavor = CoordinateFlavor(flavor)
    ground, generators = coordinate_generators(m)
    words = list(generators)
    if flavor is CoordinateFlavor.WITH_COMPLEMENTS:
        words += [~e for e in generators]
    return ground, Family.from_masks(ground, (w.bits for w in words))


def antichain_family(members):
    """Ground set = the antichain members; words e_n = members containing n, nonconstant ones only"""
    members = [frozenset(member) for member in members]
    for i, p in enumerate(members):
        for q in members[i + 1:]:
            if p <= q or q <= p:
                raise NotAntichainError(f"{sorted(p)} and {sorted(q)} are comparable")
    ground = GroundSet(len(members), tuple(subset_label(sum(1 << k for k in member)) for member in members))
    masks = []
    for n in sorted(frozenset().union(*members)):
        mask = sum(1 << k for k, member in enumerate(members) if n in member)
        if mask not in (0, ground.full_mask):
            masks.append(mask)
    return ground, Family.from_masks(ground, masks)


def grid_chains(rows, cols):
    """Points (i, j) of a rows×cols grid; x_m = {i ≥ m}, y_n = {j < n}"""
    if rows < 2 or cols < 2:
        raise PreconditionError(f"grid needs at least 2 rows and 2 columns, got {rows}x{cols}")
    ground = GroundSet(rows * cols, tuple(f"({i},{j})" for i in range(rows) for j in range(cols)))

    def word(test):
        return Word.from_elements(ground, [i * cols + j for i in range(rows) for j in range(cols) if test(i, j)])

    xs = [word(lambda i, j, m=m: i >= m) for m in range(rows + 1)]
    ys = [word(lambda i, j, n=n: j < n) for n in range(cols + 1)]
    return ground, xs, ys


def prefix_chains(s1, s2, ground=None):
    """x_i = meet of the first i words of s1, y_i = join of the first i words of s2"""
    s1, s2 = list(s1), list(s2)
    if ground is None:
        if not s1 and not s2:
            raise PreconditionError("prefix_chains needs a ground set when both sequences are empty")
        ground = (s1 or s2)[0].ground
    xs = [meet_all(s1[:i], ground) for i in range(len(s1) + 1)]
    ys = [join_all(s2[:i], ground) for i in range(len(s2) + 1)]
    return xs, ys


@dataclass(frozen=True)
class CxParams:
    """Finite parameters: L pairs (n, γ) in a′ with n < n_bound and γ < gamma_max, m bits in a″"""

    L: int
    gamma_max: int
    m: int
    n_bound: int = 4

    def __post_init__(self):
        for name in ("L", "gamma_max", "m", "n_bound"):
            if getattr(self, name) < 1:
                raise PreconditionError(f"{name} must be positive, got {getattr(self, name)}")
        if self.L > self.n_bound * self.gamma_max:
            raise PreconditionError("L exceeds the number of distinct (n, γ) pairs")
        if self.n_bound > self.n_limit:
            raise PreconditionError(f"n_bound {self.n_bound} exceeds the {self.n_limit} sets u_n the encoding defines")

    @property
    def n_width(self):
        return max(1, (self.n_bound - 1).bit_length())

    @property
    def gamma_width(self):
        return max(1, (self.gamma_max - 1).bit_length())

    @property
    def enc_length(self):
        return self.L * (self.n_width + self.gamma_width) + self.m

    @property
    def n_limit(self):
        """Number of sets u_n: a bit and its negation per encoding position"""
        return 2 * self.enc_length


@dataclass(frozen=True)
class CxPoint:
    aprime: tuple
    adoubleprime: tuple

    def __post_init__(self):
        aprime = tuple((int(n), int(gamma)) for n, gamma in self.aprime)
        if len(set(aprime)) != len(aprime):
            raise PreconditionError("a′ entries must be pairwise distinct")
        object.__setattr__(self, "aprime", aprime)
        object.__setattr__(self, "adoubleprime", tuple(int(bit) for bit in self.adoubleprime))


def check_point(params, point):
    """Reject points that do not fit the parameters"""
    if len(point.aprime) != params.L:
        raise PreconditionError(f"a′ must have {params.L} entries, got {len(point.aprime)}")
    if len(point.adoubleprime) != params.m or set(point.adoubleprime) - {0, 1}:
        raise PreconditionError(f"a″ must be {params.m} bits")
    for n, gamma in point.aprime:
        if not 0 <= n < params.n_bound or not 0 <= gamma < params.gamma_max:
            raise PreconditionError(f"pair ({n}, {gamma}) outside the parameter bounds")


def _bits(value, width):
    """width bits of value, least significant first"""
    return [(value >> k) & 1 for k in range(width)]


def enc(params, point):
    """a′ as fixed-width (n, γ) fields, least significant bit first, followed by a″"""
    check_point(params, point)
    bits = []
    for n, gamma in point.aprime:
        bits += _bits(n, params.n_width) + _bits(gamma, params.gamma_width)
    return tuple(bits) + point.adoubleprime


def u_value(k, bits):
    """u_{2j} is bit j, u_{2j+1} its negation"""
    if not 0 <= k < 2 * len(bits):
        raise PreconditionError(f"u_{k} is undefined on a {len(bits)}-bit encoding")
    j, odd = divmod(k, 2)
    return 1 - bits[j] if odd else bits[j]


def cx_evaluate(params, n, gamma, point):
    """a″(i) when a′(i) = (n, γ), otherwise u_n(enc(a))"""
    if not 0 <= n < params.n_limit or not 0 <= gamma < params.gamma_max:
        raise PreconditionError(f"({n}, {gamma}) outside the parameter bounds")
    encoded = enc(params, point)
    if (n, gamma) in point.aprime:
        i = point.aprime.index((n, gamma))
        if i >= params.m:
            raise PreconditionError(f"a′({i}) = ({n}, {gamma}) but a″ has only {params.m} bits")
        return point.adoubleprime[i]
    return u_value(n, encoded)


def cx_stratum(params, point, beta):
    """True iff every γ in the image of a′ is below β"""
    if not 0 <= beta <= params.gamma_max:
        raise PreconditionError(f"β must lie in 0..{params.gamma_max}, got {beta}")
    check_point(params, point)
    return all(gamma < beta for _, gamma in point.aprime)


@dataclass(frozen=True)
class CxSeparation:
    """Witness (n, β) for two points; bit is the first encoding position where they differ"""
    n: int
    beta: int
    bit: int


def cx_separate(params, first, second):
    """(n, β) with w_{n,β}(first) = 1 and w_{n,β}(second) = 0"""
    if first == second:
        raise PreconditionError("points to separate must differ")
    enc1, enc2 = enc(params, first), enc(params, second)
    j = next((k for k, (b1, b2) in enumerate(zip(enc1, enc2)) if b1 != b2), None)
    if j is None:
        raise PreconditionError("points share an encoding")
    n = 2 * j if enc1[j] == 1 else 2 * j + 1
    beta = max((gamma for _, gamma in first.aprime + second.aprime), default=-1) + 1
    if beta >= params.gamma_max:
        raise PreconditionError(f"gamma_max {params.gamma_max} leaves no level above both strata")
    if cx_evaluate(params, n, beta, first) != 1 or cx_evaluate(params, n, beta, second) != 0:
        raise InvariantViolation(f"w_({n},{beta}) does not separate the points")
    return CxSeparation(n, beta, j)


@dataclass(frozen=True)
class Sunflower:
    """Extracted tuples read through perm are core ++ tail"""

    perm: tuple
    i: int
    core: tuple
    tails: tuple
    tuples: tuple


def _try_extract(tuples, positions, rest, threshold):
    groups = defaultdict(list)
    for entry in tuples:
        groups[tuple(entry[k] for k in positions)].append(entry)
    for core in sorted(groups):
        members = groups[core]
        if len(members) < threshold:
            continue
        used = set()
        picked = []
        for entry in sorted(members):
            tail = tuple(entry[k] for k in rest)
            if used.isdisjoint(tail):
                used.update(tail)
                picked.append(entry)
                if len(picked) == threshold:
                    return core, picked
    return None


def sunflower_extract(family, threshold):
    """Largest common core i with ≥ threshold tuples whose remaining entries are pairwise disjoint"""
    if threshold < 2:
        raise PreconditionError(f"threshold must be at least 2, got {threshold}")
    tuples = sorted(set(tuple(entry) for entry in family))
    if not tuples:
        raise PreconditionError("no tuples given")
    width = len(tuples[0])
    for entry in tuples:
        if len(entry) != width or len(set(entry)) != width:
            raise PreconditionError(f"tuple {entry} must have {width} distinct entries")
    for i in range(width - 1, -1, -1):
        for positions in itertools.combinations(range(width), i):
            rest = tuple(k for k in range(width) if k not in positions)
            found = _try_extract(tuples, positions, rest, threshold)
            if found is None:
                continue
            core, picked = found
            perm = positions + rest
            tails = tuple(tuple(entry[k] for k in rest) for entry in picked)
            for entry, tail in zip(picked, tails):
                if tuple(entry[k] for k in perm) != core + tail:
                    raise InvariantViolation("extracted tuple does not split as core ++ tail")
            log.debug("sunflower_extract: i=%d core=%s", i, core)
            return Sunflower(perm, i, core, tails, tuple(picked))
    raise SunflowerError(f"no {threshold} tuples share a core with pairwise disjoint tails")


def product_points(posets):
    return list(itertools.product(*(range(p.ground.size) for p in posets)))


def product_order(posets):
    """Componentwise order on the product, points in lexicographic order"""
    posets = list(posets)
    size = int(np.prod([p.ground.size for p in posets])) if posets else 1
    if size > MAX_PRODUCT_SIZE:
        raise BudgetError(f"product has {size} points, limit is {MAX_PRODUCT_SIZE}")
    points = product_points(posets)
    labels = tuple("(" + ",".join(p.ground.label(c) for p, c in zip(posets, point)) + ")" for point in points)
    coords = np.array(points, dtype=int).reshape(len(points), len(posets))
    rel = np.ones((len(points), len(points)), dtype=bool)
    for k, poset in enumerate(posets):
        rel &= poset.rel[np.ix_(coords[:, k], coords[:, k])]
    return Preorder(GroundSet(len(points), labels), rel)


def _bounds(posets):
    bottoms, tops = [], []
    for k, poset in enumerate(posets):
        least, greatest = poset.least(), poset.greatest()
        if least is None or greatest is None:
            raise MissingBoundsError(f"factor {k} lacks a least or greatest element")
        bottoms.append(least)
        tops.append(greatest)
    return bottoms, tops


def _near_constant(points, constant):
    """Indices of the points equal to constant in all but at most one coordinate"""
    return [
        index for index, point in enumerate(points)
        if sum(1 for c, v in zip(point, constant) if c != v) <= 1
    ]


@lru_cache(maxsize=16)
def _generated_lattices(posets):
    order = product_order(posets)
    points = product_points(posets)
    bottoms, tops = _bounds(posets)
    full = order.ground.full_mask
    up_gen = [order.up_masks[s] for s in _near_constant(points, bottoms)]
    down_gen = [order.down_masks[s] for s in _near_constant(points, tops)]
    up_lattice, _ = close_masks(up_gen, full)
    down_lattice, _ = close_masks(down_gen, full)
    return order, frozenset(up_lattice), frozenset(down_lattice)


@dataclass(frozen=True)
class ProductUpsetReport:
    cond_ii: bool
    cond_iii: bool
    cond_iv: bool
    support: tuple


def _support(x, points, posets):
    """Coordinates where changing one value can flip membership in x"""
    index = {point: k for k, point in enumerate(points)}

    def member(point):
        return (x >> index[point]) & 1

    return tuple(
        i for i, poset in enumerate(posets)
        if any(
            member(point) != member(point[:i] + (value,) + point[i + 1:])
            for point in points
            for value in range(poset.ground.size)
        )
    )


def product_upset_check(posets, x):
    """Membership of an up-set of the product in the lattices generated by near-bottom up-sets
    and (for its complement) near-top down-sets, plus the coordinates it depends on
    """
    posets = tuple(posets)
    order, up_lattice, down_lattice = _generated_lattices(posets)
    require_ground(order.ground, (x,))
    for a in x:
        if order.up_masks[a] & ~x.bits:
            raise NotUpSetError(f"{x} is not an up-set: it contains {order.ground.label(a)} but not everything above")
    points = product_points(posets)
    support = _support(x.bits, points, posets)
    projection = {}
    cond_ii = True
    for k, point in enumerate(points):
        key = tuple(point[i] for i in support)
        bit = (x.bits >> k) & 1
        if projection.setdefault(key, bit) != bit:
            cond_ii = False
    return ProductUpsetReport(
        cond_ii=cond_ii,
        cond_iii=x.bits in up_lattice,
        cond_iv=(order.ground.full_mask & ~x.bits) in down_lattice,
        support=support,
    )
