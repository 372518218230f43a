"""Generators and brute-force oracles shared by the test modules."""

import itertools

from comonoid.analysis import first_unseparated_pair
from comonoid.core import Family, GroundSet, Preorder
from comonoid.lattice import Const, Join, Meet, Var


def random_family(rng, size, count, bounds=False):
    ground = GroundSet(size)
    masks = {rng.randrange(1 << size) for _ in range(count)}
    if bounds:
        masks |= {0, ground.full_mask}
    return Family.from_masks(ground, masks)


def random_t1_family(rng, size, count):
    """Random family, topped up with one separating word for every unseparated pair"""
    family = random_family(rng, size, count)
    while True:
        pair = first_unseparated_pair(family)
        if pair is None:
            return family
        a, b = pair
        extra = (rng.randrange(1 << size) | (1 << a)) & ~(1 << b)
        family = family.with_masks([extra])


def brute_force_diagonals(family):
    """Diagonals of every crossword over the family, by trying all row assignments"""
    n = family.ground.size
    members = family.mask_set
    diagonals = set()
    for rows in itertools.product(family.masks, repeat=n):
        cols = [sum(((rows[a] >> b) & 1) << a for a in range(n)) for b in range(n)]
        if all(col in members for col in cols):
            diagonals.add(sum(((rows[a] >> a) & 1) << a for a in range(n)))
    return diagonals


def random_preorder(rng, size):
    pairs = [(rng.randrange(size), rng.randrange(size)) for _ in range(rng.randrange(size + 2))]
    return Preorder.from_pairs(GroundSet(size), pairs)


def brute_force_order_family(order, direction):
    """Down-sets (or up-sets) by testing every subset against every related pair"""
    n = order.ground.size
    masks = []
    for mask in range(1 << n):
        closed = True
        for a in range(n):
            for b in range(n):
                low, high = (a, b) if direction == "down" else (b, a)
                if order.leq(a, b) and (mask >> high) & 1 and not (mask >> low) & 1:
                    closed = False
        if closed:
            masks.append(mask)
    return masks


def set_partitions(items):
    """Every partition of items into nonempty blocks"""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        yield [[first]] + partition
        for k in range(len(partition)):
            yield partition[:k] + [[first] + partition[k]] + partition[k + 1:]


def random_expr(rng, arity, depth):
    """Random Var/Const/Meet/Join tree over variables below arity"""
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.05:
            return Const(rng.randrange(2))
        return Var(rng.randrange(arity))
    node = Meet if rng.random() < 0.5 else Join
    return node(*(random_expr(rng, arity, depth - 1) for _ in range(rng.randrange(1, 4))))


def truth_value(expr, values):
    """Evaluate an expression tree directly, without normalizing it"""
    if isinstance(expr, Var):
        return values[expr.index]
    if isinstance(expr, Const):
        return expr.value
    results = [truth_value(operand, values) for operand in expr.operands]
    return min(results) if isinstance(expr, Meet) else max(results)
