"""Brute-force oracles, deliberately independent of the package's algorithms.

Everything here works on plain element sets built by exhaustive closure, so
the fast stabilizer-chain / closure routines can be checked against them.
"""

from __future__ import annotations

from grouplab.perms import Perm


def closure(gens: list[Perm], degree: int, limit: int = 200_000) -> set[Perm]:
    """All products of the generators, by worklist closure."""
    ident = Perm.identity(degree)
    seen = {ident}
    queue = [ident]
    while queue:
        x = queue.pop()
        for g in gens:
            y = x * g
            if y not in seen:
                if len(seen) >= limit:
                    raise RuntimeError("closure limit hit")
                seen.add(y)
                queue.append(y)
    return seen


def commutator_closure(elements: set[Perm], degree: int) -> set[Perm]:
    """The derived subgroup from all commutators over the full element set."""
    comms = []
    for x in elements:
        xi = x.inverse()
        for y in elements:
            comms.append(xi * y.inverse() * x * y)
    return closure(comms, degree)


def derived_chain_orders(elements: set[Perm], degree: int) -> list[int]:
    """Orders along the derived series computed purely from element sets."""
    orders = [len(elements)]
    current = elements
    while True:
        nxt = commutator_closure(current, degree)
        if len(nxt) == len(current):
            break
        orders.append(len(nxt))
        current = nxt
        if len(current) == 1:
            break
    return orders


def conjugation_classes(elements: set[Perm]) -> list[set[Perm]]:
    """Conjugacy classes as orbit sets over the whole group."""
    remaining = set(elements)
    classes = []
    while remaining:
        x = next(iter(remaining))
        cls = {y.inverse() * x * y for y in elements}
        classes.append(cls)
        remaining -= cls
    return classes


def set_product_size(A: set[Perm], B: set[Perm]) -> int:
    return len({a * b for a in A for b in B})


def is_normal_set(elements: set[Perm], ambient: set[Perm]) -> bool:
    return all(g.inverse() * x * g in elements for x in elements for g in ambient)
