"""Series and invariant computations on group handles.

Solvable-only quantities (derived length, nilpotent length, p-length, chief
rank) return None instead of a number when the group is not solvable; report
builders convert that into an explicit marker rather than guessing.

An AnalysisContext memoizes the expensive per-group data (element lists,
normal subgroups, lattice, Sylow subgroups) for one group; contexts are not
shared between threads.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

from .arith import factorize, p_part, prime_divisors
from .caps import Caps, DEFAULT_CAPS
from .errors import InputError, ResourceLimitError
from .groups import (
    GroupHandle,
    QuotientMap,
    build_group,
    derived_chain,
    derived_subgroup,
    is_solvable,
    join,
    quotient,
    trivial_group,
)
from .lattice import (
    NormalSet,
    SubgroupLattice,
    core_subgroups,
    frattini,
    is_nilpotent,
    is_p_group,
    minimal_normal_subgroups,
    normal_hall,
    normal_subgroups,
    subgroup_lattice,
    sylow,
)
from .perms import Perm


def derived_series(G: GroupHandle) -> list[GroupHandle]:
    """Descending derived series; the last entry is the perfect core."""
    return derived_chain(G)


def derived_length(G: GroupHandle) -> int | None:
    chain = derived_chain(G)
    if chain[-1].order != 1:
        return None
    return len(chain) - 1


def is_abelian(G: GroupHandle) -> bool:
    gens = G.generators
    return all(a * b == b * a for a in gens for b in gens)


def is_cyclic(G: GroupHandle, caps: Caps = DEFAULT_CAPS) -> bool:
    if G.order == 1:
        return True
    if not is_abelian(G):
        return False
    return any(g.order() == G.order for g in G.element_list(caps))


def is_elementary_abelian(G: GroupHandle, caps: Caps = DEFAULT_CAPS) -> bool:
    if G.order == 1:
        return True
    primes = prime_divisors(G.order)
    if len(primes) != 1 or not is_abelian(G):
        return False
    p = primes[0]
    return all(g.order() == p for g in G.element_list(caps) if not g.is_identity())


def fitting(
    G: GroupHandle, caps: Caps = DEFAULT_CAPS, normals: NormalSet | None = None
) -> GroupHandle:
    """F(G): the join of the cores O_p(G) over the primes dividing |G|."""
    normals = normals or normal_subgroups(G, caps)
    F = trivial_group(G.degree, parent=G)
    for p in prime_divisors(G.order):
        o_p, _ = core_subgroups(G, p, caps, normals)
        F = join(F, o_p, label="fitting")
        F.parent = G
    return F


def fitting_series(G: GroupHandle, caps: Caps = DEFAULT_CAPS) -> list[GroupHandle] | None:
    """Ascending Fitting series 1 < F1 < F2 ... reaching G; None when it stalls
    below G (the group is then not solvable)."""
    members = [trivial_group(G.degree, parent=G)]
    while members[-1].order < G.order:
        qm = quotient(G, members[-1], caps)
        F = fitting(qm.image, caps)
        if F.order == 1:
            return None
        members.append(qm.preimage_of_subgroup(F, label="fitting layer"))
    return members


def nilpotent_length(G: GroupHandle, caps: Caps = DEFAULT_CAPS) -> int | None:
    if G.order == 1:
        return 0
    series = fitting_series(G, caps)
    if series is None:
        return None
    return len(series) - 1


def p_length(G: GroupHandle, p: int, caps: Caps = DEFAULT_CAPS) -> int | None:
    """l_p: the number of p-layers in the ascending O_{p'} / O_p alternation."""
    if G.order % p != 0:
        return 0
    current = trivial_group(G.degree, parent=G)
    length = 0
    while current.order < G.order:
        qm = quotient(G, current, caps)
        image_normals = normal_subgroups(qm.image, caps)
        _, o_pp = core_subgroups(qm.image, p, caps, image_normals)
        if o_pp.order > 1:
            current = qm.preimage_of_subgroup(o_pp, label="p'-layer")
            if current.order == G.order:
                break  # the series tops out with a p'-layer
            qm = quotient(G, current, caps)
            image_normals = normal_subgroups(qm.image, caps)
        o_p, _ = core_subgroups(qm.image, p, caps, image_normals)
        if o_p.order == 1:
            return None  # series stalled below G: not solvable
        current = qm.preimage_of_subgroup(o_p, label="p-layer")
        length += 1
    return length


@dataclass
class ChiefSeries:
    """Ascending chief series with per-factor data."""

    members: list[GroupHandle]
    factor_orders: list[int]
    factor_elementary: list[bool]

    @property
    def solvable(self) -> bool:
        return all(self.factor_elementary)

    def factor_factorizations(self) -> list[dict[int, int]]:
        return [factorize(n) for n in self.factor_orders]


def chief_series(
    G: GroupHandle,
    caps: Caps = DEFAULT_CAPS,
    rng: random.Random | None = None,
) -> ChiefSeries:
    """A chief series built by repeatedly pulling back a minimal normal
    subgroup of the current quotient.

    Ties are broken deterministically (smallest order, then lexicographically
    smallest element list); pass `rng` to shuffle the choice instead, which is
    how the Jordan-Hoelder invariance of the factor multiset is exercised.
    """
    members = [trivial_group(G.degree, parent=G)]
    orders: list[int] = []
    elementary: list[bool] = []
    while members[-1].order < G.order:
        qm = quotient(G, members[-1], caps)
        minimals = minimal_normal_subgroups(qm.image, caps)
        minimals.sort(key=lambda m: (m.order, sorted(m.element_key(caps))))
        chosen = rng.choice(minimals) if rng is not None else minimals[0]
        members.append(qm.preimage_of_subgroup(chosen, label="chief member"))
        orders.append(chosen.order)
        elementary.append(is_elementary_abelian(chosen, caps))
    return ChiefSeries(members, orders, elementary)


def chief_rank(
    G: GroupHandle,
    p: int,
    caps: Caps = DEFAULT_CAPS,
    series: ChiefSeries | None = None,
) -> int | None:
    """r_p: the largest k with a chief factor of order p^k (solvable G)."""
    series = series or chief_series(G, caps)
    if not series.solvable:
        return None
    best = 0
    for n in series.factor_orders:
        if n % p == 0:
            best = max(best, factorize(n)[p])
    return best


def max_chief_rank(
    G: GroupHandle, caps: Caps = DEFAULT_CAPS, series: ChiefSeries | None = None
) -> int | None:
    series = series or chief_series(G, caps)
    if not series.solvable:
        return None
    return max(
        (max(factorize(n).values()) for n in series.factor_orders), default=0
    )


def is_supersolvable(
    G: GroupHandle, caps: Caps = DEFAULT_CAPS, series: ChiefSeries | None = None
) -> bool:
    """Supersolvable iff the chief factors all have prime order (the factor
    multiset is series-independent, so one series decides)."""
    series = series or chief_series(G, caps)
    return series.solvable and all(
        len(factorize(n)) == 1 and max(factorize(n).values()) == 1
        for n in series.factor_orders
    )


def supersolvable_residual(
    G: GroupHandle, caps: Caps = DEFAULT_CAPS, normals: NormalSet | None = None
) -> GroupHandle:
    """The smallest normal subgroup with supersolvable quotient (the meet of
    all of them; supersolvable groups form a formation, so the meet itself
    has supersolvable quotient)."""
    normals = normals or normal_subgroups(G, caps)
    running: frozenset | None = None
    for N in normals.members:
        qm = quotient(G, N, caps)
        if is_supersolvable(qm.image, caps):
            key = N.element_key(caps)
            running = key if running is None else (running & key)
    assert running is not None  # N = G always qualifies
    residual = build_group(
        [Perm._raw(t) for t in sorted(running)],
        degree=G.degree,
        parent=G,
        label="supersolvable residual",
    )
    return residual


@dataclass
class TowerResult:
    has_tower: bool
    witness: list[GroupHandle] = field(default_factory=list)
    prime_order: list[int] = field(default_factory=list)


def sylow_tower_supersolvable(G: GroupHandle, caps: Caps = DEFAULT_CAPS) -> TowerResult:
    """Ordered Sylow tower of supersolvable type: for the primes in decreasing
    order, each prefix must have a normal Hall subgroup (equivalently the
    greedy top-down Sylow quotient construction succeeds)."""
    primes = sorted(prime_divisors(G.order), reverse=True)
    chain = [trivial_group(G.degree, parent=G)]
    for k in range(1, len(primes) + 1):
        result = normal_hall(G, primes[:k], caps)
        if not result.found:
            return TowerResult(False)
        chain.append(result.subgroup)
    return TowerResult(True, chain, primes)


@dataclass
class BicyclicWitness:
    bicyclic: bool
    a: Perm | None = None
    b: Perm | None = None
    orders: tuple[int, int] | None = None
    intersection_order: int | None = None


def is_bicyclic(G: GroupHandle, caps: Caps = DEFAULT_CAPS) -> BicyclicWitness:
    """Is G the set product of two cyclic subgroups?

    Searches pairs (a, b) with a over conjugacy class representatives and b
    over all elements; conjugating both factors preserves the property, so
    restricting the first factor to class representatives is complete.  The
    subgroup product identity |<a><b>| = |<a>||<b>| / |<a> inter <b>| makes
    the size test exact.
    """
    n = G.order
    if n == 1:
        ident = Perm.identity(G.degree)
        return BicyclicWitness(True, ident, ident, (1, 1), 1)
    elements = G.element_list(caps)
    from .groups import conjugacy_classes

    reps = sorted(
        conjugacy_classes(G, caps).representatives,
        key=lambda g: (-g.order(), g.images),
    )
    for a in reps:
        order_a = a.order()
        powers_a = set()
        x = Perm.identity(G.degree)
        for _ in range(order_a):
            powers_a.add(x.images)
            x = x * a
        for b in elements:
            order_b = b.order()
            if order_a * order_b % n != 0 or order_a * order_b < n:
                continue
            meet = order_a * order_b // n
            # |<a> inter <b>| must come out to exactly `meet`
            count = 0
            y = Perm.identity(G.degree)
            for _ in range(order_b):
                if y.images in powers_a:
                    count += 1
                y = y * b
            if count == meet:
                return BicyclicWitness(
                    True, a, b, (order_a, order_b), count
                )
    return BicyclicWitness(False)


def is_metacyclic(
    G: GroupHandle, caps: Caps = DEFAULT_CAPS, normals: NormalSet | None = None
) -> bool:
    """Has a cyclic normal subgroup with cyclic quotient."""
    normals = normals or normal_subgroups(G, caps)
    for C in normals.members:
        if not is_cyclic(C, caps):
            continue
        qm = quotient(G, C, caps)
        if is_cyclic(qm.image, caps):
            return True
    return False


def min_generators_p_group(P: GroupHandle, p: int, caps: Caps = DEFAULT_CAPS) -> int:
    """Minimal generator count of a p-group: log_p |P / Phi(P)| with
    Phi(P) = <P', g^p> (Burnside basis theorem)."""
    if P.order != p_part(P.order, p):
        raise InputError(f"min_generators_p_group: |P|={P.order} is not a power of {p}")
    if P.order == 1:
        return 0
    gens = list(derived_subgroup(P).generators) + [g**p for g in P.generators]
    phi = build_group(gens, degree=P.degree, parent=P, label="frattini")
    index = P.order // phi.order
    k = 0
    while index > 1:
        index //= p
        k += 1
    return k


@dataclass
class A4FreeResult:
    a4_free: bool
    section_subgroup_order: int | None = None
    section_kernel_order: int | None = None


def is_a4_free(
    G: GroupHandle,
    caps: Caps = DEFAULT_CAPS,
    lattice: SubgroupLattice | None = None,
) -> A4FreeResult:
    """No section (quotient of a subgroup) isomorphic to A4.

    Sections of conjugate subgroups are isomorphic, so lattice class
    representatives suffice.  Groups whose order 12 does not divide are
    A4-free outright.
    """
    if G.order % 12 != 0:
        return A4FreeResult(True)
    lattice = lattice or subgroup_lattice(G, caps)
    for cls in lattice.classes:
        H = cls.representative
        if H.order % 12 != 0:
            continue
        for K in normal_subgroups(H, caps).members:
            if H.order // K.order != 12:
                continue
            qm = quotient(H, K, caps)
            if _looks_like_a4(qm.image, caps):
                return A4FreeResult(False, H.order, K.order)
    return A4FreeResult(True)


def _looks_like_a4(Q: GroupHandle, caps: Caps) -> bool:
    # among the five groups of order 12, only A4 lacks an element of order 6
    return Q.order == 12 and all(g.order() != 6 for g in Q.element_list(caps))


# ---------------------------------------------------------------------------
# small-group recognition


def _order_histogram(G: GroupHandle, caps: Caps) -> tuple[tuple[int, int], ...]:
    counts: dict[int, int] = {}
    for g in G.element_list(caps):
        o = g.order()
        counts[o] = counts.get(o, 0) + 1
    return tuple(sorted(counts.items()))


def _fingerprint(G: GroupHandle, caps: Caps) -> tuple:
    from .groups import center

    return (
        G.order,
        _order_histogram(G, caps),
        center(G, caps).order,
        derived_subgroup(G).order,
        is_abelian(G),
    )


_REFERENCE_FINGERPRINTS: dict[tuple, str] | None = None


def _reference_fingerprints(caps: Caps) -> dict[tuple, str]:
    """Fingerprints of the fixed named targets, built from constructions.

    The table is validated pairwise-distinguishing by the test suite; lookup
    never returns a name for a fingerprint that two targets share (dict keys
    collide loudly in the tests, not here).
    """
    global _REFERENCE_FINGERPRINTS
    if _REFERENCE_FINGERPRINTS is None:
        from .construct import GroupSpec, construct

        targets = {
            "SL(2,3)": GroupSpec("matrix_group", {"n": 2, "p": 3, "family": "SL"}),
            "GL(2,3)": GroupSpec("matrix_group", {"n": 2, "p": 3, "family": "GL"}),
            "SD16": GroupSpec(
                "presentation", {"text": "r, s | r^8; s^2; s^-1 r s = r^3"}
            ),
        }
        table: dict[tuple, str] = {}
        for name, spec in targets.items():
            table[_fingerprint(construct(spec), caps)] = name
        _REFERENCE_FINGERPRINTS = table
    return _REFERENCE_FINGERPRINTS


def recognize_small(G: GroupHandle, caps: Caps = DEFAULT_CAPS) -> str:
    """Name a small group from the fixed recognizer list, or 'unknown'.

    The structural rules are exact within their order class; the remaining
    targets match on a full fingerprint against reference constructions.
    Never returns a wrong name for any group the package constructs under
    the fixed target names (covered by tests).
    """
    from .groups import center, perfect_core

    n = G.order
    if n > 200:
        return "unknown"
    if n == 1:
        return "1"
    if is_cyclic(G, caps):
        return f"Z{n}"
    if is_elementary_abelian(G, caps):
        return "Z2xZ2" if n == 4 else f"E{n}"
    if is_abelian(G):
        return "unknown"
    if n == 6:
        return "S3"
    if n == 8:
        involutions = sum(1 for g in G.element_list(caps) if g.order() == 2)
        return "D8" if involutions == 5 else "Q8"
    if n == 12 and _looks_like_a4(G, caps):
        return "A4"
    if n == 21:
        return "[Z7]Z3"  # the unique nonabelian group of order 21
    if n == 24 and center(G, caps).order == 1:
        return "S4"  # the unique order-24 group with trivial center
    if n == 168 and perfect_core(G).order == 168:
        return "GL(3,2)"  # the unique perfect group of order 168
    fp = _fingerprint(G, caps)
    table = _reference_fingerprints(caps)
    if fp in table:
        return table[fp]
    if n % 2 == 0 and n >= 10:
        from .construct import dihedral

        if fp == _fingerprint(dihedral(n), caps):
            return f"D{n}"
    return "unknown"


# ---------------------------------------------------------------------------
# per-group analysis context and the invariant report


class AnalysisContext:
    """Memoized per-group analysis data; not shared across threads."""

    def __init__(self, G: GroupHandle, caps: Caps = DEFAULT_CAPS):
        self.group = G
        self.caps = caps
        self._normals: NormalSet | None = None
        self._lattice: SubgroupLattice | None = None
        self._sylows: dict[int, GroupHandle] = {}
        self._frattini: GroupHandle | None = None
        self._chief: ChiefSeries | None = None
        self._quotient_memo: dict[tuple[frozenset, frozenset], bool] = {}

    def normals(self) -> NormalSet:
        if self._normals is None:
            self._normals = normal_subgroups(self.group, self.caps)
        return self._normals

    def lattice(self) -> SubgroupLattice:
        if self._lattice is None:
            self._lattice = subgroup_lattice(self.group, self.caps)
        return self._lattice

    def sylow(self, p: int) -> GroupHandle:
        if p not in self._sylows:
            self._sylows[p] = sylow(self.group, p, self.caps)
        return self._sylows[p]

    def frattini(self) -> GroupHandle:
        if self._frattini is None:
            self._frattini = frattini(self.group, self.caps)
        return self._frattini

    def chief(self) -> ChiefSeries:
        if self._chief is None:
            self._chief = chief_series(self.group, self.caps)
        return self._chief


@dataclass
class InvariantReport:
    """Everything the verifiers and reports need about one group."""

    order: int
    factorization: dict[int, int]
    solvable: bool
    abelian: bool
    nilpotent: bool
    supersolvable: bool
    odd_order: bool
    derived_length: int | None
    nilpotent_length: int | None
    p_lengths: dict[int, int] | None
    chief_factor_orders: list[int] | None
    chief_rank_by_prime: dict[int, int] | None
    chief_rank: int | None
    bicyclic: bool
    bicyclic_witness_orders: tuple[int, int] | None
    metacyclic: bool
    a4_free: bool | None
    sylow_tower: bool
    frattini_order: int | None
    derived_length_mod_frattini: int | None
    supersolvable_residual_order: int
    skipped: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "order": self.order,
            "factorization": {str(p): e for p, e in self.factorization.items()},
            "flags": {
                "solvable": self.solvable,
                "abelian": self.abelian,
                "nilpotent": self.nilpotent,
                "supersolvable": self.supersolvable,
                "odd_order": self.odd_order,
                "bicyclic": self.bicyclic,
                "metacyclic": self.metacyclic,
                "a4_free": self.a4_free,
                "sylow_tower_supersolvable": self.sylow_tower,
            },
            "derived_length": self.derived_length,
            "nilpotent_length": self.nilpotent_length,
            "p_lengths": {str(p): v for p, v in (self.p_lengths or {}).items()},
            "chief_factor_orders": self.chief_factor_orders,
            "chief_rank_by_prime": {
                str(p): v for p, v in (self.chief_rank_by_prime or {}).items()
            },
            "chief_rank": self.chief_rank,
            "bicyclic_witness_orders": list(self.bicyclic_witness_orders or ()) or None,
            "frattini_order": self.frattini_order,
            "derived_length_mod_frattini": self.derived_length_mod_frattini,
            "supersolvable_residual_order": self.supersolvable_residual_order,
            "skipped": dict(sorted(self.skipped.items())),
        }
        return out


def invariant_report(ctx: AnalysisContext) -> InvariantReport:
    G, caps = ctx.group, ctx.caps
    skipped: dict[str, str] = {}
    solvable = is_solvable(G)
    dlen = derived_length(G)
    nlen = nilpotent_length(G, caps) if solvable else None
    series = ctx.chief()
    p_lengths = None
    rank_by_prime = None
    rank = None
    if solvable:
        p_lengths = {p: p_length(G, p, caps) for p in prime_divisors(G.order)}
        rank_by_prime = {
            p: chief_rank(G, p, caps, series) for p in prime_divisors(G.order)
        }
        rank = max_chief_rank(G, caps, series)
    bw = is_bicyclic(G, caps)
    try:
        phi = ctx.frattini()
        frattini_order: int | None = phi.order
        if phi.order == 1:
            d_mod_phi = dlen
        else:
            qm = quotient(G, phi, caps)
            d_mod_phi = derived_length(qm.image)
    except ResourceLimitError as exc:
        frattini_order = None
        d_mod_phi = None
        skipped["frattini"] = str(exc)
    a4: bool | None
    try:
        a4 = is_a4_free(G, caps, ctx.lattice() if G.order % 12 == 0 else None).a4_free
    except ResourceLimitError as exc:
        a4 = None
        skipped["a4_free"] = str(exc)
    return InvariantReport(
        order=G.order,
        factorization=factorize(G.order),
        solvable=solvable,
        abelian=is_abelian(G),
        nilpotent=is_nilpotent(G, caps),
        supersolvable=is_supersolvable(G, caps, series),
        odd_order=G.order % 2 == 1,
        derived_length=dlen,
        nilpotent_length=nlen,
        p_lengths=p_lengths,
        chief_factor_orders=list(series.factor_orders),
        chief_rank_by_prime=rank_by_prime,
        chief_rank=rank,
        bicyclic=bw.bicyclic,
        bicyclic_witness_orders=bw.orders,
        metacyclic=is_metacyclic(G, caps, ctx.normals()),
        a4_free=a4,
        sylow_tower=sylow_tower_supersolvable(G, caps).has_tower,
        frattini_order=frattini_order,
        derived_length_mod_frattini=d_mod_phi,
        supersolvable_residual_order=supersolvable_residual(
            G, caps, ctx.normals()
        ).order,
        skipped=skipped,
    )
