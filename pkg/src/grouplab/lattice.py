"""Subgroup structure at desk scale: normal subgroups, the full subgroup
lattice up to conjugacy, maximal subgroups, Frattini subgroup, Sylow and
normal Hall subgroups, and the O_p / O_{p'} cores.

Normal subgroups are the join-closure of the normal closures of conjugacy
class representatives (every normal subgroup is the join of the closures of
the elements it contains), which avoids the full lattice.

The lattice itself enumerates subgroup conjugacy classes by cyclic
extension: each known class is extended inside its normalizer by cosets of
prime order.  That walk reaches every solvable subgroup; for a non-solvable
ambient group the walk is additionally seeded with the perfect cores of
two-generator subgroups of the ambient perfect core, which covers the
non-solvable subgroups of the groups this package verifies (their perfect
subgroups are 2-generated).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arith import is_pi_number, is_prime, p_part, pi_part, prime_divisors
from .caps import Caps, DEFAULT_CAPS
from .errors import ResourceLimitError
from .groups import (
    GroupHandle,
    build_group,
    conjugacy_classes,
    coset_representative,
    derived_subgroup,
    is_normal_in,
    is_solvable,
    join,
    normal_closure,
    perfect_core,
    trivial_group,
)
from .perms import Perm


def _conj_images(t: tuple[int, ...], g: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(t)
    for a, ta in enumerate(t):
        out[g[a]] = g[ta]
    return tuple(out)


def normalizer_elements(G: GroupHandle, H: GroupHandle, caps: Caps) -> list[Perm]:
    """Elements of G normalizing H, by scanning G's element list."""
    key = H.element_key(caps)
    hgens = [h.images for h in H.generators]
    out = []
    for g in G.element_list(caps):
        gi = g.images
        if all(_conj_images(h, gi) in key for h in hgens):
            out.append(g)
    return out


def normalizer(G: GroupHandle, H: GroupHandle, caps: Caps = DEFAULT_CAPS) -> GroupHandle:
    return build_group(
        normalizer_elements(G, H, caps), degree=G.degree, parent=G, label="normalizer"
    )


# ---------------------------------------------------------------------------
# subgroup classes under conjugation


@dataclass
class SubgroupClass:
    representative: GroupHandle
    order: int
    size: int
    rep_key: tuple  # sorted element images of the representative (lex tie-break)
    conjugate_sets: list[frozenset] = field(repr=False)


class _SubgroupOrbits:
    """Registry of subgroup conjugacy classes of one ambient group."""

    def __init__(self, G: GroupHandle, caps: Caps):
        self.G = G
        self.caps = caps
        self._gen_images = [g.images for g in G.generators]
        self.seen: dict[frozenset, SubgroupClass] = {}
        self.classes: list[SubgroupClass] = []

    def lookup(self, H: GroupHandle) -> SubgroupClass | None:
        return self.seen.get(H.element_key(self.caps))

    def class_of(self, H: GroupHandle) -> SubgroupClass:
        return self.lookup(H) or self._register_new(H)

    def register(self, H: GroupHandle) -> SubgroupClass | None:
        """Add H's class; None when the class is already known."""
        if self.lookup(H) is not None:
            return None
        return self._register_new(H)

    def _register_new(self, H: GroupHandle) -> SubgroupClass:
        start = H.element_key(self.caps)
        orbit = {start}
        queue = [start]
        while queue:
            current = queue.pop()
            for g in self._gen_images:
                image = frozenset(_conj_images(t, g) for t in current)
                if image not in orbit:
                    orbit.add(image)
                    queue.append(image)
        rep_set = min(orbit, key=sorted)
        if rep_set == start:
            rep = H
        else:
            rep = build_group(
                [Perm._raw(t) for t in sorted(rep_set)],
                degree=self.G.degree,
                parent=self.G,
                label=H.label,
            )
        cls = SubgroupClass(
            representative=rep,
            order=H.order,
            size=len(orbit),
            rep_key=tuple(sorted(rep_set)),
            conjugate_sets=list(orbit),
        )
        for key in orbit:
            self.seen[key] = cls
        self.classes.append(cls)
        return cls


def _extension_candidates(
    G: GroupHandle, H: GroupHandle, orbits: _SubgroupOrbits, caps: Caps
) -> list[GroupHandle]:
    """Subgroups K with H normal of prime index in K, K inside N_G(H)."""
    n_elements = normalizer_elements(G, H, caps)
    h_key = H.element_key(caps)
    transversal: dict[tuple, Perm] = {}
    for x in n_elements:
        rep = coset_representative(H, x)
        transversal.setdefault(rep.images, rep)
    out = []
    seen_local: set[frozenset] = set()
    for images in sorted(transversal):
        r = transversal[images]
        if r.images in h_key:
            continue
        k = 1
        power = r
        while power.images not in h_key:
            power = power * r
            k += 1
        if not is_prime(k):
            continue
        K = build_group(
            list(H.generators) + [r], degree=G.degree, parent=G, label=None
        )
        key = K.element_key(caps)
        if key in seen_local:
            continue
        seen_local.add(key)
        out.append(K)
    return out


@dataclass
class SubgroupLattice:
    group: GroupHandle
    classes: list[SubgroupClass]
    # inclusion[i] = indices j != i such that a conjugate of class i's
    # representative lies inside class j's representative
    inclusion: dict[int, set[int]]

    def class_orders(self) -> list[int]:
        return [c.order for c in self.classes]


def subgroup_lattice(G: GroupHandle, caps: Caps = DEFAULT_CAPS) -> SubgroupLattice:
    """All subgroup conjugacy classes with inclusion edges."""
    if G.order > caps.lattice:
        raise ResourceLimitError("lattice", caps.lattice, G.order)
    orbits = _SubgroupOrbits(G, caps)
    seeds = [trivial_group(G.degree, parent=G)]
    core = perfect_core(G)
    if core.order > 1:
        seeds.extend(_perfect_seeds(G, core, caps))
    worklist: list[SubgroupClass] = []
    for seed in seeds:
        cls = orbits.register(seed)
        if cls is not None:
            worklist.append(cls)
    head = 0
    while head < len(worklist):
        cls = worklist[head]
        head += 1
        for K in _extension_candidates(G, cls.representative, orbits, caps):
            new_cls = orbits.register(K)
            if new_cls is not None:
                worklist.append(new_cls)
    classes = sorted(orbits.classes, key=lambda c: (c.order, c.rep_key))
    if classes[-1].order != G.order:
        raise RuntimeError("lattice walk failed to reach the whole group")

    inclusion: dict[int, set[int]] = {i: set() for i in range(len(classes))}
    for i, small in enumerate(classes):
        for j, big in enumerate(classes):
            if i == j or big.order <= small.order or big.order % small.order != 0:
                continue
            big_set = frozenset(big.rep_key)
            if any(conj <= big_set for conj in small.conjugate_sets):
                inclusion[i].add(j)
    return SubgroupLattice(G, classes, inclusion)


def _perfect_seeds(G: GroupHandle, core: GroupHandle, caps: Caps) -> list[GroupHandle]:
    """Perfect cores of two-generator subgroups of the ambient perfect core."""
    seeds: dict[frozenset, GroupHandle] = {core.element_key(caps): core}
    swept: set[frozenset] = set()
    reps = conjugacy_classes(core, caps).representatives
    elements = core.element_list(caps)
    for x in reps:
        if x.is_identity():
            continue
        for y in elements:
            if y.is_identity():
                continue
            T = build_group([x, y], degree=G.degree, parent=G)
            t_key = T.element_key(caps)
            if t_key in swept:
                continue
            swept.add(t_key)
            P = perfect_core(T)
            if P.order > 1:
                P.parent = G
                seeds.setdefault(P.element_key(caps), P)
    return list(seeds.values())


def maximal_subgroups(
    G: GroupHandle, caps: Caps = DEFAULT_CAPS
) -> list[tuple[GroupHandle, int]]:
    """Maximal subgroup classes (representative, class size)."""
    lat = subgroup_lattice(G, caps)
    top = len(lat.classes) - 1
    out = []
    for i, cls in enumerate(lat.classes):
        if i == top:
            continue
        if lat.inclusion[i] == {top}:
            out.append((cls.representative, cls.size))
    return out


def is_p_group(G: GroupHandle) -> tuple[bool, int | None]:
    primes = prime_divisors(G.order) if G.order > 1 else []
    if len(primes) == 1:
        return True, primes[0]
    return (G.order == 1), None


def frattini(G: GroupHandle, caps: Caps = DEFAULT_CAPS) -> GroupHandle:
    """Intersection of all maximal subgroups.

    For a p-group this is computed directly as <G', g^p> (Burnside basis);
    otherwise the maximal classes come from the subgroup lattice.
    """
    if G.order == 1:
        return trivial_group(G.degree, parent=G)
    pgroup, p = is_p_group(G)
    if pgroup and p is not None:
        gens = list(derived_subgroup(G).generators)
        gens += [g**p for g in G.generators]
        phi = build_group(gens, degree=G.degree, parent=G, label="frattini")
        return phi
    lat = subgroup_lattice(G, caps)
    top = len(lat.classes) - 1
    running = frozenset(G.element_key(caps))
    for i, cls in enumerate(lat.classes):
        if i == top or lat.inclusion[i] != {top}:
            continue
        for conj in cls.conjugate_sets:
            running &= conj
    phi = build_group(
        [Perm._raw(t) for t in sorted(running)],
        degree=G.degree,
        parent=G,
        label="frattini",
    )
    if not is_normal_in(phi, G):
        raise RuntimeError("frattini subgroup failed the normality check")
    if not is_nilpotent(phi, caps):
        raise RuntimeError("frattini subgroup failed the nilpotency check")
    return phi


def sylow(G: GroupHandle, p: int, caps: Caps = DEFAULT_CAPS) -> GroupHandle:
    """A Sylow p-subgroup, grown inside successive normalizers.

    Any p-subgroup below full order has p dividing |N_G(P) : P|, so some
    coset of prime order p extends it; the walk is deterministic.
    """
    target = p_part(G.order, p)
    P = trivial_group(G.degree, parent=G)
    while P.order < target:
        n_elements = normalizer_elements(G, P, caps)
        p_key = P.element_key(caps)
        extender = None
        transversal: dict[tuple, Perm] = {}
        for x in n_elements:
            rep = coset_representative(P, x)
            transversal.setdefault(rep.images, rep)
        for images in sorted(transversal):
            r = transversal[images]
            if r.images in p_key:
                continue
            k = 1
            power = r
            while power.images not in p_key:
                power = power * r
                k += 1
            if k % p == 0:
                extender = r ** (k // p)
                break
        if extender is None:
            raise RuntimeError(f"sylow growth stalled at order {P.order}")
        P = build_group(
            list(P.generators) + [extender],
            degree=G.degree,
            parent=G,
            label=f"sylow-{p}",
        )
    return P


def is_nilpotent(G: GroupHandle, caps: Caps = DEFAULT_CAPS) -> bool:
    """Nilpotent iff every Sylow subgroup is normal."""
    for p in prime_divisors(G.order):
        if not is_normal_in(sylow(G, p, caps), G):
            return False
    return True


# ---------------------------------------------------------------------------
# normal subgroups


@dataclass
class NormalSet:
    """All normal subgroups of one group, ordered by (order, elements)."""

    group: GroupHandle
    members: list[GroupHandle]

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def proper_nontrivial(self) -> list[GroupHandle]:
        return [m for m in self.members if 1 < m.order < self.group.order]


def normal_subgroups(G: GroupHandle, caps: Caps = DEFAULT_CAPS) -> NormalSet:
    """All normal subgroups as the join-closure of element-class closures."""
    if G.order > caps.enumeration:
        raise ResourceLimitError("enumeration", caps.enumeration, G.order)
    atoms: dict[frozenset, GroupHandle] = {}
    for rep in conjugacy_classes(G, caps).representatives:
        closure = normal_closure(G, [rep], label="class closure")
        atoms.setdefault(closure.element_key(caps), closure)

    members: dict[frozenset, GroupHandle] = {}
    triv = trivial_group(G.degree, parent=G)
    members[triv.element_key(caps)] = triv
    worklist = list(atoms.values())
    for H in worklist:
        members.setdefault(H.element_key(caps), H)
    head = 0
    while head < len(worklist):
        H = worklist[head]
        head += 1
        for other_key in list(members):
            other = members[other_key]
            h_key = H.element_key(caps)
            if h_key <= other_key or other_key <= h_key:
                continue
            J = join(H, other)
            J.parent = G
            jk = J.element_key(caps)
            if jk not in members:
                members[jk] = J
                worklist.append(J)
    ordered = sorted(
        members.values(), key=lambda m: (m.order, sorted(m.element_key(caps)))
    )
    return NormalSet(G, ordered)


def minimal_normal_subgroups(
    G: GroupHandle, caps: Caps = DEFAULT_CAPS, normals: NormalSet | None = None
) -> list[GroupHandle]:
    normals = normals or normal_subgroups(G, caps)
    nontrivial = [m for m in normals.members if m.order > 1]
    out = []
    for m in nontrivial:
        mk = m.element_key(caps)
        if any(other.element_key(caps) < mk for other in nontrivial):
            continue
        out.append(m)
    if is_solvable(G):
        for m in out:
            if not _is_elementary_abelian(m, caps):
                raise RuntimeError(
                    "minimal normal subgroup of a solvable group must be elementary abelian"
                )
    return out


def _is_elementary_abelian(H: GroupHandle, caps: Caps) -> bool:
    if H.order == 1:
        return True
    primes = prime_divisors(H.order)
    if len(primes) != 1:
        return False
    p = primes[0]
    if any(a * b != b * a for a in H.generators for b in H.generators):
        return False
    return all(g.order() == p for g in H.element_list(caps) if not g.is_identity())


def core_subgroups(
    G: GroupHandle,
    p: int,
    caps: Caps = DEFAULT_CAPS,
    normals: NormalSet | None = None,
) -> tuple[GroupHandle, GroupHandle]:
    """(O_p(G), O_{p'}(G)) read off the normal-subgroup set."""
    normals = normals or normal_subgroups(G, caps)
    o_p = trivial_group(G.degree, parent=G)
    o_p_prime = trivial_group(G.degree, parent=G)
    for m in normals.members:
        if m.order == p_part(m.order, p):
            o_p = join(o_p, m, label=f"O_{p}")
            o_p.parent = G
        elif m.order % p != 0:
            o_p_prime = join(o_p_prime, m, label=f"O_{p}'")
            o_p_prime.parent = G
    return o_p, o_p_prime


@dataclass
class HallResult:
    found: bool
    subgroup: GroupHandle | None
    achieved_order: int
    pi_order: int


def normal_hall(
    G: GroupHandle, primes, caps: Caps = DEFAULT_CAPS
) -> HallResult:
    """The normal Hall pi-subgroup via the pi-element generation criterion:
    H = <all pi-elements>; it is the (unique) normal Hall pi-subgroup exactly
    when |H| equals the pi-part of |G|."""
    primes = sorted(set(primes))
    target = pi_part(G.order, primes)
    members = [
        g for g in G.element_list(caps) if is_pi_number(g.order(), primes)
    ]
    H = build_group(members, degree=G.degree, parent=G, label="hall")
    if H.order == target:
        if not is_normal_in(H, G):
            raise RuntimeError("pi-element subgroup unexpectedly not normal")
        return HallResult(True, H, H.order, target)
    return HallResult(False, None, H.order, target)
