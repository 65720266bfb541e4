"""Permutation-group engine.

A GroupHandle owns a deterministic stabilizer chain built by the classic
(non-randomized) closure algorithm: base points are chosen as the smallest
point moved by the residue that creates each level, orbits are scanned in
sorted order, and generators are processed in input order.  Rebuilding a
handle from the same generator list therefore reproduces the same chain,
order and membership answers.

Handles are immutable after construction; every operation here is a pure
function of its inputs, so handles can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .caps import Caps, DEFAULT_CAPS
from .errors import InputError, PreconditionError, ResourceLimitError
from .perms import Perm


class _Level:
    __slots__ = ("point", "gens", "transversal", "transversal_inv")

    def __init__(self, point: int, degree: int):
        self.point = point
        self.gens: list[Perm] = []
        ident = Perm.identity(degree)
        self.transversal: dict[int, Perm] = {point: ident}
        self.transversal_inv: dict[int, Perm] = {point: ident}


class StabChain:
    """Stabilizer chain with transversals; the workhorse behind GroupHandle."""

    __slots__ = ("degree", "levels")

    def __init__(self, degree: int):
        self.degree = degree
        self.levels: list[_Level] = []

    # -- queries ---------------------------------------------------------

    def order(self) -> int:
        n = 1
        for level in self.levels:
            n *= len(level.transversal)
        return n

    def base(self) -> list[int]:
        return [level.point for level in self.levels]

    def strong_generators(self) -> list[Perm]:
        out: list[Perm] = []
        for level in self.levels:
            out.extend(level.gens)
        return out

    def contains(self, g: Perm) -> bool:
        _, residue = self._sift(g, 0)
        return residue.is_identity()

    def _level_gens(self, i: int) -> list[Perm]:
        """Generators of the level-i stabilizer subgroup: everything installed
        at level i or deeper (deeper generators fix the first i base points)."""
        out: list[Perm] = []
        for j in range(i, len(self.levels)):
            out.extend(self.levels[j].gens)
        return out

    def _sift(self, g: Perm, start: int) -> tuple[int, Perm]:
        """Sift g through levels from `start`; return (stuck level, residue)."""
        for i in range(start, len(self.levels)):
            level = self.levels[i]
            image = g.images[level.point]
            inv = level.transversal_inv.get(image)
            if inv is None:
                return i, g
            if image != level.point:
                g = g * inv
        return len(self.levels), g

    def elements(self) -> Iterator[Perm]:
        """All elements, deterministically ordered, each exactly once.

        Elements factor uniquely as u_deep * ... * u_top over the chain's
        transversals; the recursion multiplies top-level representatives last.
        """

        def gen(idx: int) -> Iterator[Perm]:
            if idx == len(self.levels):
                yield Perm.identity(self.degree)
                return
            level = self.levels[idx]
            for deeper in gen(idx + 1):
                for point in sorted(level.transversal):
                    yield deeper * level.transversal[point]

        yield from gen(0)

    # -- construction ----------------------------------------------------

    def add_generator(self, g: Perm) -> bool:
        """Extend the chain by g; True when the group actually grew."""
        _, residue = self._sift(g, 0)
        if residue.is_identity():
            return False
        self._insert(0, residue)
        return True

    def _insert(self, i: int, g: Perm) -> None:
        """Place a genuinely new element fixing base[:i]; re-close the chain.

        Delegates down to the level whose base point g moves, then rebuilds
        the orbit and rescans the Schreier generators of every level on the
        delegation path as the recursion unwinds (deepest level first).
        """
        if i == len(self.levels):
            self.levels.append(_Level(g.min_moved_point(), self.degree))
            self.levels[i].gens.append(g)
        elif g.images[self.levels[i].point] == self.levels[i].point:
            self._insert(i + 1, g)
        else:
            self.levels[i].gens.append(g)
        self._rebuild_orbit(i)
        self._scan_schreier(i)

    def _rebuild_orbit(self, i: int) -> None:
        level = self.levels[i]
        gens = self._level_gens(i)
        ident = Perm.identity(self.degree)
        transversal = {level.point: ident}
        transversal_inv = {level.point: ident}
        queue = [level.point]
        head = 0
        while head < len(queue):
            a = queue[head]
            head += 1
            rep = transversal[a]
            for s in gens:
                b = s.images[a]
                if b not in transversal:
                    u = rep * s
                    transversal[b] = u
                    transversal_inv[b] = u.inverse()
                    queue.append(b)
        level.transversal = transversal
        level.transversal_inv = transversal_inv

    def _scan_schreier(self, i: int) -> None:
        """Sift every Schreier generator of level i into the deeper chain.

        Residues installed deeper never enlarge the level-i group (they lie
        in the stabilizer that the Schreier generators already generate), so
        a single pass over a snapshot of orbit points and generators is
        enough; the recursive _insert keeps the deeper levels closed.
        """
        level = self.levels[i]
        gens = self._level_gens(i)
        for point in sorted(level.transversal):
            u = level.transversal[point]
            for s in gens:
                schreier = u * s * level.transversal_inv[s.images[point]]
                _, residue = self._sift(schreier, i + 1)
                if not residue.is_identity():
                    self._insert(i + 1, residue)


def _build_chain(
    degree: int, gens: Iterable[Perm], base_hint: Sequence[int] | None = None
) -> tuple[StabChain, list[Perm]]:
    """Build a chain; return it plus the input gens that actually extended it."""
    chain = StabChain(degree)
    if base_hint is not None:
        for point in base_hint:
            chain.levels.append(_Level(point, degree))
    essential = []
    for g in gens:
        if g.degree != degree:
            raise InputError(
                f"generator degree {g.degree} does not match group degree {degree}"
            )
        if chain.add_generator(g):
            essential.append(g)
    return chain, essential


class GroupHandle:
    """A finite permutation group: generators plus a stabilizer chain.

    Immutable after construction.  `parent` records the ambient group when
    the handle was produced as a subgroup of another handle.
    """

    __slots__ = (
        "degree",
        "generators",
        "chain",
        "order",
        "parent",
        "label",
        "meta",
        "_elements",
        "_element_key",
    )

    def __init__(
        self,
        degree: int,
        generators: Sequence[Perm],
        chain: StabChain,
        parent: "GroupHandle | None" = None,
        label: str | None = None,
        meta: dict | None = None,
    ):
        self.degree = degree
        self.generators = tuple(generators)
        self.chain = chain
        self.order = chain.order()
        self.parent = parent
        self.label = label
        self.meta = meta or {}
        self._elements: tuple[Perm, ...] | None = None
        self._element_key: frozenset | None = None

    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def root(self) -> "GroupHandle":
        g = self
        while g.parent is not None:
            g = g.parent
        return g

    def is_trivial(self) -> bool:
        return self.order == 1

    def __contains__(self, g: Perm) -> bool:
        return contains(self, g)

    def __repr__(self) -> str:
        name = self.label or "group"
        return f"<{name}: order {self.order}, degree {self.degree}>"

    # cached element data (lazy; handles stay conceptually immutable)

    def element_list(self, caps: Caps = DEFAULT_CAPS) -> tuple[Perm, ...]:
        if self._elements is None:
            if self.order > caps.enumeration:
                raise ResourceLimitError("enumeration", caps.enumeration, self.order)
            self._elements = tuple(self.chain.elements())
        return self._elements

    def element_key(self, caps: Caps = DEFAULT_CAPS) -> frozenset:
        """Canonical identity of the subgroup as a set of image tuples."""
        if self._element_key is None:
            self._element_key = frozenset(
                p.images for p in self.element_list(caps)
            )
        return self._element_key


def build_group(
    generators: Sequence[Perm],
    degree: int | None = None,
    parent: GroupHandle | None = None,
    label: str | None = None,
    meta: dict | None = None,
    base_hint: Sequence[int] | None = None,
) -> GroupHandle:
    """Construct a GroupHandle from generators.

    Redundant generators (those already generated by their predecessors) are
    dropped from the stored generator list; the empty list needs an explicit
    degree and yields the trivial group.
    """
    generators = [g for g in generators if not g.is_identity()]
    if degree is None:
        if not generators:
            raise InputError("empty generator list requires an explicit degree")
        degree = generators[0].degree
    for g in generators:
        if g.degree != degree:
            raise InputError("generators of mixed degree")
    chain, essential = _build_chain(degree, generators, base_hint)
    return GroupHandle(degree, essential, chain, parent, label, meta)


def trivial_group(degree: int, parent: GroupHandle | None = None) -> GroupHandle:
    return build_group([], degree=degree, parent=parent, label="1")


def contains(G: GroupHandle, g: Perm) -> bool:
    if g.degree != G.degree:
        raise InputError(
            f"element degree {g.degree} does not match group degree {G.degree}"
        )
    return G.chain.contains(g)


def enumerate_elements(
    G: GroupHandle, caps: Caps = DEFAULT_CAPS
) -> Iterator[Perm]:
    """Stream the elements of G (each exactly once) under the enumeration cap."""
    if G.order > caps.enumeration:
        raise ResourceLimitError("enumeration", caps.enumeration, G.order)
    return iter(G.element_list(caps))


def element_order(g: Perm) -> int:
    return g.order()


@dataclass
class ConjugacyClassSet:
    representatives: list[Perm]
    sizes: list[int]

    def __iter__(self):
        return iter(zip(self.representatives, self.sizes))


def conjugacy_classes(G: GroupHandle, caps: Caps = DEFAULT_CAPS) -> ConjugacyClassSet:
    """Conjugacy classes via orbit search under generator conjugation."""
    elements = G.element_list(caps)
    gens = list(G.generators)
    unseen = {p.images for p in elements}
    reps: list[Perm] = []
    sizes: list[int] = []
    for x in elements:
        if x.images not in unseen:
            continue
        orbit = {x.images}
        queue = [x]
        while queue:
            y = queue.pop()
            for g in gens:
                z = y.conjugate_by(g)
                if z.images not in orbit:
                    orbit.add(z.images)
                    queue.append(z)
        unseen -= orbit
        reps.append(Perm._raw(min(orbit)))
        sizes.append(len(orbit))
    return ConjugacyClassSet(reps, sizes)


def centralizer(
    G: GroupHandle, S: Iterable[Perm], caps: Caps = DEFAULT_CAPS
) -> GroupHandle:
    """{g in G : gs == sg for every s in S}, as a subgroup handle."""
    S = list(S)
    for s in S:
        if not contains(G, s):
            raise InputError("centralizer: an element of S lies outside G")
    members = [
        g
        for g in G.element_list(caps)
        if all(g * s == s * g for s in S)
    ]
    return build_group(members, degree=G.degree, parent=G, label="centralizer")


def center(G: GroupHandle, caps: Caps = DEFAULT_CAPS) -> GroupHandle:
    Z = centralizer(G, G.generators, caps)
    Z.label = "center"
    return Z


def normal_closure(
    G: GroupHandle, S: Iterable[Perm], label: str | None = None
) -> GroupHandle:
    """Smallest subgroup containing S that is stable under G-conjugation."""
    S = [s for s in S if not s.is_identity()]
    for s in S:
        if not contains(G, s):
            raise InputError("normal_closure: an element of S lies outside G")
    chain = StabChain(G.degree)
    kept: list[Perm] = []
    queue: list[Perm] = []
    for s in S:
        if chain.add_generator(s):
            kept.append(s)
            queue.append(s)
    while queue:
        x = queue.pop(0)
        for g in G.generators:
            y = x.conjugate_by(g)
            if chain.add_generator(y):
                kept.append(y)
                queue.append(y)
    return GroupHandle(G.degree, kept, chain, parent=G, label=label or "normal closure")


def _check_common_degree(A: GroupHandle, B: GroupHandle, op: str) -> None:
    if A.degree != B.degree:
        raise InputError(f"{op}: handles act on different point sets")


def join(A: GroupHandle, B: GroupHandle, label: str | None = None) -> GroupHandle:
    _check_common_degree(A, B, "join")
    parent = A.parent if A.parent is B.parent else (A.parent or B.parent)
    return build_group(
        list(A.generators) + list(B.generators),
        degree=A.degree,
        parent=parent,
        label=label or "join",
    )


def commutator_subgroup(A: GroupHandle, B: GroupHandle) -> GroupHandle:
    """[A, B]: the normal closure in <A, B> of all generator commutators."""
    _check_common_degree(A, B, "commutator_subgroup")
    ambient = join(A, B)
    comms = []
    for a in A.generators:
        ai = a.inverse()
        for b in B.generators:
            comms.append(ai * b.inverse() * a * b)
    H = normal_closure(ambient, comms, label="commutator")
    H.parent = ambient
    return H


def derived_subgroup(G: GroupHandle) -> GroupHandle:
    H = commutator_subgroup(G, G)
    H.parent = G
    H.label = "derived"
    return H


_FILTER_CAP = 10_000  # intersection by element filtering below this size


def intersection(
    A: GroupHandle, B: GroupHandle, caps: Caps = DEFAULT_CAPS
) -> GroupHandle:
    """A ∩ B.  Filters the smaller group's elements at desk scale and falls
    back to a base-sharing backtrack search above the filtering threshold."""
    _check_common_degree(A, B, "intersection")
    small, big = (A, B) if A.order <= B.order else (B, A)
    if small.order <= _FILTER_CAP:
        members = [g for g in small.element_list(caps) if big.chain.contains(g)]
        return build_group(
            members, degree=A.degree, parent=small.parent or small, label="intersection"
        )
    return _intersection_backtrack(small, big)


def _intersection_backtrack(A: GroupHandle, B: GroupHandle) -> GroupHandle:
    """DFS over A's chain pruned by a copy of B's chain rebuilt on A's base."""
    base = A.chain.base()
    b_chain, _ = _build_chain(B.degree, B.generators, base_hint=base)
    levels = A.chain.levels
    found: list[Perm] = []
    result = StabChain(A.degree)

    def dfs(i: int, suffix: Perm, walk: Perm) -> None:
        if i == len(levels):
            if b_chain.contains(suffix) and result.add_generator(suffix):
                found.append(suffix)
            return
        level = levels[i]
        b_level = b_chain.levels[i] if i < len(b_chain.levels) else None
        for point in sorted(level.transversal):
            new_suffix = level.transversal[point] * suffix
            gamma = new_suffix.images[level.point]
            if b_level is not None:
                delta = walk.inverse().images[gamma]
                rep = b_level.transversal.get(delta)
                if rep is None:
                    continue
                dfs(i + 1, new_suffix, rep * walk)
            else:
                dfs(i + 1, new_suffix, walk)

    dfs(0, Perm.identity(A.degree), Perm.identity(A.degree))
    return GroupHandle(
        A.degree, found, result, parent=A.parent or A, label="intersection"
    )


def coset_representative(N: GroupHandle, g: Perm) -> Perm:
    """Canonical representative of the right coset N*g.

    Walks N's chain greedily minimizing the image of each base point; two
    elements get the same representative exactly when their cosets agree.
    """
    for level in N.chain.levels:
        gi = g.images
        best = min(level.transversal, key=gi.__getitem__)
        if best != level.point:
            g = level.transversal[best] * g
    return g


def coset_order(N: GroupHandle, g: Perm, bound: int) -> int:
    """Order of the coset N*g in <N, g>/N (g must normalize N)."""
    power = g
    for k in range(1, bound + 1):
        if N.chain.contains(power):
            return k
        power = power * g
    raise PreconditionError("coset order exceeds bound; is N normalized by g?")


def is_normal_in(N: GroupHandle, G: GroupHandle) -> bool:
    """Does G normalize N (N assumed to be a subgroup of G)?"""
    for n in N.generators:
        for g in G.generators:
            if not N.chain.contains(n.conjugate_by(g)):
                return False
    return True


@dataclass
class QuotientMap:
    """G/N realized as the right-coset action of G on the cosets of N."""

    source: GroupHandle
    kernel: GroupHandle
    image: GroupHandle
    coset_reps: list[Perm] = field(repr=False)
    _index: dict[tuple[int, ...], int] = field(repr=False)

    def apply(self, g: Perm) -> Perm:
        if g.degree != self.source.degree:
            raise InputError("quotient apply: degree mismatch")
        if not self.coset_reps:  # identity quotient by the trivial subgroup
            return g
        images = [
            self._index[coset_representative(self.kernel, rep * g).images]
            for rep in self.coset_reps
        ]
        return Perm(images)

    def preimage_of_subgroup(self, H: GroupHandle, label: str | None = None) -> GroupHandle:
        """Pull a subgroup of the image back to a subgroup of the source."""
        if not self.coset_reps:
            return H
        gens = list(self.kernel.generators)
        for h in H.generators:
            gens.append(self.coset_reps[h.images[0]])
        return build_group(
            gens, degree=self.source.degree, parent=self.source, label=label or "preimage"
        )


def quotient(
    G: GroupHandle, N: GroupHandle, caps: Caps = DEFAULT_CAPS
) -> QuotientMap:
    """The quotient G/N as a faithful coset action (N must be normal in G).

    When N is trivial the map is the identity on G itself rather than a
    degree-|G| regular image.
    """
    _check_common_degree(G, N, "quotient")
    for n in N.generators:
        if not G.chain.contains(n):
            raise PreconditionError("quotient: N is not a subgroup of G")
    if not is_normal_in(N, G):
        raise PreconditionError("quotient: N is not normal in G")
    index = G.order // N.order
    if index > caps.quotient_degree:
        raise ResourceLimitError("quotient_degree", caps.quotient_degree, index)

    if N.order == 1:
        # identity quotient: reuse G itself as its own faithful image
        return QuotientMap(G, N, G, [], {})

    ident = coset_representative(N, Perm.identity(G.degree))
    reps = [ident]
    index_map = {ident.images: 0}
    head = 0
    while head < len(reps):
        rep = reps[head]
        head += 1
        for s in G.generators:
            nxt = coset_representative(N, rep * s)
            if nxt.images not in index_map:
                index_map[nxt.images] = len(reps)
                reps.append(nxt)
    if len(reps) != index:
        raise PreconditionError(
            f"quotient: coset walk found {len(reps)} cosets, expected {index}"
        )

    gen_images = []
    for s in G.generators:
        images = [
            index_map[coset_representative(N, rep * s).images] for rep in reps
        ]
        gen_images.append(Perm(images))
    image = build_group(
        gen_images,
        degree=index,
        label=f"{G.label or 'G'}/{N.label or 'N'}",
    )
    if image.order * N.order != G.order:
        raise PreconditionError("quotient: image order inconsistent")
    return QuotientMap(G, N, image, reps, index_map)


def derived_chain(G: GroupHandle) -> list[GroupHandle]:
    """Descending derived series until it stabilizes (last entry is the
    perfect core; trivial exactly when G is solvable)."""
    chain = [G]
    while True:
        nxt = derived_subgroup(chain[-1])
        nxt.parent = G
        if nxt.order == chain[-1].order:
            return chain
        chain.append(nxt)
        if nxt.order == 1:
            return chain


def is_solvable(G: GroupHandle) -> bool:
    return derived_chain(G)[-1].order == 1


def perfect_core(G: GroupHandle) -> GroupHandle:
    """The stable term of the derived series (contains every perfect subgroup)."""
    return derived_chain(G)[-1]


def same_subgroup(A: GroupHandle, B: GroupHandle) -> bool:
    if A is B:
        return True
    if A.degree != B.degree or A.order != B.order:
        return False
    return all(B.chain.contains(g) for g in A.generators)


def is_subgroup_of(A: GroupHandle, B: GroupHandle) -> bool:
    if A.degree != B.degree:
        return False
    return all(B.chain.contains(g) for g in A.generators)


def conjugate_subgroup(H: GroupHandle, g: Perm, parent: GroupHandle | None = None) -> GroupHandle:
    return build_group(
        [h.conjugate_by(g) for h in H.generators],
        degree=H.degree,
        parent=parent or H.parent,
        label=H.label,
    )
