"""Permutations on the points 0..n-1, stored as image tuples.

Composition order is fixed once for the whole package: ``p * q`` applies
``p`` first and ``q`` second, i.e. ``(p * q)(x) == q(p(x))``.  Conjugation
``p ** q`` therefore means ``q.inverse() * p * q``.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator

from .errors import InputError


class Perm:
    """An immutable bijection on {0..degree-1}."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise InputError(f"not a permutation of 0..{len(images) - 1}: {images!r}")
        self.images = images
        self._hash = None

    @classmethod
    def _raw(cls, images: tuple[int, ...]) -> "Perm":
        """Wrap an already-validated image tuple (internal fast path)."""
        p = object.__new__(cls)
        p.images = images
        p._hash = None
        return p

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Iterable[int]]) -> "Perm":
        images = list(range(degree))
        for cycle in cycles:
            cycle = list(cycle)
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                if not (0 <= a < degree):
                    raise InputError(f"cycle point {a} outside degree {degree}")
                images[a] = b
        return cls(images)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: "Perm") -> "Perm":
        b = other.images
        if len(b) != len(self.images):
            raise InputError("degree mismatch in product")
        return Perm._raw(tuple(map(b.__getitem__, self.images)))

    def inverse(self) -> "Perm":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm._raw(tuple(inv))

    def __pow__(self, n: int) -> "Perm":
        if n < 0:
            return self.inverse() ** (-n)
        result = Perm.identity(self.degree)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate_by(self, g: "Perm") -> "Perm":
        """g^-1 * self * g, computed without building g^-1."""
        gi = g.images
        si = self.images
        out = [0] * len(si)
        for a in range(len(si)):
            out[gi[a]] = gi[si[a]]
        return Perm._raw(tuple(out))

    def is_identity(self) -> bool:
        for i, j in enumerate(self.images):
            if i != j:
                return False
        return True

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles()))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point."""
        seen = [False] * len(self.images)
        out = []
        for start in range(len(self.images)):
            if seen[start] or self.images[start] == start:
                seen[start] = True
                continue
            cycle = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                seen[j] = True
                cycle.append(j)
                j = self.images[j]
            out.append(tuple(cycle))
        return out

    def moved_points(self) -> list[int]:
        return [i for i, j in enumerate(self.images) if i != j]

    def min_moved_point(self) -> int | None:
        for i, j in enumerate(self.images):
            if i != j:
                return i
        return None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.images)
        return self._hash

    def __lt__(self, other: "Perm") -> bool:
        return self.images < other.images

    def __repr__(self) -> str:
        return f"Perm({cycle_string(self)!r}, degree={self.degree})"


def cycle_string(p: Perm) -> str:
    cycles = p.cycles()
    if not cycles:
        return "()"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


def parse_cycles(text: str, degree: int) -> Perm:
    """Parse cycle notation like '(0 1 2)(3 4)'; '()' is the identity."""
    text = text.strip()
    if text in ("", "()"):
        return Perm.identity(degree)
    if text.count("(") != text.count(")") or not text.startswith("("):
        raise InputError(f"malformed cycle string: {text!r}")
    cycles = []
    for chunk in text.replace(")", ")\n").split("\n"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if not (chunk.startswith("(") and chunk.endswith(")")):
            raise InputError(f"malformed cycle string: {text!r}")
        inner = chunk[1:-1].replace(",", " ").split()
        if inner:
            cycles.append([int(tok) for tok in inner])
    flat = [pt for c in cycles for pt in c]
    if len(flat) != len(set(flat)):
        raise InputError(f"repeated point in cycles: {text!r}")
    return Perm.from_cycles(degree, cycles)


def iter_orders(perms: Iterable[Perm]) -> Iterator[int]:
    for p in perms:
        yield p.order()
