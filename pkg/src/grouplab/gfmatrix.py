"""Matrices over prime fields GF(p) and their permutation realizations.

Matrices are tuples of row tuples with entries reduced mod p.  A matrix acts
on row vectors from the right (v -> v*M), so the permutation image of a
product is the product of the permutation images under the package's
left-then-right composition.

Vectors of GF(p)^n are indexed lexicographically by sum(v[i] * p^i); the
linear action uses the nonzero vectors (degree p^n - 1), the affine action
used for semidirect products by a vector group uses all p^n vectors.
"""

from __future__ import annotations

from itertools import product as iter_product

from .arith import is_prime
from .errors import InputError
from .perms import Perm

Matrix = tuple[tuple[int, ...], ...]

SUPPORTED_PRIMES = (2, 3, 5, 7)
MAX_LINEAR_DEGREE = 342  # p^n - 1 for the largest supported action


def normalize_matrix(rows, p: int) -> Matrix:
    mat = tuple(tuple(int(x) % p for x in row) for row in rows)
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise InputError(f"matrix is not square: {rows!r}")
    return mat


def mat_mul(a: Matrix, b: Matrix, p: int) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) % p for j in range(n))
        for i in range(n)
    )


def mat_identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mat_det(m: Matrix, p: int) -> int:
    n = len(m)
    if n == 1:
        return m[0][0] % p
    if n == 2:
        return (m[0][0] * m[1][1] - m[0][1] * m[1][0]) % p
    if n == 3:
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        ) % p
    raise InputError(f"determinant only implemented for n <= 3, got {n}")


def vec_index(v: tuple[int, ...], p: int) -> int:
    idx = 0
    for i, x in enumerate(v):
        idx += (x % p) * p**i
    return idx


def index_vec(idx: int, p: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        out.append(idx % p)
        idx //= p
    return tuple(out)


def vec_mat(v: tuple[int, ...], m: Matrix, p: int) -> tuple[int, ...]:
    n = len(m)
    return tuple(sum(v[i] * m[i][j] for i in range(n)) % p for j in range(n))


def matrix_to_perm(m: Matrix, p: int) -> Perm:
    """Action of m on the nonzero vectors of GF(p)^n, degree p^n - 1."""
    n = len(m)
    degree = p**n - 1
    images = [0] * degree
    for idx in range(1, degree + 1):
        v = index_vec(idx, p, n)
        images[idx - 1] = vec_index(vec_mat(v, m, p), p) - 1
    return Perm(images)


def perm_to_matrix(g: Perm, p: int, n: int) -> Matrix:
    """Invert matrix_to_perm: read the rows off the images of basis vectors."""
    if g.degree != p**n - 1:
        raise InputError("permutation degree does not match the vector action")
    rows = []
    for i in range(n):
        image_idx = g.images[p**i - 1] + 1
        rows.append(index_vec(image_idx, p, n))
    return tuple(rows)


def affine_perm(m: Matrix, shift: tuple[int, ...], p: int) -> Perm:
    """v -> v*m + shift on all p^n vectors."""
    n = len(m)
    degree = p**n
    images = [0] * degree
    for idx in range(degree):
        v = index_vec(idx, p, n)
        w = vec_mat(v, m, p)
        images[idx] = vec_index(tuple((w[i] + shift[i]) % p for i in range(n)), p)
    return Perm(images)


def primitive_root(p: int) -> int:
    """Smallest primitive root mod p (p prime, tiny)."""
    if p == 2:
        return 1
    for candidate in range(2, p):
        seen = set()
        x = 1
        for _ in range(p - 1):
            x = x * candidate % p
            seen.add(x)
        if len(seen) == p - 1:
            return candidate
    raise InputError(f"{p} is not prime")


def _transvections(n: int, p: int) -> list[Matrix]:
    out = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            rows = [list(row) for row in mat_identity(n)]
            rows[i][j] = 1
            out.append(normalize_matrix(rows, p))
    return out


def linear_group_generators(family: str, n: int, p: int) -> list[Matrix]:
    """Generators of GL(n,p) or SL(n,p): all elementary transvections, plus a
    diagonal matrix realizing the full determinant group for GL."""
    if family not in ("GL", "SL"):
        raise InputError(f"unknown linear family {family!r}")
    if n == 1:
        if family == "SL":
            return []
        return [((primitive_root(p),),)] if p > 2 else []
    gens = _transvections(n, p)
    if family == "GL" and p > 2:
        rows = [list(row) for row in mat_identity(n)]
        rows[0][0] = primitive_root(p)
        gens.append(normalize_matrix(rows, p))
    return gens


def validate_action_parameters(n: int, p: int) -> None:
    if not is_prime(p) or p not in SUPPORTED_PRIMES:
        raise InputError(f"parameter p: unsupported prime {p} (supported: {SUPPORTED_PRIMES})")
    if n not in (1, 2, 3):
        raise InputError(f"parameter n: dimension {n} outside 1..3")
    if p**n - 1 > MAX_LINEAR_DEGREE:
        raise InputError(f"action degree {p**n - 1} exceeds {MAX_LINEAR_DEGREE}")


def all_vectors(p: int, n: int):
    return (tuple(v) for v in iter_product(range(p), repeat=n))
