"""Small integer-arithmetic helpers (trial division is plenty at desk scale)."""

from __future__ import annotations

import math


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization as {p: exponent}; factorize(1) == {}."""
    if n < 1:
        raise ValueError(f"cannot factorize {n}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return dict(sorted(out.items()))


def prime_divisors(n: int) -> list[int]:
    return sorted(factorize(n))


def p_part(n: int, p: int) -> int:
    """Largest power of p dividing n."""
    q = 1
    while n % p == 0:
        q *= p
        n //= p
    return q


def pi_part(n: int, primes) -> int:
    """Largest divisor of n whose prime divisors all lie in `primes`."""
    out = 1
    for p in primes:
        out *= p_part(n, p)
    return out


def is_pi_number(n: int, primes) -> bool:
    return pi_part(n, primes) == n


def divisors(n: int) -> list[int]:
    small, large = [], []
    f = 1
    while f * f <= n:
        if n % f == 0:
            small.append(f)
            if f != n // f:
                large.append(n // f)
        f += 1
    return small + large[::-1]


def lcm(values) -> int:
    return math.lcm(*values) if values else 1


def factorization_str(n: int) -> str:
    """Readable form like '2^4 * 3 * 7^2'; '1' for the trivial case."""
    if n == 1:
        return "1"
    parts = []
    for p, e in factorize(n).items():
        parts.append(f"{p}^{e}" if e > 1 else f"{p}")
    return " * ".join(parts)
