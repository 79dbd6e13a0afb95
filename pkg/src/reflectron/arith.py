"""Exact integer arithmetic used by every other module.

Everything here is deterministic.  Factorizations are exact (no floating
point, no probabilistic answers left unverified): trial division handles
the desk-scale inputs, and a Brent-cycle split with fixed parameters
covers any stray large cofactor, so repeated runs always agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

_TRIAL_LIMIT = 10**6

# Grown on demand; holds the longest prime list computed so far.
_prime_cache: list[int] = []
_prime_cache_limit = 0


def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit, via a shared incrementally grown sieve."""
    global _prime_cache, _prime_cache_limit
    if limit > _prime_cache_limit:
        span = max(limit, 2 * _prime_cache_limit, 1 << 10)
        sieve = bytearray([1]) * (span + 1)
        sieve[0:2] = b"\x00\x00"
        for p in range(2, isqrt(span) + 1):
            if sieve[p]:
                sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
        _prime_cache = [i for i in range(span + 1) if sieve[i]]
        _prime_cache_limit = span
    # bisect is overkill; callers tolerate a slightly longer list
    if _prime_cache and _prime_cache[-1] <= limit:
        return _prime_cache
    lo, hi = 0, len(_prime_cache)
    while lo < hi:
        mid = (lo + hi) // 2
        if _prime_cache[mid] <= limit:
            lo = mid + 1
        else:
            hi = mid
    return _prime_cache[:lo]


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all 64-bit (and well beyond)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent_split(n: int) -> int:
    """A nontrivial factor of composite odd n.  Fixed start values keep
    the whole routine deterministic; the increment loop guarantees
    termination because some polynomial x^2 + c always finds a factor.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 1000):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"cycle split failed for {n}")


@dataclass(frozen=True)
class Factorization:
    """Signed integer as sign * product(p^e), factors sorted by prime."""

    sign: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        prev = 1
        for p, e in self.factors:
            if p <= prev:
                raise ValueError("factors must be sorted by strictly increasing prime")
            if e < 1:
                raise ValueError("exponents must be >= 1")
            prev = p

    @classmethod
    def from_exponents(cls, sign: int, exponents: dict[int, int]) -> "Factorization":
        items = tuple(sorted((p, e) for p, e in exponents.items() if e != 0))
        return cls(sign, items)

    def value(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p**e
        return out

    def vp(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    def power(self, k: int) -> "Factorization":
        if k < 0:
            raise ValueError("negative powers are not representable")
        if k == 0:
            return Factorization(1, ())
        sign = self.sign if k % 2 else 1
        return Factorization(sign, tuple((p, e * k) for p, e in self.factors))

    def without_prime(self, p: int) -> "Factorization":
        return Factorization(self.sign, tuple((q, e) for q, e in self.factors if q != p))

    def __mul__(self, other: "Factorization") -> "Factorization":
        exps: dict[int, int] = dict(self.factors)
        for p, e in other.factors:
            exps[p] = exps.get(p, 0) + e
        return Factorization.from_exponents(self.sign * other.sign, exps)


def factorize(n: int) -> Factorization:
    """Exact prime factorization of a nonzero integer."""
    if n == 0:
        raise ValueError("cannot factor 0")
    sign = 1 if n > 0 else -1
    n = abs(n)
    exps: dict[int, int] = {}
    if n > 1:
        for p in primes_up_to(min(_TRIAL_LIMIT, isqrt(n) + 1)):
            if p * p > n:
                break
            while n % p == 0:
                exps[p] = exps.get(p, 0) + 1
                n //= p
        # what is left is 1, a prime, or a product of primes > 10^6
        stack = [n] if n > 1 else []
        while stack:
            m = stack.pop()
            if m == 1:
                continue
            if is_prime(m):
                exps[m] = exps.get(m, 0) + 1
                continue
            g = _brent_split(m)
            stack.extend((g, m // g))
    return Factorization.from_exponents(sign, exps)


def squarefree(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for _, e in factorize(n).factors)


def is_fundamental_discriminant(d: int) -> bool:
    """True for discriminants of quadratic fields, plus 1 by convention.

    d = 1 mod 4 squarefree, or d = 4m with m squarefree and m = 2, 3 mod 4.
    """
    if d == 0:
        return False
    if d == 1:
        return True
    if d % 4 == 1:
        return squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree(m)
    return False


def fundamental_discriminants_in(lo: int, hi: int) -> list[int]:
    """Ascending fundamental discriminants in the closed range [lo, hi]."""
    if lo > hi:
        raise ValueError(f"empty range [{lo}, {hi}]")
    return [d for d in range(lo, hi + 1) if d != 0 and is_fundamental_discriminant(d)]


def smallest_primitive_root(ell: int) -> int:
    """Least positive primitive root modulo an odd prime ell."""
    if ell % 2 == 0 or not is_prime(ell):
        raise ValueError(f"{ell} is not an odd prime")
    phi = ell - 1
    prime_divisors = [p for p, _ in factorize(phi).factors]
    for g in range(2, ell):
        if all(pow(g, phi // q, ell) != 1 for q in prime_divisors):
            return g
    raise ArithmeticError(f"no primitive root below {ell}")  # unreachable
