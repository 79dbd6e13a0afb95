"""Integral binary cubic forms and cubic field tabulation.

Classes of irreducible maximal forms under the unimodular action are in
bijection with cubic fields, form discriminant equal to field
discriminant.  Tabulation enumerates one canonical representative per
class inside a discriminant window: positive-discriminant classes are
picked out by a reduced Hessian together with a lexicographic orbit
minimum, negative-discriminant classes by reduction against the real
root, where each class carries exactly two reduced representatives
swapped by (x, y) -> (x, -y) and the sign of b (then of d) breaks the
tie.  All counting decisions are made by exact integer tests; floating
point appears only in over-generous window bounds.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import ceil, floor, gcd, isqrt

from .arith import factorize

_SIGNS = (-1, 0, 1)

# all GL2(Z) matrices with entries in {-1, 0, 1}; two reduced-Hessian
# representatives of one class always differ by one of these
_UNIMODULAR = tuple(
    (p, q, r, s)
    for p in (-1, 0, 1)
    for q in (-1, 0, 1)
    for r in (-1, 0, 1)
    for s in (-1, 0, 1)
    if abs(p * s - q * r) == 1
)


@dataclass(frozen=True)
class CubicForm:
    a: int
    b: int
    c: int
    d: int


@dataclass(frozen=True)
class CubicTabulation:
    """Counts of cubic fields by discriminant over the window
    xmin < |disc| <= xmax, restricted to one sign unless sign is 0."""

    xmin: int
    xmax: int
    sign: int
    counts: dict[int, int] = field(compare=False)

    def __post_init__(self) -> None:
        if not 0 <= self.xmin <= self.xmax:
            raise ValueError("window must satisfy 0 <= xmin <= xmax")
        if self.sign not in _SIGNS:
            raise ValueError("sign must be -1, 0 or 1")
        for disc in self.counts:
            if not self.xmin < abs(disc) <= self.xmax:
                raise ValueError(f"discriminant {disc} outside window")
            if self.sign and (disc > 0) != (self.sign > 0):
                raise ValueError(f"discriminant {disc} has the wrong sign")


def cubic_disc(f: CubicForm) -> int:
    a, b, c, d = f.a, f.b, f.c, f.d
    return (
        18 * a * b * c * d
        + b * b * c * c
        - 4 * a * c**3
        - 4 * b**3 * d
        - 27 * a * a * d * d
    )


# ---------------------------------------------------------------------------
# irreducibility and maximality


def _divisors(n: int) -> list[int]:
    out = []
    for k in range(1, isqrt(n) + 1):
        if n % k == 0:
            out.append(k)
            if k * k != n:
                out.append(n // k)
    return out


def _has_rational_root(a: int, b: int, c: int, d: int) -> bool:
    # roots of a x^3 + b x^2 + c x + d are p/q with p | d, q | a
    if d == 0:
        return True
    for q in _divisors(abs(a)):
        qq = q * q
        for p in _divisors(abs(d)):
            if gcd(p, q) != 1:
                continue
            if ((a * p + b * q) * p + c * qq) * p + d * qq * q == 0:
                return True
            if ((a * p - b * q) * p + c * qq) * p - d * qq * q == 0:
                return True
    return False


def is_irreducible(f: CubicForm) -> bool:
    """True when f has no linear factor over the rationals (for a binary
    cubic this is full irreducibility)."""
    return f.a != 0 and not _has_rational_root(f.a, f.b, f.c, f.d)


def _nonmax_at(a: int, b: int, c: int, d: int, p: int) -> bool:
    # the ring of the form fails to be maximal at p exactly when f has a
    # repeated root r mod p whose value lifts to 0 mod p^2; the lift test
    # is independent of the representative because f'(r) = 0 mod p
    pp = p * p
    for r in range(p):
        fr = ((a * r + b) * r + c) * r + d
        if fr % p:
            continue
        if ((3 * a * r + 2 * b) * r + c) % p:
            continue
        if fr % pp == 0:
            return True
    # same test at the point at infinity, coefficients reversed
    return a % p == 0 and b % p == 0 and a % pp == 0


def _maximal(a: int, b: int, c: int, d: int, square_primes) -> bool:
    if gcd(gcd(a, b), gcd(c, d)) != 1:
        return False
    for p in square_primes:
        if _nonmax_at(a, b, c, d, p):
            return False
    return True


def is_maximal(f: CubicForm) -> bool:
    """True when the cubic ring attached to f is the maximal order of
    its field; only irreducible forms are accepted."""
    if not is_irreducible(f):
        raise ValueError("maximality is only defined for irreducible forms")
    disc = cubic_disc(f)
    sq = [p for p, e in factorize(abs(disc)).factors if e >= 2]
    return _maximal(f.a, f.b, f.c, f.d, sq)


# ---------------------------------------------------------------------------
# enumeration, positive discriminant

_spf_cache: dict[int, list[int]] = {}


def _spf(limit: int) -> list[int]:
    tab = _spf_cache.get(limit)
    if tab is None:
        tab = list(range(limit + 1))
        for p in range(2, isqrt(limit) + 1):
            if tab[p] == p:
                for m in range(p * p, limit + 1, p):
                    if tab[m] == m:
                        tab[m] = p
        _spf_cache[limit] = tab
    return tab


def _square_primes(n: int, spf: list[int]) -> list[int]:
    out = []
    while n > 1:
        p = spf[n]
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e >= 2:
            out.append(p)
    return out


def _hessian_reduced(a: int, b: int, c: int, d: int) -> bool:
    P = b * b - 3 * a * c
    if P <= 0:
        return False
    Q = b * c - 9 * a * d
    if abs(Q) > P:
        return False
    return c * c - 3 * b * d >= P


def _canonical_real(a: int, b: int, c: int, d: int) -> bool:
    # the canonical class representative is the lexicographically least
    # orbit member with positive leading coefficient and reduced Hessian
    me = (a, b, c, d)
    for p, q, r, s in _UNIMODULAR:
        a2 = ((a * p + b * r) * p + c * r * r) * p + d * r**3
        if a2 <= 0 or a2 > a:
            continue
        b2 = (
            3 * a * p * p * q
            + b * (p * p * s + 2 * p * q * r)
            + c * (2 * p * r * s + q * r * r)
            + 3 * d * r * r * s
        )
        c2 = (
            3 * a * p * q * q
            + b * (2 * p * q * s + q * q * r)
            + c * (p * s * s + 2 * q * r * s)
            + 3 * d * r * s * s
        )
        d2 = ((a * q + b * s) * q + c * s * s) * q + d * s**3
        g = (a2, b2, c2, d2)
        if g >= me:
            continue
        if _hessian_reduced(a2, b2, c2, d2):
            return False
    return True


def _real_shard(
    xmin: int, xmax: int, nshards: int, shard: int, counts: dict[int, int]
) -> None:
    rx = isqrt(xmax)
    q4 = isqrt(rx) + 2
    amax = isqrt(4 * rx // 27) + 2
    spf = _spf(xmax)
    for a in range(1 + shard, amax + 1, nshards):
        ta = 3 * a
        na = 9 * a
        bmax = 3 * a // 2 + q4
        for b in range(-bmax, bmax + 1):
            bb = b * b
            # 1 <= P = b^2 - 3ac <= sqrt(xmax) pins the c window
            clo = -((rx - bb) // ta)
            chi = (bb - 1) // ta
            for c in range(clo, chi + 1):
                P = bb - ta * c
                bc = b * c
                # |Q| = |bc - 9ad| <= P pins the d window
                dlo = -((P - bc) // na)
                dhi = (bc + P) // na
                for d in range(dlo, dhi + 1):
                    R = c * c - 3 * b * d
                    if R < P:
                        continue
                    Q = bc - na * d
                    t = 4 * P * R - Q * Q
                    if t <= 3 * xmin or t > 3 * xmax:
                        continue
                    if _has_rational_root(a, b, c, d):
                        continue
                    disc = t // 3
                    if not _maximal(a, b, c, d, _square_primes(disc, spf)):
                        continue
                    if not _canonical_real(a, b, c, d):
                        continue
                    counts[disc] = counts.get(disc, 0) + 1


# ---------------------------------------------------------------------------
# enumeration, negative discriminant


def _quad_range(a: int, b: int, lo: float, hi: float) -> tuple[float, float]:
    # range of a t^2 + b t over [lo, hi]
    vals = [a * lo * lo + b * lo, a * hi * hi + b * hi]
    v = -b / (2 * a)
    if lo < v < hi:
        vals.append(a * v * v + b * v)
    return min(vals), max(vals)


def _d_window(
    a: int, b: int, c: int, tlo: float, thi: float, qmax: float
) -> tuple[int, int] | None:
    # feasible real roots t satisfy a < q(t) <= qmax with
    # q(t) = a t^2 + b t + c, and then d = -t q(t); the window brackets
    # d over that set, padded outward so no true solution is missed
    eps = 1e-6
    disc_hi = b * b - 4 * a * (c - qmax)
    if disc_hi < 0:
        return None
    rt = disc_hi**0.5
    lo = max(tlo, (-b - rt) / (2 * a) - eps)
    hi = min(thi, (-b + rt) / (2 * a) + eps)
    if lo >= hi:
        return None
    pieces = [(lo, hi)]
    disc_lo = b * b - 4 * a * (c - a)
    if disc_lo > 0:
        rt1 = disc_lo**0.5
        r1 = (-b - rt1) / (2 * a) + eps
        r2 = (-b + rt1) / (2 * a) - eps
        cut = []
        for u, v in pieces:
            if r1 > u:
                cut.append((u, min(v, r1)))
            if r2 < v:
                cut.append((max(u, r2), v))
        pieces = [(u, v) for u, v in cut if u < v]
        if not pieces:
            return None
    vals = []
    crit = b * b - 3 * a * c
    roots = ()
    if crit > 0:
        rtc = crit**0.5
        roots = ((-b - rtc) / (3 * a), (-b + rtc) / (3 * a))
    for u, v in pieces:
        for t in (u, v, *[t for t in roots if u <= t <= v]):
            vals.append(((-a * t - b) * t - c) * t)
    return floor(min(vals)) - 3, ceil(max(vals)) + 3


def _complex_shard(
    xmin: int, xmax: int, nshards: int, shard: int, counts: dict[int, int]
) -> None:
    amax = int((16 * xmax / 27) ** 0.25) + 2
    spf = _spf(xmax)
    for a in range(1 + shard, amax + 1, nshards):
        tmax = (4 * xmax / 3) ** 0.25 / a + 0.01
        qmax = ((16 * a * a * xmax) ** (1 / 3) + a * a) / (4 * a) + 0.01
        bmax = int(a + a * tmax) + 2
        for b in range(-bmax, 1):
            tlo = max(-tmax, (-a - b) / a)
            thi = min(tmax, (a - b) / a)
            if tlo >= thi:
                continue
            glo, ghi = _quad_range(a, b, tlo, thi)
            clo = floor(a - ghi) - 3
            chi = ceil(qmax - glo) + 3
            for c in range(clo, chi + 1):
                window = _d_window(a, b, c, tlo, thi, qmax)
                if window is None:
                    continue
                for d in range(window[0], window[1] + 1):
                    if b == 0 and d >= 0:
                        continue
                    # the two reduced representatives of a class differ
                    # by (b, d) -> (-b, -d); keep b < 0, then d < 0
                    ab = a + b
                    if ab * ab + c * ab - a * d <= 0:
                        continue
                    ab = a - b
                    if ab * ab + c * ab + a * d <= 0:
                        continue
                    if a * (c - a) <= d * (b - d):
                        continue
                    disc = (
                        18 * a * b * c * d
                        + b * b * c * c
                        - 4 * a * c**3
                        - 4 * b**3 * d
                        - 27 * a * a * d * d
                    )
                    if disc >= 0 or not xmin < -disc <= xmax:
                        continue
                    if _has_rational_root(a, b, c, d):
                        continue
                    if not _maximal(a, b, c, d, _square_primes(-disc, spf)):
                        continue
                    counts[disc] = counts.get(disc, 0) + 1


# ---------------------------------------------------------------------------
# public tabulation API


def _enumerate_shard(args: tuple[int, int, int, int, int]) -> dict[int, int]:
    xmin, xmax, sign, nshards, shard = args
    counts: dict[int, int] = {}
    if sign >= 0:
        _real_shard(xmin, xmax, nshards, shard, counts)
    if sign <= 0:
        _complex_shard(xmin, xmax, nshards, shard, counts)
    return counts


def enumerate_cubic_fields(
    xmax: int, sign: int = 0, *, xmin: int = 0, workers: int = 1
) -> CubicTabulation:
    """Tabulate cubic field counts by discriminant over
    xmin < |disc| <= xmax (sign restricts to one sign; 0 means both).

    The result is independent of the worker count: shards split the
    leading coefficient by residue and canonicity is decided per form.
    """
    if xmin < 0 or xmax < xmin:
        raise ValueError("window must satisfy 0 <= xmin <= xmax")
    if sign not in _SIGNS:
        raise ValueError("sign must be -1, 0 or 1")
    if workers < 1:
        raise ValueError("workers must be at least 1")
    jobs = [(xmin, xmax, sign, workers, s) for s in range(workers)]
    if workers == 1:
        parts = [_enumerate_shard(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_enumerate_shard, jobs))
    counts: dict[int, int] = {}
    for part in parts:
        for disc, n in part.items():
            counts[disc] = counts.get(disc, 0) + n
    return CubicTabulation(xmin=xmin, xmax=xmax, sign=sign, counts=counts)


def merge_tabulations(t1: CubicTabulation, t2: CubicTabulation) -> CubicTabulation:
    """Join two tabulations: adjacent windows of the same sign, or the
    two signs of one window."""
    if t1.sign == t2.sign:
        if t1.xmin > t2.xmin:
            t1, t2 = t2, t1
        if t1.xmax != t2.xmin:
            raise ValueError("windows are not adjacent")
        merged = CubicTabulation(
            t1.xmin, t2.xmax, t1.sign, {**t1.counts, **t2.counts}
        )
    elif {t1.sign, t2.sign} == {-1, 1} and (t1.xmin, t1.xmax) == (t2.xmin, t2.xmax):
        merged = CubicTabulation(t1.xmin, t1.xmax, 0, {**t1.counts, **t2.counts})
    else:
        raise ValueError("tabulations cannot be merged")
    if len(merged.counts) != len(t1.counts) + len(t2.counts):
        raise AssertionError("merge collided on a discriminant")
    return merged


def count_N3(tab: CubicTabulation, disc: int) -> int:
    """Number of cubic fields of the given discriminant, read from a
    tabulation that must cover it."""
    if disc == 0:
        raise ValueError("0 is not a field discriminant")
    if tab.sign and (disc > 0) != (tab.sign > 0):
        raise ValueError(f"tabulation does not cover the sign of {disc}")
    if not tab.xmin < abs(disc) <= tab.xmax:
        raise ValueError(f"{disc} is outside the tabulated window")
    return tab.counts.get(disc, 0)


def tabulation_to_csv(tab: CubicTabulation) -> str:
    """Render counts as csv with header disc,count, ordered by |disc|."""
    lines = ["disc,count"]
    for disc in sorted(tab.counts, key=lambda t: (abs(t), t)):
        lines.append(f"{disc},{tab.counts[disc]}")
    return "\n".join(lines) + "\n"
