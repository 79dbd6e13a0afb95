"""Binary quadratic forms and class groups of quadratic fields.

Forms (a, b, c) of discriminant D = b^2 - 4ac are composed with the
classical Dirichlet method and reduced with Gauss reduction (definite
case) or the cycle-walk reduction (indefinite case).  For D > 0 the form
class group under composition is the narrow class group; its odd part
agrees with the odd part of the ordinary class group, which is all the
reflection machinery upstream ever consumes.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from .arith import factorize, is_fundamental_discriminant, is_prime


@dataclass(frozen=True)
class QuadForm:
    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        d = self.b * self.b - 4 * self.a * self.c
        if d == 0:
            raise ValueError("degenerate form: discriminant 0")
        if d % 4 not in (0, 1):
            raise ValueError("discriminant must be 0 or 1 mod 4")
        if d < 0 and self.a <= 0:
            raise ValueError("definite forms must be positive definite (a > 0)")
        if d > 0 and isqrt(d) ** 2 == d:
            raise ValueError("degenerate form: square discriminant")


@dataclass(frozen=True)
class ClassGroupStructure:
    discriminant: int
    elementary_divisors: tuple[int, ...]
    narrow: bool

    @property
    def order(self) -> int:
        h = 1
        for d in self.elementary_divisors:
            h *= d
        return h


def form_discriminant(f: QuadForm) -> int:
    return f.b * f.b - 4 * f.a * f.c


# ---------------------------------------------------------------------------
# reduction


def _reduce_def(a: int, b: int, c: int) -> tuple[int, int, int]:
    # Gauss reduction of a positive definite form; lands in the unique
    # representative with -a < b <= a <= c and b >= 0 on the boundaries.
    while True:
        if a > c:
            a, b, c = c, -b, a
            continue
        if b > a or b <= -a:
            t = (a - b) // (2 * a)
            c = a * t * t + b * t + c
            b = b + 2 * a * t
            continue
        break
    if a == c and b < 0:
        b = -b
    return a, b, c


def _is_reduced_indef(a: int, b: int, c: int, d: int) -> bool:
    # reduced iff |sqrt(d) - 2|a|| < b < sqrt(d); d is never a square here
    if b <= 0 or b * b > d:
        return False
    t = 2 * abs(a)
    return (t - b) * (t - b) < d < (t + b) * (t + b)


def _rho(a: int, b: int, c: int, d: int, rd: int) -> tuple[int, int, int]:
    # one reduction step (a, b, c) -> (c, b', c') with b' = -b mod 2|c|,
    # b' taken in (rd - 2|c|, rd] once |c| is below sqrt(d)
    ac = abs(c)
    if ac > rd:
        br = (-b) % (2 * ac)
        if br > ac:
            br -= 2 * ac
    else:
        br = rd - ((rd + b) % (2 * ac))
    return c, br, (br * br - d) // (4 * c)


def _reduce_indef(a: int, b: int, c: int, d: int) -> tuple[int, int, int]:
    rd = isqrt(d)
    for _ in range(10000):
        if _is_reduced_indef(a, b, c, d):
            return a, b, c
        a, b, c = _rho(a, b, c, d, rd)
    raise ArithmeticError(f"reduction did not terminate for ({a}, {b}, {c})")


def reduce(f: QuadForm) -> QuadForm:
    """A reduced representative of f's proper equivalence class.

    Unique for negative discriminant; for positive discriminant one
    member of the class's reduction cycle (the cycle, not any single
    form, is the class invariant there).
    """
    d = form_discriminant(f)
    if d < 0:
        return QuadForm(*_reduce_def(f.a, f.b, f.c))
    return QuadForm(*_reduce_indef(f.a, f.b, f.c, d))


def _cycle(a: int, b: int, c: int, d: int) -> list[tuple[int, int, int]]:
    # full rho-cycle through a reduced indefinite form
    rd = isqrt(d)
    start = (a, b, c)
    out = [start]
    cur = _rho(a, b, c, d, rd)
    while cur != start:
        out.append(cur)
        cur = _rho(*cur, d, rd)
    return out


# ---------------------------------------------------------------------------
# composition


def _ext_gcd(x: int, y: int) -> tuple[int, int, int]:
    # (g, s, t) with s*x + t*y = g; g > 0 for x, y not both negative
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def _crt(r1: int, m1: int, r2: int, m2: int) -> int:
    # moduli must be positive; raises when the congruences conflict
    g, s, _ = _ext_gcd(m1, m2)
    if (r2 - r1) % g:
        raise ArithmeticError("inconsistent congruences in composition")
    lcm = m1 // g * m2
    return (r1 + (r2 - r1) // g * s % (m2 // g) * m1) % lcm


def _coprime_representation(a: int, b: int, c: int, n: int) -> tuple[int, int]:
    # primitive (x, y) with f(x, y) nonzero and coprime to n, assembled by
    # CRT: for each prime p | n one of (1,0), (0,1), (1,1) yields a value
    # prime to p, else p would divide all of a, b, c
    n = abs(n)
    if n <= 1:
        return 1, 0
    x, y, mod = 0, 0, 1
    for p, _ in factorize(n).factors:
        for xp, yp in ((1, 0), (0, 1), (1, 1)):
            if (a * xp * xp + b * xp * yp + c * yp * yp) % p:
                break
        else:
            raise ArithmeticError("form is imprimitive")
        x = _crt(x, mod, xp, p)
        y = _crt(y, mod, yp, p)
        mod *= p
    if x == 0:
        # every prime picked (0, 1), so y = 1 and (mod, 1) is primitive
        x = mod
    # no prime divides both x and mod together with y, so shifting y by
    # multiples of mod reaches a pair that is globally primitive
    for k in range(10**6):
        if gcd(x, y + k * mod) == 1:
            return x, y + k * mod
    raise ArithmeticError("no primitive representation found")


def _compose_raw(
    f1: tuple[int, int, int], f2: tuple[int, int, int], d: int
) -> tuple[int, int, int]:
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    x, y = _coprime_representation(a2, b2, c2, a1)
    # complete (x, y) to a determinant-one matrix [[x, u], [y, v]] and
    # transform f2 so its first coefficient m is coprime to a1
    g, v, t = _ext_gcd(x, y)
    u = -t
    m = a2 * x * x + b2 * x * y + c2 * y * y
    mid = 2 * a2 * x * u + b2 * (x * v + u * y) + 2 * c2 * y * v
    # Dirichlet composition of the united pair (a1, B, *), (m, B, *)
    big_b = _crt(b1, 2 * abs(a1), mid, 2 * abs(m))
    big_a = a1 * m
    big_c = (big_b * big_b - d) // (4 * big_a)
    return big_a, big_b, big_c


def compose(f: QuadForm, g: QuadForm) -> QuadForm:
    """Gauss composition of proper equivalence classes, reduced."""
    d = form_discriminant(f)
    if form_discriminant(g) != d:
        raise ValueError("cannot compose forms of different discriminants")
    return reduce(QuadForm(*_compose_raw((f.a, f.b, f.c), (g.a, g.b, g.c), d)))


def is_equivalent(f: QuadForm, g: QuadForm) -> bool:
    """Proper (SL2) equivalence test."""
    d = form_discriminant(f)
    if form_discriminant(g) != d:
        raise ValueError("forms have different discriminants")
    fr, gr = reduce(f), reduce(g)
    if d < 0:
        return fr == gr
    return (gr.a, gr.b, gr.c) in _cycle(fr.a, fr.b, fr.c, d)


# ---------------------------------------------------------------------------
# class groups


def _principal(d: int) -> tuple[int, int, int]:
    b = d % 2
    return 1, b, (b * b - d) // 4


def _reduced_forms_def(d: int) -> list[tuple[int, int, int]]:
    out = []
    for a in range(1, isqrt(-d // 3) + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            out.append((a, b, c))
    return out


def _reduced_forms_indef(d: int) -> list[tuple[int, int, int]]:
    # b must match d in parity for c to come out integral
    out = []
    for b in range(1, isqrt(d) + 1):
        if (d - b * b) % 2:
            continue
        n = (d - b * b) // 4
        for e in range(1, isqrt(n) + 1):
            if n % e:
                continue
            for aa in {e, n // e}:
                if (2 * aa - b) ** 2 < d < (2 * aa + b) ** 2:
                    out.append((aa, b, -(n // aa)))
                    out.append((-aa, b, n // aa))
    return out


class _Group:
    """Class representatives under composition; negative-discriminant
    representatives are the reduced forms, positive-discriminant ones the
    lexicographic minimum of each reduction cycle."""

    def __init__(self, d: int):
        self.d = d
        if d < 0:
            self.reps = sorted(_reduced_forms_def(d))
        else:
            seen: set[tuple[int, int, int]] = set()
            reps = []
            for f in _reduced_forms_indef(d):
                if f in seen:
                    continue
                cyc = _cycle(*f, d)
                seen.update(cyc)
                reps.append(min(cyc))
            self.reps = sorted(reps)
        self.identity = self.canon(_principal(d))

    def canon(self, f: tuple[int, int, int]) -> tuple[int, int, int]:
        if self.d < 0:
            return _reduce_def(*f)
        return min(_cycle(*_reduce_indef(*f, self.d), self.d))

    def mul(
        self, f: tuple[int, int, int], g: tuple[int, int, int]
    ) -> tuple[int, int, int]:
        return self.canon(_compose_raw(f, g, self.d))

    def power(self, f: tuple[int, int, int], k: int) -> tuple[int, int, int]:
        out = self.identity
        base = f
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out


def _group_for(d: int) -> _Group:
    if d == 1 or not is_fundamental_discriminant(d):
        raise ValueError(f"{d} is not a fundamental discriminant distinct from 1")
    return _Group(d)


def _log_int(n: int, q: int) -> int:
    out = 0
    while n > 1:
        n //= q
        out += 1
    return out


def class_group(d: int) -> ClassGroupStructure:
    """Group structure for fundamental discriminant d, as a chain of
    elementary divisors d1 | d2 | ... (narrow class group when d > 0)."""
    grp = _group_for(d)
    h = len(grp.reps)
    parts_per_prime: dict[int, list[int]] = {}
    for q, e in factorize(h).factors if h > 1 else ():
        # counting q^k-torsion pins down the partition of the q-part:
        # m_k = log_q #{x : x^(q^k) = id} and m_k - m_(k-1) counts parts >= k
        ms = [0]
        for k in range(1, e + 1):
            qk = q**k
            cnt = sum(1 for f in grp.reps if grp.power(f, qk) == grp.identity)
            m = _log_int(cnt, q)
            assert q**m == cnt, "torsion count is not a power of q"
            ms.append(m)
            if m == e:
                break
        ranks = [ms[k] - ms[k - 1] for k in range(1, len(ms))]
        parts = []
        for i in range(1, ranks[0] + 1):
            parts.append(sum(1 for r in ranks if r >= i))
        parts_per_prime[q] = sorted(parts)
    width = max((len(p) for p in parts_per_prime.values()), default=0)
    divisors = []
    for i in range(width):
        dd = 1
        for q, parts in parts_per_prime.items():
            padded = [0] * (width - len(parts)) + parts
            dd *= q ** padded[i]
        divisors.append(dd)
    return ClassGroupStructure(d, tuple(divisors), narrow=d > 0)


def ell_rank(d: int, ell: int) -> int:
    """ell-rank of the class group of fundamental discriminant d (narrow
    for d > 0, which has the same odd part as the ordinary group)."""
    if ell < 3 or ell % 2 == 0 or not is_prime(ell):
        raise ValueError("ell must be an odd prime")
    grp = _group_for(d)
    cnt = sum(1 for f in grp.reps if grp.power(f, ell) == grp.identity)
    r = _log_int(cnt, ell)
    assert ell**r == cnt, "ell-torsion count is not a power of ell"
    return r
