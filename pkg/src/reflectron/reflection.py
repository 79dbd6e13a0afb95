"""The reflection identities themselves.

For an odd prime ell and a fundamental discriminant D, the number of
degree-ell fields whose Galois closure is dihedral with quadratic
resolvent Q(sqrt(D)) is tied to the number of degree-ell fields with
Frobenius closure group at exactly two discriminants determined by D.
This module computes every ingredient of that statement: the mirror
(degree ell - 1) discriminant, the dihedral-side count read off the
class group, the admissible conductor exponents, and the two target
discriminants.  At ell = 3 both sides are plain cubic-field counts and
the identity is checked outright against a cubic-form tabulation; at
ell = 5 an aggregate over the resolvent pair (d, 5d) removes the
primitive-root side condition and is again exactly checkable.

Discriminants of candidate fields are handled as FieldDiscriminant
values: signature plus factored magnitude, since a signed integer alone
would conflate signatures in even degree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import (
    Factorization,
    factorize,
    is_fundamental_discriminant,
    is_prime,
    smallest_primitive_root,
)
from .cubicforms import CubicTabulation, count_N3
from .quadforms import ell_rank


@dataclass(frozen=True)
class FieldDiscriminant:
    """A number-field discriminant as signature plus unsigned magnitude.

    r2 counts pairs of complex embeddings and fixes the sign of the
    discriminant as (-1)^r2; keeping it explicit distinguishes data
    that share a signed value (a totally real quartic and one with two
    complex pairs both have positive discriminant).
    """

    r2: int
    magnitude: Factorization
    degree: int

    def __post_init__(self) -> None:
        if self.degree < 1:
            raise ValueError("degree must be positive")
        if self.r2 < 0 or 2 * self.r2 > self.degree:
            raise ValueError(f"r2 = {self.r2} is impossible in degree {self.degree}")
        if self.magnitude.sign != 1:
            raise ValueError("magnitude must be positive")

    def signed_value(self) -> int:
        return (-1) ** self.r2 * self.magnitude.value()


def _check_ell(ell: int) -> None:
    if ell % 2 == 0 or not is_prime(ell):
        raise ValueError(f"{ell} is not an odd prime")


def _check_disc(ell: int, D: int) -> None:
    # the identities and the mirror construction exclude the trivial
    # discriminant and the quadratic field of conductor ell itself
    if not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    if D in (1, ell, -ell):
        raise ValueError(f"D = {D} is excluded for ell = {ell}")


def mirror_disc(ell: int, D: int) -> FieldDiscriminant:
    """Discriminant of the degree ell - 1 mirror field of Q(sqrt(D)).

    Away from ell the magnitude is the (ell-1)/2 power of the
    prime-to-ell part of D; the ell-adic valuation is ell - 2 except in
    the one tame case (ell | D with ell = 3 mod 4) where it drops to
    ell - 3.  The mirror field is totally real exactly when D < 0.
    """
    _check_ell(ell)
    _check_disc(ell, D)
    half = (ell - 1) // 2
    away = factorize(abs(D)).without_prime(ell).power(half)
    # wild ramification contributes ell - 2 except when ell | D with
    # ell = 3 mod 4, where ramification at ell is tame
    v = ell - 2 if (D % ell or ell % 4 == 1) else ell - 3
    magnitude = Factorization.from_exponents(1, {ell: v}) * away
    return FieldDiscriminant(0 if D < 0 else half, magnitude, ell - 1)


def _exact_root(f: Factorization, k: int) -> int | None:
    # k-th root of a positive factored integer, None when not exact
    if any(e % k for _, e in f.factors):
        return None
    out = 1
    for p, e in f.factors:
        out *= p ** (e // k)
    return out


def classify_mirror(F_disc: FieldDiscriminant, ell: int) -> int:
    """The fundamental discriminant whose mirror discriminant this is.

    Inverts mirror_disc: the signature fixes the sign of D, the ell-adic
    valuation selects between the ell | D and ell coprime shapes, and the
    prime-to-ell part must be an exact (ell-1)/2 power.  When
    ell = 1 mod 4 the discriminants D and ell*D share a mirror
    discriminant; the representative coprime to ell is returned.  Raises
    ValueError when no fundamental discriminant maps here.
    """
    _check_ell(ell)
    if F_disc.degree != ell - 1:
        raise ValueError(f"degree {F_disc.degree} mirror fields do not exist for ell = {ell}")
    half = (ell - 1) // 2
    if F_disc.r2 == 0:
        sign = -1
    elif F_disc.r2 == half:
        sign = 1
    else:
        raise ValueError(f"r2 = {F_disc.r2} matches neither mirror signature")
    v = F_disc.magnitude.vp(ell)
    root = _exact_root(F_disc.magnitude.without_prime(ell), half)
    candidates = []
    if root is not None:
        if v == ell - 2:
            candidates.append(sign * root)
        if v == (ell - 2 if ell % 4 == 1 else ell - 3):
            candidates.append(sign * ell * root)
    for D in candidates:
        if is_fundamental_discriminant(D) and D not in (1, ell, -ell):
            if mirror_disc(ell, D) == F_disc:
                return D
    raise ValueError(f"no fundamental discriminant has mirror discriminant {F_disc}")


def dl_disc(ell: int, D: int) -> FieldDiscriminant:
    """Discriminant shared by every dihedral degree-ell field with
    quadratic resolvent Q(sqrt(D)): magnitude |D|^((ell-1)/2), totally
    real when D > 0 and r2 = (ell-1)/2 complex pairs when D < 0.
    """
    _check_ell(ell)
    if D == 1 or not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not the discriminant of a quadratic field")
    half = (ell - 1) // 2
    return FieldDiscriminant(half if D < 0 else 0, factorize(abs(D)).power(half), ell)


def count_Dl(ell: int, D: int) -> int:
    """Number of dihedral degree-ell fields with resolvent Q(sqrt(D)).

    Each such field corresponds to an index-ell subgroup of the class
    group of Q(sqrt(D)), so the count is (ell^r - 1)/(ell - 1) with r
    the ell-rank.
    """
    _check_ell(ell)
    if D == 1 or not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not the discriminant of a quadratic field")
    return (ell ** ell_rank(D, ell) - 1) // (ell - 1)


def admissible_conductor_exponents(ell: int, D: int) -> set[int]:
    """Possible ell-adic conductor exponents for the cyclic degree-ell
    extensions of the mirror field that the correspondence produces."""
    _check_ell(ell)
    _check_disc(ell, D)
    if D % ell:
        return {0, 2}
    if ell % 4 == 1:
        return {0, (ell + 3) // 2}
    return {0, 2, (ell + 5) // 2}


def fl_disc_from_conductor(ell: int, D: int, k: int) -> FieldDiscriminant | None:
    """Frobenius-side discriminant produced by conductor exponent k.

    The ell-adic valuation is (ell - 2) + k, dropping to (ell - 3) + k
    in the tame ell | D, ell = 3 mod 4 case; away from ell the magnitude
    agrees with |D|^((ell-1)/2).  In the tame case k = 2 is admissible
    for the conductor but produces no field (the valuation ell - 1 is
    not attained), so it returns None rather than a discriminant.
    """
    if k not in admissible_conductor_exponents(ell, D):
        raise ValueError(f"conductor exponent {k} is not admissible for ({ell}, {D})")
    if D % ell == 0 and ell % 4 == 3:
        if k == 2:
            return None
        v = ell - 3 + k
    else:
        v = ell - 2 + k
    half = (ell - 1) // 2
    away = factorize(abs(D)).without_prime(ell).power(half)
    magnitude = Factorization.from_exponents(1, {ell: v}) * away
    return FieldDiscriminant(0 if D < 0 else half, magnitude, ell)


def target_discs(ell: int, D: int) -> tuple[FieldDiscriminant, FieldDiscriminant]:
    """The two Frobenius-side discriminants appearing on the right of
    the identity, ordered by increasing ell-adic valuation."""
    found = []
    for k in sorted(admissible_conductor_exponents(ell, D)):
        fd = fl_disc_from_conductor(ell, D, k)
        if fd is not None:
            found.append(fd)
    # one admissible exponent drops out in the tame case, never two
    assert len(found) == 2
    return found[0], found[1]


@dataclass(frozen=True)
class PredictionRecord:
    """One instance of the identity, evaluated as far as class groups go.

    dl_count is the dihedral-side field count; lhs_value folds in the
    extra unit contribution for D > 0.  The Frobenius-side counts at
    the two targets are what external field tables must supply.  For
    ell >= 7 those counts must be restricted to fields on which a
    distinguished conjugation acts through the primitive root g
    (star_required); at ell = 3 the restriction is vacuous and at
    ell = 5 the aggregate of corollary5_predict avoids it.
    """

    ell: int
    D: int
    g: int
    dl_count: int
    lhs_value: int
    targets: tuple[FieldDiscriminant, FieldDiscriminant]
    star_required: bool


def predict(ell: int, D: int) -> PredictionRecord:
    """Evaluate the left side of the identity at (ell, D) and name the
    two discriminants whose field counts the right side sums."""
    targets = target_discs(ell, D)
    dl_count = count_Dl(ell, D)
    lhs = dl_count if D < 0 else ell * dl_count + 1
    g = smallest_primitive_root(ell)
    return PredictionRecord(ell, D, g, dl_count, lhs, targets, ell >= 7)


@dataclass(frozen=True)
class OnVerification:
    """Both sides of the ell = 3 identity read off one tabulation."""

    D: int
    lhs_terms: tuple[int, int]
    rhs: int
    holds: bool


def verify_on3(D: int, tab: CubicTabulation) -> OnVerification:
    """Check the cubic case of the identity for one discriminant, with
    every count taken from a cubic-form tabulation and nothing else.

    The left side is N3(D*) + N3(-27 D) where D* = -3 D when 3 does not
    divide D and -D/3 otherwise; the right side is N3(D) for D < 0 and
    3 N3(D) + 1 for D > 0.  The tabulation must cover all three
    discriminants or count_N3 raises.
    """
    if not is_fundamental_discriminant(D) or D in (1, -3):
        raise ValueError(f"D = {D} is outside the identity's range")
    dstar = -3 * D if D % 3 else -D // 3
    first = count_N3(tab, dstar)
    second = count_N3(tab, -27 * D)
    rhs = count_N3(tab, D) if D < 0 else 3 * count_N3(tab, D) + 1
    return OnVerification(D, (first, second), rhs, first + second == rhs)


@dataclass(frozen=True)
class Corollary5Report:
    """The star-free ell = 5 aggregate over the resolvent pair (d, 5d)."""

    d: int
    lhs_value: int
    targets: tuple[FieldDiscriminant, FieldDiscriminant, FieldDiscriminant]


def corollary5_predict(d: int) -> Corollary5Report:
    """Aggregate the ell = 5 identity over both resolvents d and 5d.

    For d coprime to 5 the two target pairs overlap in 5^3 d^2 and the
    union is the three discriminants 5^3 d^2, 5^5 d^2, 5^7 d^2; summing
    the dihedral counts of d and 5d makes the total field count at
    those targets exact with no side condition.  The left side is the
    plain sum for d < 0 and five times it plus two for d > 0.
    """
    if d == 1 or not is_fundamental_discriminant(d):
        raise ValueError(f"{d} is not the discriminant of a quadratic field")
    if d % 5 == 0:
        raise ValueError(f"d = {d} is not coprime to 5")
    total = count_Dl(5, d) + count_Dl(5, 5 * d)
    lhs = total if d < 0 else 5 * total + 2
    r2 = 0 if d < 0 else 2
    square = factorize(abs(d)).power(2)
    targets = tuple(
        FieldDiscriminant(r2, Factorization.from_exponents(1, {5: v}) * square, 5)
        for v in (3, 5, 7)
    )
    return Corollary5Report(d, lhs, targets)
