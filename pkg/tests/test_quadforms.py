import pytest

from reflectron.arith import fundamental_discriminants_in
from reflectron.quadforms import (
    ClassGroupStructure,
    QuadForm,
    class_group,
    compose,
    ell_rank,
    form_discriminant,
    is_equivalent,
    reduce,
)


def _reduced_definite_count(d):
    # independent count of Gauss-reduced positive definite forms:
    # -a < b <= a <= c, b >= 0 whenever a == c or a == |b|
    count = 0
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            num = b * b - d
            if num % (4 * a) == 0:
                c = num // (4 * a)
                if c >= a and not (a == c and b < 0):
                    count += 1
        a += 1
    return count


def test_quadform_validation():
    with pytest.raises(ValueError):
        QuadForm(1, 0, 0)  # discriminant 0
    with pytest.raises(ValueError):
        QuadForm(1, 3, 2)  # square discriminant 1 factors over Q
    with pytest.raises(ValueError):
        QuadForm(-1, 0, -1)  # negative definite orientation
    with pytest.raises(ValueError):
        QuadForm(2, 4, 2)  # discriminant 0
    assert form_discriminant(QuadForm(1, 1, 6)) == -23
    assert form_discriminant(QuadForm(1, 1, -1)) == 5


def test_reduce_definite():
    assert reduce(QuadForm(2, -1, 3)) == QuadForm(2, -1, 3)
    f = reduce(QuadForm(6, 11, 6))
    assert form_discriminant(f) == -23
    assert (-f.a < f.b <= f.a <= f.c) and (f.b >= 0 or (f.a != f.c and f.b != f.a))
    # boundary normalizations pick the nonnegative b representative
    assert reduce(QuadForm(3, -3, 5)) == QuadForm(3, 3, 5)
    assert reduce(QuadForm(2, -1, 2)) == QuadForm(2, 1, 2)


def test_reduce_indefinite_lands_in_cycle():
    f = reduce(QuadForm(1, 13, -9))  # discriminant 205
    d = form_discriminant(f)
    assert d == 205
    assert 0 < f.b and f.b * f.b < d
    assert (2 * abs(f.a) - f.b) ** 2 < d < (2 * abs(f.a) + f.b) ** 2


def test_compose_group_axioms():
    g = QuadForm(2, 1, 3)  # order 3 class of discriminant -23
    e = QuadForm(1, 1, 6)
    assert compose(e, g) == reduce(g)
    assert compose(g, QuadForm(2, -1, 3)) == e
    gg = compose(g, g)
    assert gg == QuadForm(2, -1, 3)
    assert compose(gg, g) == e
    # commutativity and associativity on a bigger group
    a = QuadForm(3, 1, 4)  # discriminant -47
    b = QuadForm(2, 1, 6)
    assert compose(a, b) == compose(b, a)
    c = QuadForm(2, -1, 6)
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


def test_is_equivalent():
    assert is_equivalent(QuadForm(1, 1, 6), QuadForm(1, -1, 6))
    assert not is_equivalent(QuadForm(1, 1, 6), QuadForm(2, 1, 3))
    with pytest.raises(ValueError):
        is_equivalent(QuadForm(1, 1, 6), QuadForm(1, 1, 1))  # different discriminants
    # indefinite equivalence must find unreduced translates via the cycle
    f = QuadForm(1, 14, -6)  # discriminant 220, already reduced
    translate = QuadForm(f.a, f.b + 2 * f.a, f.a + f.b + f.c)
    assert is_equivalent(f, translate)
    assert is_equivalent(translate, f)


def test_class_group_golden():
    assert class_group(-23).elementary_divisors == (3,)
    assert class_group(-47).elementary_divisors == (5,)
    assert class_group(-4).elementary_divisors == ()
    assert class_group(-4).order == 1
    assert class_group(229).elementary_divisors == (3,)
    assert class_group(12).elementary_divisors == (2,)
    assert class_group(-1208).elementary_divisors == (12,)
    assert class_group(-3299).elementary_divisors == (3, 9)
    # -3896 = -8 * 487 has two prime discriminant divisors, so genus
    # theory forces 2-rank one even though the 3-rank is two
    assert class_group(-3896).elementary_divisors == (3, 12)


def test_class_group_narrow_flag():
    assert class_group(229).narrow
    assert not class_group(-23).narrow
    assert class_group(229) == ClassGroupStructure(229, (3,), True)


def test_class_group_rejects_bad_discriminants():
    for d in (1, 0, 7, -6, 45):
        with pytest.raises(ValueError):
            class_group(d)


def test_order_matches_reduced_form_count():
    for d in fundamental_discriminants_in(-400, -3):
        assert class_group(d).order == _reduced_definite_count(d), d


def test_elementary_divisor_chain():
    for d in (-3299, -3896, -1208, -455, 229, 1596):
        divisors = class_group(d).elementary_divisors
        for small, big in zip(divisors, divisors[1:]):
            assert big % small == 0, d


def test_ell_rank():
    assert ell_rank(-23, 3) == 1
    assert ell_rank(-4, 3) == 0
    assert ell_rank(-3299, 3) == 2
    assert ell_rank(229, 3) == 1
    assert ell_rank(-47, 5) == 1
    assert ell_rank(-47, 3) == 0
    assert ell_rank(-1208, 3) == 1  # C12 has one subgroup of index 3


def test_ell_rank_validation():
    for ell in (2, 4, 9):
        with pytest.raises(ValueError):
            ell_rank(-23, ell)
    with pytest.raises(ValueError):
        ell_rank(45, 3)


def test_ell_rank_matches_structure():
    for d in fundamental_discriminants_in(-500, 500):
        if d == 1:
            continue
        divisors = class_group(d).elementary_divisors
        for ell in (3, 5, 7):
            assert ell_rank(d, ell) == sum(1 for n in divisors if n % ell == 0), (d, ell)
