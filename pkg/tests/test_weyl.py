"""Kernel laws for the Weyl algebra arithmetic and the Fock action."""

from fractions import Fraction

import pytest

from symorder.rng import SplitMix64
from symorder.weyl import (
    DimensionMismatchError,
    WeylElement,
    add,
    d_degree,
    fock_apply,
    format_term,
    mul,
    poly_monomial,
    poly_one,
    scale,
    truncate,
    weyl_d,
    weyl_scalar,
    weyl_term,
    weyl_x,
    x_degree,
)


def random_element(rng: SplitMix64, n: int, terms: int = 4, max_exp: int = 3) -> WeylElement:
    """A sparse element with per-coordinate exponents <= max_exp."""
    data = {}
    for _ in range(terms):
        xexp = tuple(rng.below(max_exp + 1) for _ in range(n))
        dexp = tuple(rng.below(max_exp + 1) for _ in range(n))
        data[(xexp, dexp)] = rng.rational()
    return WeylElement(n, data)


def random_poly(rng: SplitMix64, n: int, terms: int = 3, max_exp: int = 3) -> WeylElement:
    data = {}
    for _ in range(terms):
        xexp = tuple(rng.below(max_exp + 1) for _ in range(n))
        data[(xexp, (0,) * n)] = rng.rational()
    return WeylElement(n, data)


def assert_canonical(a: WeylElement) -> None:
    for (xexp, dexp), coeff in a.items():
        assert isinstance(coeff, Fraction) and coeff != 0
        assert len(xexp) == a.n and len(dexp) == a.n
        assert all(e >= 0 for e in xexp) and all(e >= 0 for e in dexp)


def test_generator_constructors():
    assert dict(weyl_x(2, 1).items()) == {((1, 0), (0, 0)): Fraction(1)}
    assert dict(weyl_d(2, 2).items()) == {((0, 0), (0, 1)): Fraction(1)}
    assert weyl_scalar(3, 0).is_zero()
    assert dict(weyl_scalar(3, Fraction(2, 3)).items()) == {
        ((0, 0, 0), (0, 0, 0)): Fraction(2, 3)
    }
    with pytest.raises(IndexError):
        weyl_x(2, 3)
    with pytest.raises(IndexError):
        weyl_d(2, 0)


def test_add_and_scale():
    x1 = weyl_x(2, 1)
    assert dict(add(x1, x1).items()) == {((1, 0), (0, 0)): Fraction(2)}
    assert add(x1, scale(-1, x1)).is_zero()
    assert dict(scale(Fraction(1, 2), weyl_d(2, 1)).items()) == {
        ((0, 0), (1, 0)): Fraction(1, 2)
    }
    with pytest.raises(DimensionMismatchError):
        add(weyl_x(2, 1), weyl_x(3, 1))


def test_relation_laws_exhaustive():
    for n in range(1, 5):
        one = weyl_scalar(n, 1)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                xi, xj = weyl_x(n, i), weyl_x(n, j)
                di, dj = weyl_d(n, i), weyl_d(n, j)
                assert mul(xi, xj) == mul(xj, xi)
                assert mul(di, dj) == mul(dj, di)
                bracket = mul(dj, xi) - mul(xi, dj)
                expected = one if i == j else weyl_scalar(n, 0)
                assert bracket == expected, (n, i, j)


def test_mul_defining_examples():
    x1, x2 = weyl_x(2, 1), weyl_x(2, 2)
    d1 = weyl_d(2, 1)
    assert mul(d1, x1) == mul(x1, d1) + weyl_scalar(2, 1)
    assert mul(d1, x2) == mul(x2, d1)
    # d1^2 * x1 = x1 d1^2 + 2 d1, checked against the Fock-application oracle
    # on the monomials x1^m, m <= 4.
    lhs = mul(mul(d1, d1), x1)
    rhs = mul(x1, mul(d1, d1)) + scale(2, d1)
    assert lhs == rhs
    for m in range(5):
        target = poly_monomial(2, (m, 0))
        assert fock_apply(lhs, target) == fock_apply(rhs, target)


def test_associativity_random_triples():
    rng = SplitMix64(2024)
    for trial in range(200):
        n = 1 + rng.below(3)
        a = random_element(rng, n)
        b = random_element(rng, n)
        c = random_element(rng, n)
        assert mul(mul(a, b), c) == mul(a, mul(b, c)), trial


def test_action_compatibility_random():
    rng = SplitMix64(515)
    for trial in range(200):
        n = 1 + rng.below(3)
        a = random_element(rng, n)
        b = random_element(rng, n)
        p = random_poly(rng, n)
        assert fock_apply(mul(a, b), p) == fock_apply(a, fock_apply(b, p)), trial


def test_bilinearity():
    rng = SplitMix64(77)
    for _ in range(50):
        n = 1 + rng.below(3)
        a, b, c = (random_element(rng, n) for _ in range(3))
        p, q = random_poly(rng, n), random_poly(rng, n)
        s = rng.rational()
        assert mul(a + b, c) == mul(a, c) + mul(b, c)
        assert mul(a, b + c) == mul(a, b) + mul(a, c)
        assert mul(a.scale(s), b) == mul(a, b).scale(s)
        assert fock_apply(a + b, p) == fock_apply(a, p) + fock_apply(b, p)
        assert fock_apply(a, p + q) == fock_apply(a, p) + fock_apply(a, q)
        assert fock_apply(a.scale(s), p) == fock_apply(a, p).scale(s)


def test_truncate_examples():
    a = weyl_term(2, (1, 0), (1, 0)) + weyl_term(2, (1, 0), (0, 3))
    assert truncate(a, 2) == weyl_term(2, (1, 0), (1, 0))
    assert truncate(weyl_x(2, 1), 0) == weyl_x(2, 1)
    with pytest.raises(ValueError):
        truncate(a, -1)


def test_truncate_idempotent_and_exact():
    rng = SplitMix64(31337)
    for _ in range(100):
        n = 1 + rng.below(3)
        a = random_element(rng, n)
        p = random_poly(rng, n)
        d = rng.below(5)
        assert truncate(truncate(a, d), d) == truncate(a, d)
        # Terms whose derivative order exceeds the polynomial degree kill
        # every monomial, so dropping them never changes the action.
        deg = max(p.x_degree(), 0)
        assert fock_apply(truncate(a, deg), p) == fock_apply(a, p)


def test_fock_examples():
    assert fock_apply(weyl_d(1, 1), poly_one(1)).is_zero()
    a = mul(weyl_x(2, 1), weyl_d(2, 2))
    assert fock_apply(a, poly_monomial(2, (0, 1))) == poly_monomial(2, (1, 0))
    dd = mul(weyl_d(1, 1), weyl_d(1, 1))
    assert fock_apply(dd, poly_monomial(1, (3,))) == poly_monomial(1, (1,), 6)
    rng = SplitMix64(4)
    for _ in range(20):
        p = random_poly(rng, 2)
        assert fock_apply(weyl_scalar(2, 1), p) == p
    with pytest.raises(ValueError):
        fock_apply(weyl_x(1, 1), weyl_d(1, 1))


def test_degrees():
    a = weyl_term(2, (1, 0), (1, 1))
    assert d_degree(a) == 2
    assert x_degree(weyl_d(2, 1)) == 0
    zero = weyl_scalar(2, 0)
    assert x_degree(zero) == -1 and d_degree(zero) == -1


def test_canonical_form_preserved():
    rng = SplitMix64(88)
    for _ in range(50):
        n = 1 + rng.below(3)
        a = random_element(rng, n)
        b = random_element(rng, n)
        p = random_poly(rng, n)
        for value in (a + b, a - b, mul(a, b), a.scale(rng.rational()),
                      truncate(a, 2), fock_apply(a, p)):
            assert_canonical(value)


def test_constructor_canonicalizes():
    # Duplicate keys merge, zeros drop, coefficients coerce to Fraction.
    a = WeylElement(1, {((1,), (0,)): 1})
    b = WeylElement(1, {((1,), (0,)): Fraction(1)})
    assert a == b
    assert WeylElement(1, {((1,), (0,)): 0}).is_zero()
    with pytest.raises(ValueError):
        WeylElement(2, {((1,), (0, 0)): 1})
    with pytest.raises(ValueError):
        WeylElement(1, {((-1,), (0,)): 1})


def test_immutability():
    a = weyl_x(2, 1)
    with pytest.raises(AttributeError):
        a.n = 3


def test_operator_sugar():
    x1, d1 = weyl_x(1, 1), weyl_d(1, 1)
    assert x1 * d1 == mul(x1, d1)
    assert 2 * x1 == x1 * 2 == x1.scale(2)
    assert x1 / 2 == x1.scale(Fraction(1, 2))
    assert (x1 + d1) ** 2 == mul(x1 + d1, x1 + d1)
    assert x1 ** 0 == weyl_scalar(1, 1)
    with pytest.raises(ValueError):
        x1 ** -1


def test_formatting():
    assert format_term((2, 0), (0, 1), Fraction(-1, 2)) == "-1/2*x1^2*d2"
    assert format_term((0, 0), (0, 0), Fraction(3)) == "3"
    assert str(weyl_scalar(2, 0)) == "0"
    # terms render in lexicographic (xexp, dexp) order
    assert str(weyl_x(2, 1) - weyl_x(2, 2)) == "-x2 + x1"
