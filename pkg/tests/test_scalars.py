from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from b3param.errors import BadResidue, FieldError, NotPrime
from b3param.rng import SplitMix64
from b3param.scalars import (DualField, DualNumber, EisensteinField, EisensteinNumber,
                             RationalField, default_field, make_prime_field, parse_field, rho_of)


def test_prime_field_cube_roots():
    assert make_prime_field(7).cube_root == 2
    assert make_prime_field(13).cube_root == 3
    assert int(rho_of(make_prime_field(7))) == 2
    assert int(rho_of(make_prime_field(13))) == 3


def test_prime_field_rejections():
    with pytest.raises(BadResidue):
        make_prime_field(5)
    with pytest.raises(BadResidue):
        make_prime_field(11)
    with pytest.raises(NotPrime):
        make_prime_field(49)


def test_eisenstein_rho():
    assert rho_of(EisensteinField()) == EisensteinNumber(0, 1)


@pytest.mark.parametrize("field", [make_prime_field(7), make_prime_field(13),
                                   make_prime_field(2**61 - 1), EisensteinField(),
                                   DualField(make_prime_field(31))])
def test_rho_is_primitive_cube_root(field):
    r = field.rho
    one = field.one
    assert r * r * r == one
    assert r != one
    assert one + r + r * r == field.zero


def test_rationals_have_no_rho():
    assert not RationalField().has_rho
    with pytest.raises(FieldError):
        RationalField().rho


def _axioms(field, samples, seed):
    rng = SplitMix64(seed)
    for _ in range(samples):
        a, b, c = field.random(rng), field.random(rng), field.random(rng)
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a and a * b == b * a
        if field.is_unit(a):
            assert a * field.inv(a) == field.one


@pytest.mark.parametrize("spec", ["fp:7", "fp:13", "fp", "qrho", "q"])
def test_field_axioms_ten_thousand(spec):
    _axioms(parse_field(spec), 10_000, 1)


def test_dual_field_axioms():
    _axioms(DualField(make_prime_field(7)), 2000, 2)
    _axioms(DualField(EisensteinField(bound=5)), 500, 3)


def test_dual_inverse_formula():
    f = make_prime_field(13)
    x = DualNumber(f(3), f(5))
    inv = x.inverse()
    assert inv.value == f(3) ** -1
    assert inv.derivative == -(f(3) ** -2) * f(5)
    assert x * inv == DualNumber(f(1), f(0))
    with pytest.raises(ZeroDivisionError):
        DualNumber(f(0), f(1)).inverse()


def _poly(coeffs, x):
    acc = 0 * x
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deriv(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:]


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=6),
       st.lists(st.integers(-20, 20), min_size=1, max_size=6),
       st.integers(-30, 30))
@settings(max_examples=200, deadline=None)
def test_dual_chain_rule(fc, gc, x):
    x = Fraction(x)
    out = _poly(fc, _poly(gc, DualNumber(x, Fraction(1))))
    gx = _poly(gc, x)
    expected = _poly(_deriv(fc), gx) * _poly(_deriv(gc), x) if len(fc) > 1 and len(gc) > 1 else 0
    assert out.value == _poly(fc, gx)
    assert out.derivative == expected


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6), st.integers(-10**6, 10**6),
       st.integers(1, 10**6))
def test_eisenstein_stays_normalized(a, b, c, d):
    x = EisensteinNumber(Fraction(a, b), Fraction(c, d))
    y = (x * x + x) * x.conjugate()
    for part in (y.re, y.rho_coeff):
        assert part == Fraction(part.numerator, part.denominator)
        assert part.denominator > 0
    if x:
        assert x * x.inverse() == EisensteinNumber(1, 0)


def test_eisenstein_norm_and_conjugate():
    r = EisensteinNumber(0, 1)
    assert r.conjugate() == r * r
    assert r.norm() == 1
    assert EisensteinNumber(2, 1).norm() == 3


@pytest.mark.parametrize("spec,value", [("qrho", EisensteinNumber(Fraction(1, 2), Fraction(-3, 4))),
                                        ("q", Fraction(-7, 3)),
                                        ("fp:13", 11)])
def test_encode_roundtrip(spec, value):
    f = parse_field(spec)
    v = f(value)
    assert f.decode(f.encode(v)) == v


def test_encodings_are_textual():
    assert EisensteinField().encode(EisensteinNumber(1, 2)) == "1/1+2/1*r"
    assert RationalField().encode(Fraction(3, 6)) == "1/2"
    assert make_prime_field(13).encode(15) == "2"


def test_default_prime_env(monkeypatch):
    assert default_field().p == 2**61 - 1
    monkeypatch.setenv("BRAID_DEFAULT_PRIME", "13")
    assert default_field().p == 13
    assert parse_field("fp").p == 13


def test_bad_spec():
    with pytest.raises(FieldError):
        parse_field("gf:7")
