from fractions import Fraction

import pytest
import sympy

from padic_herman.errors import ContextError, ParseError
from padic_herman.padic import (
    INF,
    FieldContext,
    FieldElement,
    Norm,
    ProjPoint,
    chordal,
    element_of_valuation,
    format_element,
    format_norm,
    format_point,
    oo,
    parse_element,
    parse_halfint,
    parse_rational,
    pi_power,
    pnorm,
    reduce_point,
    reduce_scalar,
    vp,
)


@pytest.mark.parametrize("n", [1, 5, 25, 250, 3125 * 7, -75, 2**10 * 5**3])
def test_vp_int_matches_sympy_multiplicity(n):
    assert vp(n, 5) == sympy.multiplicity(5, abs(n))


def test_vp_rational_and_zero():
    assert vp(Fraction(1, 5), 5) == -1
    assert vp(Fraction(50, 3), 5) == 2
    assert vp(0, 5) == INF


def test_vp_requires_prime_for_rationals():
    with pytest.raises((TypeError, ValueError)):
        vp(Fraction(1, 5))


def test_context_rejects_non_primes():
    for bad in (1, 4, 6, 0, -5):
        with pytest.raises(ContextError):
            FieldContext(bad)


def test_sqrt_p_has_half_valuation(geo5):
    s = geo5.sqrt_p()
    assert s.valuation() == Fraction(1, 2)
    assert s * s == 5
    assert (s**3).valuation() == Fraction(3, 2)


def test_field_arithmetic_against_sympy(geo5):
    rt = sympy.sqrt(5)
    pairs = [
        (FieldElement(Fraction(1, 3), 2, geo5), FieldElement(-7, Fraction(1, 5), geo5)),
        (FieldElement(25, -1, geo5), FieldElement(Fraction(2, 125), 3, geo5)),
    ]
    for x, y in pairs:
        sx = (
            sympy.Rational(x.a.numerator, x.a.denominator)
            + sympy.Rational(x.b.numerator, x.b.denominator) * rt
        )
        sy = (
            sympy.Rational(y.a.numerator, y.a.denominator)
            + sympy.Rational(y.b.numerator, y.b.denominator) * rt
        )
        for got, want in (
            (x + y, sx + sy),
            (x - y, sx - sy),
            (x * y, sx * sy),
            (x / y, sx / sy),
        ):
            w = sympy.nsimplify(sympy.radsimp(sympy.expand(want)), [rt])
            b = sympy.Rational(sympy.expand(w).coeff(rt))
            a = sympy.Rational(sympy.expand(w - b * rt))
            assert got.a == Fraction(int(a.p), int(a.q))
            assert got.b == Fraction(int(b.p), int(b.q))


def test_valuation_of_mixed_element_is_min(geo5):
    # v(a) = 0 and v(b sqrt5) = 1/2 never cancel
    x = FieldElement(3, 10, geo5)
    assert x.valuation() == 0
    y = FieldElement(25, 1, geo5)
    assert y.valuation() == Fraction(1, 2)


def test_norm_ordering_and_arithmetic():
    a, b = Norm.from_valuation(5, 2), Norm.from_valuation(5, Fraction(1, 2))
    assert a < b
    assert (a * b).valuation == Fraction(5, 2)
    assert (b / a).valuation == Fraction(-3, 2)
    assert Norm.from_valuation(5, INF) < a
    assert Norm.from_valuation(5, 1).as_fraction() == Fraction(1, 5)
    assert pnorm(Fraction(1, 25), 5) == Norm.from_valuation(5, -2)


def test_format_norm():
    assert format_norm(Norm.from_valuation(5, Fraction(3, 2))) == "5^(-3/2)"
    assert format_norm(Norm.from_valuation(5, -1)) == "5^1"
    assert format_norm(Norm.from_valuation(5, 0)) == "1"
    assert format_norm(Norm.from_valuation(5, INF)) == "0"


def test_pi_powers_and_elements_of_valuation(geo5, ctx5):
    assert pi_power(geo5, 3).valuation() == Fraction(3, 2)
    # the uniformizer is sqrt(p) in every context
    assert pi_power(ctx5, 2) == 5
    assert pi_power(ctx5, 3).ctx.ramification == 2
    assert element_of_valuation(geo5, Fraction(-5, 2)).valuation() == Fraction(-5, 2)
    with pytest.raises(ValueError):
        element_of_valuation(ctx5, Fraction(1, 3))


def test_projective_points(ctx5):
    assert ProjPoint.of(oo, ctx5).is_infinity
    assert ProjPoint(5, 25, ctx5) == ProjPoint.of(Fraction(1, 5), ctx5)
    P = ProjPoint.of(Fraction(1, 5), ctx5)
    assert min(P.X.valuation(), P.Y.valuation()) == 0
    assert P.value == Fraction(1, 5)
    with pytest.raises(ValueError):
        ProjPoint(0, 0, ctx5)


def test_chordal_distance(ctx5):
    zero, inf = ProjPoint.of(0, ctx5), ProjPoint.infinity(ctx5)
    assert chordal(zero, inf) == Norm.from_valuation(5, 0)
    assert chordal(
        ProjPoint.of(1, ctx5), ProjPoint.of(26, ctx5)
    ) == Norm.from_valuation(5, 2)
    # far points are close to oo
    assert chordal(ProjPoint.of(Fraction(1, 625), ctx5), inf) == Norm.from_valuation(
        5, 4
    )
    assert chordal(ProjPoint.of(625, ctx5), inf) == Norm.from_valuation(5, 0)


def test_reduction_of_scalars_and_points(ctx5):
    assert reduce_scalar(Fraction(1, 2), 5) == 3
    assert reduce_scalar(Fraction(1, 5), 5) is oo
    assert reduce_point(ProjPoint.of(Fraction(1, 5), ctx5)) is oo
    assert reduce_point(ProjPoint.of(7, ctx5)) == 2


@pytest.mark.parametrize(
    "text,a,b",
    [
        ("3/4", Fraction(3, 4), 0),
        ("sqrt(5)", 0, 1),
        ("-2/3*sqrt(5)", 0, Fraction(-2, 3)),
        ("1/5 + 2*sqrt(5)", Fraction(1, 5), 2),
        ("7 - sqrt(5)", 7, -1),
    ],
)
def test_parse_element_roundtrip(ctx5, text, a, b):
    x = parse_element(text, ctx5)
    assert (x.a, x.b) == (a, b)
    assert parse_element(format_element(x), ctx5) == x


def test_parse_errors():
    for bad in ("", "1/0", "abc", "1.5"):
        with pytest.raises(ParseError):
            parse_rational(bad)
    with pytest.raises(ParseError):
        parse_halfint("1/3")
    with pytest.raises(ParseError):
        parse_element("sqrt(7)", FieldContext(5))


def test_format_point():
    assert format_point(oo) == "oo"
    assert format_point(Fraction(-1, 2)) == "-1/2"
