"""Property tests driven by hypothesis, complementing the seeded selftest suites."""

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from padic_herman.errors import CommonFactorError
from padic_herman.padic import (
    INF,
    FieldContext,
    FieldElement,
    ProjPoint,
    chordal,
    format_element,
    parse_element,
    vp,
)
from padic_herman.poly import Poly, newton_polygon, resultant
from padic_herman.ratmap import RationalMap, reduction_report
from padic_herman.selftest import run_selftest

GEO = FieldContext(5, 2)

rationals = st.builds(
    lambda n, d, e: Fraction(n, d) * Fraction(5) ** e,
    st.integers(-200, 200),
    st.integers(1, 60),
    st.integers(-4, 4),
)
elements = st.builds(lambda a, b: FieldElement(a, b, GEO), rationals, rationals)


@given(elements, elements)
def test_strong_triangle_inequality(x, y):
    vx, vy = x.valuation(), y.valuation()
    assert (x + y).valuation() >= min(vx, vy)
    if vx != vy:
        assert (x + y).valuation() == min(vx, vy)


@given(elements, elements)
def test_valuation_is_multiplicative(x, y):
    v = (x * y).valuation()
    if INF in (x.valuation(), y.valuation()):
        assert v == INF
    else:
        assert v == x.valuation() + y.valuation()


@given(elements, elements, elements)
def test_chordal_distance_is_ultrametric(x, y, w):
    P, Q, S = (ProjPoint.of(t, GEO) for t in (x, y, w))
    assert chordal(P, S) <= max(chordal(P, Q), chordal(Q, S))


@given(elements)
def test_format_parse_roundtrip(x):
    assert parse_element(format_element(x), GEO) == x


@given(st.lists(rationals.filter(bool), min_size=1, max_size=6), rationals.filter(bool))
def test_newton_polygon_matches_root_valuations(roots, lead):
    f = Poly.from_roots(roots, lead=lead)
    assert sorted(newton_polygon(f, 5).root_valuations()) == sorted(
        vp(r, 5) for r in roots
    )


@settings(max_examples=60)
@given(
    st.lists(st.integers(-30, 30), min_size=1, max_size=4),
    st.lists(st.integers(-30, 30), min_size=1, max_size=4),
    st.integers(-1, 1),
)
def test_good_reduction_iff_unit_resultant(num, den, shift):
    f = Poly(num) * Fraction(5) ** shift
    g = Poly(den)
    if not f or not g or max(f.degree, g.degree) < 1:
        return
    try:
        R = RationalMap(f, g, FieldContext(5))
    except CommonFactorError:
        return
    F, G = R.homogeneous()
    unit = vp(resultant(Poly(F), Poly(G), R.degree, R.degree), 5) == 0
    assert reduction_report(R).good == unit


def test_selftest_suites_pass_for_several_seeds():
    for seed in (0, 11):
        rep = run_selftest(seed)
        assert rep.passed, rep.render_text()
