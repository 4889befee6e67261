from fractions import Fraction

import pytest
import sympy

from padic_herman.errors import CommonFactorError, NotPeriodicError
from padic_herman.padic import FieldContext, oo
from padic_herman.poly import Poly
from padic_herman.ratmap import (
    CycleClass,
    RationalMap,
    classify,
    compose_symbolic,
    conjugate,
    iterate,
    multiplier,
    periodic_points,
    reduction_report,
)

z = sympy.Symbol("z")
CTX = FieldContext(5)


@pytest.fixture
def R():
    return RationalMap.from_strings(["0", "-1/5", "1"], ["-1", "0", "1"], 5)


@pytest.fixture
def R_phi():
    return RationalMap.from_strings(["5", "0", "-5"], ["5", "-1"], 5)


def sym(R):
    f = sum(
        sympy.Rational(c.numerator, c.denominator) * z**i
        for i, c in enumerate(R.f.coeffs)
    )
    g = sum(
        sympy.Rational(c.numerator, c.denominator) * z**i
        for i, c in enumerate(R.g.coeffs)
    )
    return f / g


def test_common_factor_rejected():
    with pytest.raises(CommonFactorError) as exc:
        RationalMap(Poly([-1, 0, 1]), Poly([1, 1]), CTX)
    assert exc.value.factor == Poly([1, 1])


def test_evaluation_including_infinity(R, R_phi):
    assert R(0) == 0
    assert R(1) is oo
    assert R(oo) == 1
    assert R_phi(5) is oo
    assert R_phi(oo) is oo
    assert R_phi(125) == 651
    assert iterate(R_phi, 125, 2) == R_phi(651) == Fraction(1059500, 323)


def test_reduction_of_base_map(R):
    rep = reduction_report(R)
    assert rep.pair_string() == "[-XY, 0]"
    assert not rep.good
    assert rep.induced_degree == 0
    assert rep.resultant_agrees and rep.resultant_valuation > 0


def test_reduction_of_conjugate_is_bad(R_phi):
    assert not reduction_report(R_phi).good


def test_good_reduction_examples():
    sq = RationalMap.from_strings(["0", "0", "1"], ["1"], 5)
    rep = reduction_report(sq)
    assert rep.good and rep.resultant_valuation == 0
    # (z^2 + 5)/(5z): the denominator vanishes mod 5
    M = RationalMap(Poly([5, 0, 1]), Poly([0, 5]), CTX)
    rep = reduction_report(M)
    assert rep.induced_degree == 0 < M.degree
    assert not rep.good


def test_multiplier_oracle_by_sympy_derivative(R):
    expr = sym(R)
    assert multiplier(R, [Fraction(0)]) == Fraction(str(sympy.diff(expr, z).subs(z, 0)))
    # {1, oo}: use w = 1/z at oo; lambda = (R o R)'(1) computed through the chart
    w = sympy.Symbol("w")
    at_oo = sympy.diff(expr.subs(z, 1 / w), w)  # R(1/w) near w = 0
    to_oo = sympy.diff(1 / expr, z)  # 1/R(z) near z = 1
    lam = sympy.limit(at_oo, w, 0) * sympy.limit(to_oo, z, 1)
    assert multiplier(R, [Fraction(1), oo]) == Fraction(str(lam)) == Fraction(-1, 2)


def test_multiplier_rejects_non_orbit(R):
    with pytest.raises(NotPeriodicError):
        multiplier(R, [Fraction(2)])


def test_classification():
    assert classify(Fraction(1, 5), 5) == CycleClass.REPELLING
    assert classify(Fraction(-1, 2), 5) == CycleClass.INDIFFERENT
    assert classify(Fraction(5), 5) == CycleClass.ATTRACTING
    assert classify(0, 5) == CycleClass.SUPER_ATTRACTING


def test_conjugation_by_inversion(R, R_phi):
    assert conjugate(R, 0, 1, 1, 0) == R_phi
    assert multiplier(R_phi, [Fraction(0), Fraction(1)]) == Fraction(-1, 2)


def test_compose_symbolic_matches_sympy(R_phi):
    R2 = compose_symbolic(R_phi, 2)
    expr = sympy.cancel(sym(R_phi).subs(z, sym(R_phi)))
    assert sympy.cancel(sym(R2) - expr) == 0
    assert R2.degree == 4


def test_periodic_points_of_base_map(R):
    fixed = periodic_points(R, 1)
    assert [(o.points, o.cls) for o in fixed.orbits] == [
        ([Fraction(0)], CycleClass.REPELLING)
    ]
    # the two other fixed points are certified with valuation -1/2
    assert [(c.valuation, c.count) for c in fixed.certificates] == [
        (Fraction(-1, 2), 2)
    ]
    two = periodic_points(R, 2)
    cyc = [o for o in two.orbits if set(o.points) == {Fraction(1), oo}]
    assert len(cyc) == 1
    assert cyc[0].multiplier == Fraction(-1, 2)
    assert cyc[0].cls == CycleClass.INDIFFERENT


def test_periodic_points_of_z_squared():
    sq = RationalMap.from_strings(["0", "0", "1"], ["1"], 5)
    fixed = {str(o.points[0]): o.cls for o in periodic_points(sq, 1).orbits}
    assert fixed == {
        "0": CycleClass.SUPER_ATTRACTING,
        "oo": CycleClass.SUPER_ATTRACTING,
        "1": CycleClass.INDIFFERENT,
    }
    # period 2: roots of z^2+z+1, i.e. primitive cube roots of unity; none lie in Q_5
    two = periodic_points(sq, 2)
    assert not two.orbits
