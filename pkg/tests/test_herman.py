from fractions import Fraction

import pytest
import sympy

from padic_herman.errors import ConstructionError
from padic_herman.geometry import Region, verify_siegel_cycle
from padic_herman.herman import (
    HermanCycle,
    HermanParams,
    ScaledFrame,
    build_herman_cycle,
    construct_q,
    herman_rings,
    reduced_scaled_pair,
    rq_proximity_check,
    scaled_reduction_degree,
    verify_grl_hypotheses,
    verify_herman_cycle,
)
from padic_herman.padic import FieldContext, vp
from padic_herman.poly import rational_roots
from padic_herman.ratmap import RationalMap

GEO = FieldContext(5, 2)
z = sympy.Symbol("z")
R_PHI_EXPR = (5 - 5 * z**2) / (5 - z)


@pytest.fixture
def R_phi():
    return RationalMap.from_strings(["5", "0", "-5"], ["5", "-1"], 5)


@pytest.fixture
def cycle(R_phi):
    sc = verify_siegel_cycle(
        R_phi, [Region.disk(0, 1, GEO), Region.disk(1, 0, GEO)], 32, 0
    )
    assert sc.verified
    return sc


def q_oracle(z0, mu):
    """Q = (z - z0)/(z - z0 - mu) * (R(z) - R(z0)) + R(z0), simplified by sympy."""
    R0 = R_PHI_EXPR.subs(z, z0)
    return sympy.cancel((z - z0) / (z - z0 - mu) * (R_PHI_EXPR - R0) + R0)


def as_sympy(M):
    f = sum(
        sympy.Rational(c.numerator, c.denominator) * z**i
        for i, c in enumerate(M.f.coeffs)
    )
    g = sum(
        sympy.Rational(c.numerator, c.denominator) * z**i
        for i, c in enumerate(M.g.coeffs)
    )
    return f / g


def test_example_1_q_matches_closed_form(R_phi):
    Q = construct_q(R_phi, HermanParams(0, 25))
    assert sympy.cancel(as_sympy(Q) - q_oracle(0, 25)) == 0
    closed = (5 * z**3 - 30 * z + 125) / ((z - 25) * (z - 5))
    assert sympy.cancel(as_sympy(Q) - closed) == 0
    assert Q.degree == 3 == R_phi.degree + 1
    # canonical form: primitive integers, positive leading denominator
    assert [int(c) for c in Q.f.coeffs] == [125, -30, 0, 5]
    assert [int(c) for c in Q.g.coeffs] == [125, -30, 1]


def test_example_2_q(R_phi):
    Q = construct_q(R_phi, HermanParams(125, 25))
    assert sympy.cancel(as_sympy(Q) - q_oracle(125, 25)) == 0
    assert Q.degree == 3
    assert Q(125) == 651 == R_phi(125)
    assert rational_roots(Q.g) == [5, 150]
    # the closed form quoted for this example is a different map
    quoted = (5 * z**3 - 1276 * z**2 + 83974 * z - 308600) / (150 - z)
    assert sympy.cancel(as_sympy(Q) - quoted) != 0
    assert quoted.subs(z, 125) == 651


def test_zero_mu_is_rejected(R_phi):
    with pytest.raises((ConstructionError, ValueError)):
        construct_q(R_phi, HermanParams(0, 0))


def test_hypotheses(R_phi, cycle):
    rep = verify_grl_hypotheses(R_phi, cycle, HermanParams(0, 25))
    assert rep.passed
    assert rep.check("distances").note == "vacuous for n <= 2"
    params = HermanParams(125, 25)
    assert verify_grl_hypotheses(R_phi, cycle, params).passed
    assert params.returning
    big = verify_grl_hypotheses(R_phi, cycle, HermanParams(0, Fraction(1, 5)))
    assert not big.check("mu-radius").passed
    off = verify_grl_hypotheses(R_phi, cycle, HermanParams(2, 25))
    assert not off.check("base-point").passed


def test_params_record():
    params = HermanParams(125, 25)
    assert params.to_record() == {"z0": "125", "mu": "25"}
    assert params.r_exp(5) == 2


def test_rings_and_inner_radii(R_phi, cycle):
    hc = build_herman_cycle(R_phi, cycle, HermanParams(0, 25), GEO)
    assert hc.rings[0].same_set(Region.annulus(0, 2, 1, GEO))
    assert hc.rings[1].same_set(Region.annulus(1, 1, 0, GEO))


def test_scaled_reductions(R_phi):
    Q = construct_q(R_phi, HermanParams(0, 25))
    frame = ScaledFrame.from_regions(Region.disk(0, 2, GEO), Region.disk(1, 1, GEO))
    assert scaled_reduction_degree(R_phi, frame) == 1
    assert scaled_reduction_degree(Q, frame) == 2
    num, den = reduced_scaled_pair(Q, frame)
    # reduced Q_*(w) = -w^2/(1 - w) over F_5
    assert (list(num), list(den)) == ([0, 0, 4], [1, 4])


def test_proximity(R_phi, cycle):
    for z0 in (0, 125):
        params = HermanParams(z0, 25)
        Q = construct_q(R_phi, params)
        rep = rq_proximity_check(R_phi, Q, cycle, params, GEO, 16, 0)
        assert rep.passed, rep.render_text()
    # direct check of |Q - R| = r rho_1/rho_0 on the ring around 0
    Q = construct_q(R_phi, HermanParams(0, 25))
    for w in (GEO.sqrt_p() ** 3, GEO.sqrt_p() ** 3 * 2 + 125):
        assert vp(Q(w) - R_phi(w), 5) == 2 - 1


def test_herman_cycles_verify(R_phi, cycle):
    for z0 in (0, 125):
        hc = build_herman_cycle(R_phi, cycle, HermanParams(z0, 25), GEO)
        rep = verify_herman_cycle(hc.Q, hc, 32, 0)
        assert rep.passed and hc.verified, rep.render_text()


def test_widened_ring_reports_pole_inside(R_phi, cycle):
    params = HermanParams(0, 25)
    Q = construct_q(R_phi, params)
    wide = HermanCycle(
        Q, [Region.annulus(0, 3, 1, GEO), Region.annulus(1, 1, 0, GEO)], params
    )
    rep = verify_herman_cycle(Q, wide, 32, 0)
    mx = rep.check("maximality")
    assert not rep.passed and not mx.passed
    assert mx.note.startswith("pole-inside")
    assert mx.witnesses[0]["pole"] == "25" and mx.witnesses[0]["inside_ring"]


def test_herman_rings_from_regions(R_phi, cycle):
    params = HermanParams(0, 25)
    Q = construct_q(R_phi, params)
    hc = herman_rings(R_phi, Q, cycle, params, GEO)
    assert [A.inner_exp for A in hc.rings] == [2, 1]
