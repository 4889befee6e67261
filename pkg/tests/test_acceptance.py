"""Acceptance criteria 1-9, all at exact (zero) tolerance.

Each test prints one ``ACCEPTANCE <n> ... PASS|FAIL`` line to the terminal,
so ``pytest tests/test_acceptance.py -v`` doubles as the acceptance report.
"""

from fractions import Fraction

import pytest

from padic_herman.builtin import GEO, map_R, map_R_phi, reproduce
from padic_herman.geometry import Region, disk_image, sample_region, verify_siegel_cycle
from padic_herman.herman import (
    HermanCycle,
    HermanParams,
    ScaledFrame,
    build_herman_cycle,
    construct_q,
    scaled_reduction_degree,
    verify_herman_cycle,
)
from padic_herman.padic import FieldContext, oo, vp
from padic_herman.poly import Poly
from padic_herman.ratmap import (
    CycleClass,
    RationalMap,
    multiplier,
    periodic_points,
    reduction_report,
)
from padic_herman.selftest import run_selftest


@pytest.fixture
def announce(request, capsys):
    def _line(n: int, label: str, ok: bool, detail: str = ""):
        with capsys.disabled():
            print(
                f"\nACCEPTANCE {n} {label}: {'PASS' if ok else 'FAIL'}{' -- ' + detail if detail else ''}"
            )
        assert ok, detail

    return _line


def _phi_cycle():
    sc = verify_siegel_cycle(
        map_R_phi(), [Region.disk(0, 1, GEO), Region.disk(1, 0, GEO)], 32, 0
    )
    return sc


def test_criterion_1_reduction(announce):
    rep = reduction_report(map_R())
    rep_phi = reduction_report(map_R_phi())
    ok = rep.pair_string() == "[-XY, 0]" and not rep.good and not rep_phi.good
    announce(
        1,
        "reduction",
        ok,
        f"R pair {rep.pair_string()}, good={rep.good}; R_phi good={rep_phi.good}",
    )


def test_criterion_2_classification(announce):
    R = map_R()
    lam0 = multiplier(R, [Fraction(0)])
    fixed = periodic_points(R, 1)
    cls0 = [o.cls for o in fixed.orbits if o.points == [Fraction(0)]]
    two = [
        o for o in periodic_points(R, 2).orbits if set(o.points) == {Fraction(1), oo}
    ]
    ok = (
        lam0 == Fraction(1, 5)
        and cls0 == [CycleClass.REPELLING]
        and len(two) == 1
        and two[0].cls == CycleClass.INDIFFERENT
        and two[0].multiplier == Fraction(-1, 2)
        and vp(two[0].multiplier, 5) == 0
    )
    announce(
        2,
        "classification",
        ok,
        f"lambda(0)={lam0}, 2-cycle multiplier {two[0].multiplier if two else None}",
    )


def test_criterion_3_siegel_cycles(announce):
    sc_R = verify_siegel_cycle(
        map_R(), [Region.disk(1, 0, GEO), Region.infinity(-1, GEO)], 32, 0
    )
    sc_phi = _phi_cycle()
    pairs = [sc.report.check("isometry").witnesses for sc in (sc_R, sc_phi)]
    ok = (
        sc_R.verified
        and sc_phi.verified
        and all(len(w) >= 32 and all(x["ok"] for x in w) for w in pairs)
    )
    announce(
        3,
        "siegel cycles",
        ok,
        f"{len(pairs[0])} + {len(pairs[1])} exact isometry pairs",
    )


def test_criterion_4_disk_image(announce):
    img = disk_image(map_R_phi(), Region.ball(0, 2, GEO))
    ok = img.region.same_set(
        Region.ball(1, 1, GEO)
    ) and img.t.as_fraction() == Fraction(1, 5)
    announce(4, "disk image", ok, f"{img.region} with t={img.t.as_fraction()}")


def test_criterion_5_example_1_construction(announce):
    R = map_R_phi()
    Q = construct_q(R, HermanParams(0, 25))
    expected = RationalMap(
        Poly([125, -30, 0, 5]), Poly([-25, 1]) * Poly([-5, 1]), FieldContext(5)
    )
    ok = Q.same_map(expected) and Q.degree == 3 == R.degree + 1
    announce(5, "construction example 1", ok, str(Q))


def test_criterion_6_scaled_reductions(announce):
    R = map_R_phi()
    Q = construct_q(R, HermanParams(0, 25))
    frame = ScaledFrame.from_regions(Region.disk(0, 2, GEO), Region.disk(1, 1, GEO))
    dR, dQ = scaled_reduction_degree(R, frame), scaled_reduction_degree(Q, frame)
    announce(
        6, "scaled reductions", dR == 1 and dQ == 2, f"deg R_* = {dR}, deg Q_* = {dQ}"
    )


def test_criterion_7_herman_cycle(announce):
    R = map_R_phi()
    params = HermanParams(0, 25)
    hc = build_herman_cycle(R, _phi_cycle(), params, GEO)
    rings_ok = hc.rings[0].same_set(Region.annulus(0, 2, 1, GEO)) and hc.rings[
        1
    ].same_set(Region.annulus(1, 1, 0, GEO))
    rep = verify_herman_cycle(hc.Q, hc, 32, 0)
    samples = sample_region(hc.rings[0], 32, 0)
    ramified = all(vp(w, 5) == Fraction(3, 2) and w.b for w in samples)
    wide = HermanCycle(hc.Q, [Region.annulus(0, 3, 1, GEO), hc.rings[1]], params)
    mx = verify_herman_cycle(hc.Q, wide, 32, 0).check("maximality")
    negative = not mx.passed and mx.note.startswith("pole-inside")
    ok = rings_ok and rep.passed and ramified and negative
    announce(7, "herman cycle", ok, f"verified={rep.passed}, widened ring: {mx.note}")


def test_criterion_8_example_2(announce):
    R = map_R_phi()
    hc = build_herman_cycle(R, _phi_cycle(), HermanParams(125, 25), GEO)
    rep = verify_herman_cycle(hc.Q, hc, 32, 0)
    result = reproduce(2)
    flagged = any(n.startswith("reference-discrepancy") for n in result.notes)
    ok = (
        hc.Q.degree == 3
        and hc.Q(125) == 651
        and rep.passed
        and result.passed
        and flagged
    )
    announce(8, "construction example 2", ok, f"Q = {hc.Q}, Q(125) = {hc.Q(125)}")


def test_criterion_9_property_suites(announce):
    rep = run_selftest(0)
    counts = {c.name: c.inputs["instances"] for c in rep.checks}
    expected = [1000, 100, 100, 50, 50]
    ok = rep.passed and list(counts.values()) == expected
    announce(
        9, "property suites", ok, ", ".join(f"{k}: {v}" for k, v in counts.items())
    )
