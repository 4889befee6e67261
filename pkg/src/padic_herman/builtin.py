"""Built-in worked examples over C_5 and the pipelines that reproduce them.

Base map ``R(z) = (z^2 - z/5)/(z^2 - 1)``, its conjugate by ``1/z``
``R_phi(z) = (5 - 5z^2)/(5 - z)``, and two Herman constructions from the
2-cycle of Siegel disks ``{D_{1/5}(0), D_1(1)}`` of ``R_phi``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DiskImageError, PadicHermanError
from .geometry import (
    Region,
    disk_image,
    format_region,
    verify_siegel_cycle,
)
from .herman import (
    HermanCycle,
    HermanParams,
    ScaledFrame,
    build_herman_cycle,
    inner_ball_images,
    reduced_scaled_pair,
    rq_proximity_check,
    scaled_reduction_degree,
    verify_grl_hypotheses,
    verify_herman_cycle,
)
from .padic import FieldContext, format_element, format_point, oo
from .poly import Poly, rational_roots
from .ratmap import (
    CycleClass,
    RationalMap,
    conjugate,
    multiplier,
    periodic_points,
    reduction_report,
)
from .report import CheckRecord, VerificationReport

P = 5
CTX = FieldContext(P)
GEO = FieldContext(P, 2)

MAP_R = {"p": 5, "num": ["0", "-1/5", "1"], "den": ["-1", "0", "1"]}
MAP_R_PHI = {"p": 5, "num": ["5", "0", "-5"], "den": ["5", "-1"]}

# closed forms quoted for comparison
Q1_REFERENCE = (Poly([125, -30, 0, 5]), Poly([125, -30, 1]))
Q2_REFERENCE = (Poly([-308600, 83974, -1276, 5]), Poly([150, -1]))
Q2_REFERENCE_TEXT = "(5z^3-1276z^2+83974z-308600)/(150-z)"
R_PHI_125_QUOTED = 615


def map_R() -> RationalMap:
    return RationalMap(Poly([0, Fraction(-1, 5), 1]), Poly([-1, 0, 1]), CTX)


def map_R_phi() -> RationalMap:
    return RationalMap(Poly([5, 0, -5]), Poly([5, -1]), CTX)


def siegel_disks_R() -> list:
    return [Region.disk(1, 0, GEO), Region.infinity(-1, GEO)]


def siegel_disks_R_phi() -> list:
    return [Region.disk(0, 1, GEO), Region.disk(1, 0, GEO)]


def params_example(example: int) -> HermanParams:
    if example == 1:
        return HermanParams(0, 25)
    if example == 2:
        return HermanParams(125, 25)
    raise ValueError(f"unknown example {example!r}")


def expected_rings() -> list:
    return [Region.annulus(0, 2, 1, GEO), Region.annulus(1, 1, 0, GEO)]


@dataclass
class PipelineResult:
    sections: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.sections)


def _expect(report: VerificationReport, name: str, ok: bool, note: str = "", **inputs):
    report.add(
        CheckRecord(name, bool(ok), {k: str(v) for k, v in inputs.items()}, [], note)
    )


def general_setting(samples: int = 32, seed: int = 0) -> tuple:
    R, Rphi = map_R(), map_R_phi()
    rep = VerificationReport("base map and its conjugate", seed=seed)
    red = reduction_report(R)
    _expect(
        rep,
        "R reduction",
        red.pair_string() == "[-XY, 0]" and not red.good,
        pair=red.pair_string(),
        good=red.good,
    )
    _expect(
        rep,
        "R reduction vs resultant",
        red.resultant_agrees,
        resultant_valuation=red.resultant_valuation,
    )
    lam0 = multiplier(R, [Fraction(0)])
    _expect(rep, "multiplier at 0", lam0 == Fraction(1, 5), multiplier=lam0)
    pp1 = periodic_points(R, 1)
    cls0 = {format_point(o.points[0]): o.cls for o in pp1.orbits}
    _expect(
        rep,
        "fixed point 0 repelling",
        cls0.get("0") == CycleClass.REPELLING,
        classes=sorted(f"{k}:{v}" for k, v in cls0.items()),
    )
    pp2 = periodic_points(R, 2)
    two = [o for o in pp2.orbits if {format_point(z) for z in o.points} == {"1", "oo"}]
    ok2 = (
        len(two) == 1
        and two[0].cls == CycleClass.INDIFFERENT
        and two[0].multiplier == Fraction(-1, 2)
    )
    _expect(
        rep,
        "2-cycle {1, oo} indifferent",
        ok2,
        multiplier=two[0].multiplier if two else None,
        cls=two[0].cls if two else None,
    )
    Rc = conjugate(R, 0, 1, 1, 0)
    _expect(rep, "conjugate by 1/z", Rc.same_map(Rphi), conjugate=Rc, expected=Rphi)
    red_phi = reduction_report(Rphi)
    _expect(
        rep,
        "R_phi reduction",
        not red_phi.good,
        pair=red_phi.pair_string(),
        good=red_phi.good,
    )
    lam_phi = multiplier(Rphi, [Fraction(0), Fraction(1)])
    _expect(
        rep,
        "R_phi 2-cycle {0, 1} multiplier",
        lam_phi == Fraction(-1, 2),
        multiplier=lam_phi,
    )
    _expect(
        rep,
        "R_phi(125), R_phi(0)",
        Rphi(125) == 651 and Rphi(0) == 1,
        R_phi_125=Rphi(125),
        R_phi_0=Rphi(0),
    )

    sc_R = verify_siegel_cycle(R, siegel_disks_R(), samples, seed)
    sc_phi = verify_siegel_cycle(Rphi, siegel_disks_R_phi(), samples, seed)
    data = {
        "reduction_R": red.pair_string(),
        "reduction_R_phi": red_phi.pair_string(),
        "multiplier_0": format_element(lam0),
        "multiplier_1_oo": format_element(two[0].multiplier) if two else None,
    }
    return rep, sc_R, sc_phi, data


def _herman_sections(
    example: int, samples: int, seed: int, sc_phi, result: PipelineResult
):
    Rphi = map_R_phi()
    params = params_example(example)
    z0 = params.z0

    hyp = verify_grl_hypotheses(Rphi, sc_phi, params)
    result.sections.append(hyp)

    con = VerificationReport(
        f"construction (z0={format_element(z0)}, mu={format_element(params.mu)})"
    )
    hc = build_herman_cycle(Rphi, sc_phi, params, GEO)
    Q = hc.Q
    result.data["Q"] = str(Q)
    result.data["Q_degree"] = Q.degree
    _expect(con, "deg Q = deg R + 1", Q.degree == Rphi.degree + 1, degree=Q.degree)
    _expect(con, "Q(z0) = R(z0)", Q(z0) == Rphi(z0), Q_z0=Q(z0), R_z0=Rphi(z0))
    if example == 1:
        ref = RationalMap(*Q1_REFERENCE, CTX)
        _expect(con, "Q matches (5z^3-30z+125)/((z-25)(z-5))", Q.same_map(ref), Q=Q)
    else:
        poles = sorted(rational_roots(Q.g))
        _expect(con, "poles of Q", poles == [5, 150], poles=[str(x) for x in poles])
        _expect(con, "Q(125) = 651", Q(125) == 651, Q_125=Q(125))
        ref = RationalMap(*Q2_REFERENCE, CTX)
        matches = Q.same_map(ref)
        result.data["reference_Q"] = Q2_REFERENCE_TEXT
        result.data["reference_Q_matches"] = matches
        result.data["reference_Q_at_125"] = str(ref(125))
        if not matches:
            result.notes.append(
                f"reference-discrepancy: the quoted closed form {Q2_REFERENCE_TEXT} is not the "
                f"expansion of the construction with z0=125, mu=25; derived Q = {Q} "
                f"(the quoted form also takes the value {ref(125)} at z=125 but has degree-1 "
                f"denominator)"
            )
        if Rphi(125) != R_PHI_125_QUOTED:
            result.notes.append(
                f"reference-discrepancy: quoted value R_phi(125)={R_PHI_125_QUOTED}; direct "
                f"evaluation gives {Rphi(125)}, and the quoted follow-up value 3280 60/323 equals "
                f"R_phi(651) = {Rphi(651)}"
            )
        result.notes.append(
            "reference-discrepancy: D_0 quoted as D_{1/25}(125) conflicts with r = 1/25 < rho_0; "
            "the construction uses D_0 = D_{1/5}(0), whose rings coincide with the quoted rings"
        )
    result.sections.append(con)

    img = VerificationReport("disk images")
    try:
        di = disk_image(
            Rphi, Region.ball(z0, 2, GEO), samples=max(8, samples // 4), seed=seed
        )
        ok = di.region.same_set(Region.ball(1, 1, GEO)) and di.t.exp == -1
        _expect(
            img,
            "R_phi(B_{1/25}(z0)) = B_{1/5}(1)",
            ok,
            image=format_region(di.region),
            t=di.t,
        )
    except DiskImageError as exc:
        _expect(img, "R_phi(B_{1/25}(z0)) = B_{1/5}(1)", False, error=exc)
    balls = inner_ball_images(Rphi, sc_phi, params, GEO)
    for j, (B, A) in enumerate(zip(balls, hc.rings)):
        _expect(
            img,
            f"inner radius of ring {j}",
            B.radius_exp == A.inner_exp,
            ball=format_region(B),
            ring=format_region(A),
        )
    result.sections.append(img)

    scaled = VerificationReport("scaled reductions")
    frame = ScaledFrame.from_regions(
        Region.disk(z0, 2, GEO), Region.disk(Rphi(z0), 1, GEO)
    )
    try:
        dR = scaled_reduction_degree(Rphi, frame, seed=seed)
        dQ = scaled_reduction_degree(Q, frame, seed=seed)
    except PadicHermanError as exc:
        dR = dQ = None
        _expect(scaled, "scaled reduction", False, error=exc)
    _expect(scaled, "deg reduced R_* = 1", dR == 1, degree=dR)
    _expect(scaled, "deg reduced Q_* = 2", dQ == 2, degree=dQ)
    if dQ is not None:
        num, den = reduced_scaled_pair(Q, frame)
        result.data["reduced_Q_star"] = {"num": num, "den": den}
    result.sections.append(scaled)

    result.sections.append(
        rq_proximity_check(Rphi, Q, sc_phi, params, GEO, samples, seed)
    )

    herman = verify_herman_cycle(Q, hc, samples, seed)
    for j, (A, B) in enumerate(zip(hc.rings, expected_rings())):
        herman.add(
            CheckRecord(
                f"ring[{j}] = {format_region(B)}",
                A.same_set(B),
                {"ring": format_region(A)},
            )
        )
    result.sections.append(herman)
    result.data["rings"] = [format_region(A) for A in hc.rings]

    if example == 1:
        wide = HermanCycle(Q, [Region.annulus(0, 3, 1, GEO), hc.rings[1]], params)
        wrep = verify_herman_cycle(Q, wide, samples, seed)
        mx = wrep.check("maximality")
        neg = VerificationReport("widened ring A_{1/125}^{1/5}(0) is rejected")
        neg.add(
            CheckRecord(
                "widened ring fails",
                not wrep.passed and not mx.passed and mx.witnesses[0]["inside_ring"],
                {"failed_checks": ", ".join(c.name for c in wrep.failures())},
                mx.witnesses,
                mx.note,
            )
        )
        result.sections.append(neg)
    return Q


def reproduce(example: int, samples: int = 32, seed: int = 0) -> PipelineResult:
    if example not in (1, 2):
        raise ValueError(f"unknown example {example!r}; choose 1 or 2")
    result = PipelineResult()
    base, sc_R, sc_phi, data = general_setting(samples, seed)
    result.sections.append(base)
    result.sections.append(sc_R.report)
    result.sections.append(sc_phi.report)
    result.data.update(data)
    if not sc_phi.verified:
        return result
    _herman_sections(example, samples, seed, sc_phi, result)
    return result


__all__ = [
    "GEO",
    "MAP_R",
    "MAP_R_PHI",
    "PipelineResult",
    "expected_rings",
    "general_setting",
    "map_R",
    "map_R_phi",
    "oo",
    "params_example",
    "reproduce",
    "siegel_disks_R",
    "siegel_disks_R_phi",
]
