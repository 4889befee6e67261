"""Turning a cycle of Siegel disks into a cycle of 1-Herman rings.

Given ``R`` with a verified Siegel cycle ``D_0 -> ... -> D_{n-1}``, a base
point ``z0`` in ``D_0`` and ``mu`` with ``|mu| = r < rho_0``, the map

    Q(z) = (z - z0)/(z - z0 - mu) * (R(z) - R(z0)) + R(z0)

has degree ``deg R + 1`` and the rings ``D_j - R^j(B_r(z0))`` form an
n-cycle for ``Q``.  Everything here is checked with exact valuations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    ConstructionError,
    ScaledReductionError,
)
from .geometry import (
    DISK,
    Region,
    SiegelCycle,
    disk_dist,
    disk_image,
    format_region,
    region_contains,
    sample_region,
    verify_isometry,
)
from .padic import (
    INF,
    FieldContext,
    FieldElement,
    Norm,
    element_of_valuation,
    format_element,
    format_halfint,
    format_norm,
    format_point,
    oo,
    vp,
)
from .poly import Poly, fp_gcd, fp_trim, rational_roots, reduce_coeff
from .ratmap import RationalMap, induced_degree, iterate
from .report import CheckRecord, VerificationReport


@dataclass
class HermanParams:
    z0: Fraction
    mu: Fraction
    returning: bool = False  # z0 only returns to D_0 under R^n (not periodic)

    def __post_init__(self):
        for name in ("z0", "mu"):
            val = getattr(self, name)
            if isinstance(val, FieldElement):
                if not val.is_rational():
                    raise ConstructionError(f"{name} must be rational, got {val}")
                val = val.a
            setattr(self, name, Fraction(val))

    def r_exp(self, p: int):
        """Exponent ``k`` with ``r = |mu| = p**(-k)``."""
        return vp(self.mu, p)

    def r(self, p: int) -> Norm:
        return Norm.from_valuation(p, self.r_exp(p))

    def to_record(self) -> dict:
        return {"z0": format_element(self.z0), "mu": format_element(self.mu)}


def _finite_disks(cycle: SiegelCycle):
    for D in cycle.disks:
        if D.kind != DISK:
            raise ConstructionError(
                f"{format_region(D)} is not a finite disk; change coordinates first"
            )


def verify_grl_hypotheses(
    R: RationalMap, cycle: SiegelCycle, params: HermanParams
) -> VerificationReport:
    p = R.p
    report = VerificationReport("construction hypotheses")
    disks = cycle.disks
    n = len(disks)
    k_r = params.r_exp(p)
    k0 = disks[0].radius_exp

    ok_a = k_r != INF and k_r > k0
    report.add(
        CheckRecord(
            "mu-radius",
            ok_a,
            {"mu": format_element(params.mu), "rho_0": format_norm(disks[0].radius)},
            [{"v(mu)": format_halfint(k_r), "v(rho_0)": format_halfint(k0)}],
            "" if ok_a else "need |mu| = r < rho_0",
        )
    )

    z0 = params.z0
    in_d0 = region_contains(disks[0], z0)
    zn = iterate(R, z0, n)
    periodic = zn is not oo and zn == z0
    returns = zn is not oo and region_contains(disks[0], zn)
    params.returning = returns and not periodic
    report.add(
        CheckRecord(
            "base-point",
            in_d0 and (periodic or returns),
            {"z0": format_element(z0)},
            [
                {
                    "z0_in_D0": in_d0,
                    f"R^{n}(z0)": format_point(zn),
                    "periodic": periodic,
                    "returns_to_D0": returns,
                }
            ],
            "returning (non-periodic) base point" if params.returning else "",
        )
    )

    wit = []
    ok_c = True
    if n > 2:
        for j in range(1, n):
            d0j = disk_dist(disks[0], disks[j])
            d1j = disk_dist(disks[1], disks[(j + 1) % n])
            same = d0j == d1j
            ok_c &= same
            wit.append(
                {
                    "j": j,
                    "dist(D0,Dj)": format_norm(d0j),
                    "dist(D1,Dj+1)": format_norm(d1j),
                }
            )
    report.add(
        CheckRecord(
            "distances", ok_c, {"n": n}, wit, "vacuous for n <= 2" if n <= 2 else ""
        )
    )

    bad = [j for j, D in enumerate(disks) if D.radius < disks[0].radius]
    report.add(CheckRecord("rho0-minimal", not bad, {}, [{"j": j} for j in bad]))
    return report


def construct_q(R: RationalMap, params: HermanParams) -> RationalMap:
    """Expand ``Q`` symbolically over Q and check ``deg Q = deg R + 1``."""
    if not params.mu:
        raise ConstructionError("mu = 0: the Mobius factor collapses and Q = R")
    z0, mu = params.z0, params.mu
    R0 = R(z0)
    if R0 is oo:
        raise ConstructionError(f"z0 = {format_element(z0)} is a pole of R")
    if not (R.f.is_rational() and R.g.is_rational()):
        raise ConstructionError("construction needs a map with rational coefficients")
    f, g = R.f, R.g
    lin = Poly([-z0, 1])
    shifted = Poly([-z0 - mu, 1])
    num = lin * (f - g * R0) + g * shifted * R0
    den = g * shifted
    Q = RationalMap.from_fraction(num, den, R.ctx).canonical()
    if Q.degree != R.degree + 1:
        raise ConstructionError(
            f"internal inconsistency: deg Q = {Q.degree}, expected {R.degree + 1}; "
            f"numerator {num}, denominator {den}"
        )
    if Q(z0) != R0:
        raise ConstructionError(
            f"internal inconsistency: Q(z0) = {Q(z0)} != R(z0) = {R0}"
        )
    return Q


# -- rings ------------------------------------------------------------------


@dataclass
class HermanCycle:
    Q: RationalMap
    rings: list
    params: HermanParams
    report: VerificationReport | None = None
    verified: bool = False


def ring_exps(cycle: SiegelCycle, params: HermanParams, p: int):
    """(inner, outer) exponents of ``D_j - R^j(B_r(z0))``: radii ``r rho_j/rho_0`` and ``rho_j``."""
    k_r = params.r_exp(p)
    k0 = cycle.disks[0].radius_exp
    return [(k_r + D.radius_exp - k0, D.radius_exp) for D in cycle.disks]


def herman_rings(
    R: RationalMap,
    Q: RationalMap,
    cycle: SiegelCycle,
    params: HermanParams,
    ctx: FieldContext,
) -> HermanCycle:
    _finite_disks(cycle)
    rings = []
    z = params.z0
    for inner, outer in ring_exps(cycle, params, R.p):
        rings.append(Region.annulus(z, inner, outer, ctx))
        z = R(z)
    return HermanCycle(Q, rings, params)


def inner_ball_images(
    R: RationalMap,
    cycle: SiegelCycle,
    params: HermanParams,
    ctx: FieldContext,
    samples: int = 8,
) -> list:
    """``R^j(B_r(z0))`` computed by successive disk images (independent of the ring formula)."""
    B = Region.ball(params.z0, params.r_exp(R.p), ctx)
    out = [B]
    for _ in range(1, cycle.n):
        B = disk_image(R, B, samples=samples).region
        out.append(B)
    return out


def rq_proximity_check(
    R: RationalMap,
    Q: RationalMap,
    cycle: SiegelCycle,
    params: HermanParams,
    ctx: FieldContext,
    samples: int = 16,
    seed: int = 0,
) -> VerificationReport:
    """Exact ``|Q(z) - R(z)|`` on every ring against the bound ``r rho_{j+1}/rho_0``."""
    p = R.p
    report = VerificationReport("Q-R proximity", seed=seed)
    hc = herman_rings(R, Q, cycle, params, ctx)
    n = cycle.n
    k_r = params.r_exp(p)
    k = cycle.radius_exps
    identical = Q.same_map(R)
    for j, ring in enumerate(hc.rings):
        # |Q - R| = r rho_1/rho_0 on the first ring, = r on the others
        expected = k_r + k[1 % n] - k[0] if j == 0 else k_r
        bound = k_r + k[(j + 1) % n] - k[0]  # radius of B_{R(P_j)}
        eq_wit, bound_wit = [], []
        eq_ok = bound_ok = True
        for idx, z in enumerate(sample_region(ring, samples, seed + j)):
            qz, rz = Q(z), R(z)
            if qz is oo or rz is oo:
                bound_ok = eq_ok = False
                bound_wit.append({"index": idx, "z": format_point(z), "error": "pole"})
                continue
            v = vp(qz - rz, p)
            w = {"index": idx, "z": format_point(z), "v(Q-R)": format_halfint(v)}
            if v != expected:
                eq_ok = False
                eq_wit.append(w)
            if not v >= bound:
                bound_ok = False
                bound_wit.append(w)
        inputs = {
            "ring": format_region(ring),
            "expected": format_norm(Norm.from_valuation(p, expected)),
            "bound": format_norm(Norm.from_valuation(p, bound)),
        }
        if j > 0:
            # the strict form r < r rho_{j+1}/rho_0 degenerates to r < r at j = n-1
            inputs["strict_bound_holds"] = bool(k_r > bound)
        report.add(
            CheckRecord(
                f"equality[{j}]",
                eq_ok or identical,
                inputs,
                eq_wit,
                "vacuous: Q = R" if identical else "",
            )
        )
        report.add(CheckRecord(f"bound[{j}]", bound_ok, inputs, bound_wit))
    return report


# -- scaled reductions ------------------------------------------------------


@dataclass(frozen=True)
class ScaledFrame:
    ctx: FieldContext
    src_center: FieldElement
    src_exp: Fraction
    tgt_center: FieldElement
    tgt_exp: Fraction

    @classmethod
    def from_regions(cls, src: Region, tgt: Region) -> ScaledFrame:
        return cls(src.ctx, src.center, src.radius_exp, tgt.center, tgt.radius_exp)

    @property
    def src_scale(self):
        return _scale_element(self.ctx, self.src_exp)

    @property
    def tgt_scale(self):
        return _scale_element(self.ctx, self.tgt_exp)

    def psi_src(self, z):
        return (z - self.src_center) / self.src_scale

    def psi_tgt(self, z):
        return (z - self.tgt_center) / self.tgt_scale


def _scale_element(ctx, k):
    s = element_of_valuation(ctx, k)
    return s.a if s.is_rational() else s


def _simplify(c):
    if isinstance(c, FieldElement) and c.is_rational():
        return c.a
    return c


def scaled_map(M: RationalMap, frame: ScaledFrame):
    """``(f_*, g_*)`` with ``M_* = psi_t o M o psi_s^{-1}``, normalized."""
    s, c = frame.src_scale, _simplify(frame.src_center)
    inner = Poly([c, s])
    fs, gs = M.f.compose(inner), M.g.compose(inner)
    st, ct = frame.tgt_scale, _simplify(frame.tgt_center)
    num = fs - gs * ct
    den = gs * st
    num = Poly(_simplify(x) for x in num.coeffs)
    den = Poly(_simplify(x) for x in den.coeffs)
    p = frame.ctx.p
    m = min(num.min_valuation(p), den.min_valuation(p))
    if m != 0:
        e = element_of_valuation(
            frame.ctx.ramified() if Fraction(m).denominator != 1 else frame.ctx, -m
        )
        e = _simplify(e)
        num = Poly(_simplify(x * e) for x in num.coeffs)
        den = Poly(_simplify(x * e) for x in den.coeffs)
    return num, den


def _frame_precondition(M, frame: ScaledFrame, samples: int, seed: int):
    src = Region.disk(frame.src_center, frame.src_exp, frame.ctx)
    tgt = Region.disk(frame.tgt_center, frame.tgt_exp, frame.ctx)
    bad = []
    for z in [frame.src_center] + sample_region(src, samples, seed):
        w = M(z)
        if w is oo or not region_contains(tgt, w):
            bad.append({"z": format_point(z), "image": format_point(w)})
    return bad


def scaled_reduction_degree(
    M: RationalMap, frame: ScaledFrame, samples: int = 8, seed: int = 0
) -> int:
    """Degree of the reduction of ``psi_t o M o psi_s^{-1}`` after cancellation."""
    bad = _frame_precondition(M, frame, samples, seed)
    if bad:
        raise ScaledReductionError(
            f"map does not send the source disk into the target disk: {bad[0]}"
        )
    num, den = scaled_map(M, frame)
    p = frame.ctx.p
    nbar = fp_trim([reduce_coeff(x, p) for x in num.coeffs], p)
    dbar = fp_trim([reduce_coeff(x, p) for x in den.coeffs], p)
    if not nbar and not dbar:
        raise ScaledReductionError("reduction is identically 0/0")
    deg = induced_degree(nbar, dbar, p)
    if deg == 0:
        raise ScaledReductionError("scaled map has constant reduction")
    return deg


def reduced_scaled_pair(M: RationalMap, frame: ScaledFrame):
    """Reduced (numerator, denominator) over F_p with the common factor removed."""
    num, den = scaled_map(M, frame)
    p = frame.ctx.p
    nbar = fp_trim([reduce_coeff(x, p) for x in num.coeffs], p)
    dbar = fp_trim([reduce_coeff(x, p) for x in den.coeffs], p)
    h = fp_gcd(nbar, dbar, p)
    from .poly import fp_divmod

    return fp_divmod(nbar, h, p)[0], fp_divmod(dbar, h, p)[0]


# -- Herman cycle verification ----------------------------------------------


def verify_herman_cycle(
    Q: RationalMap, cycle: HermanCycle, pairs: int = 32, seed: int = 0
) -> VerificationReport:
    p = Q.p
    rings = cycle.rings
    n = len(rings)
    report = VerificationReport(
        "Herman cycle " + " -> ".join(format_region(A) for A in rings), seed=seed
    )
    for j, A in enumerate(rings):
        target = rings[(j + 1) % n]
        wit = []
        for idx, z in enumerate(sample_region(A, pairs, seed + 101 * j)):
            w = Q(z)
            if w is oo or not region_contains(target, w):
                wit.append(
                    {"index": idx, "z": format_point(z), "Q(z)": format_point(w)}
                )
        report.add(
            CheckRecord(
                f"maps-into[{j}]",
                not wit,
                {"ring": format_region(A), "target": format_region(target)},
                wit,
            )
        )
    report.extend(verify_isometry(Q, n, rings[0], pairs, seed))

    pole = cycle.params.z0 + cycle.params.mu
    A0 = rings[0]
    inner_ball = Region.ball(A0.center, A0.inner_exp, A0.ctx)
    in_inner = region_contains(inner_ball, pole)
    wit = [
        {
            "pole": format_element(pole),
            "v(pole - center)": format_halfint(vp(pole - A0.center, p)),
            "inside_inner_ball": in_inner,
            "inside_ring": region_contains(A0, pole),
        }
    ]
    note = "" if in_inner else "pole-inside: the pole z0+mu is not in the deleted ball"
    if region_contains(A0, pole):
        note = (
            f"pole-inside: pole {format_element(pole)} lies inside {format_region(A0)}"
        )
    # rational poles of Q must avoid every ring
    stray = []
    if Q.g.is_rational():
        for pole_j in rational_roots(Q.g):
            for j, A in enumerate(rings):
                if region_contains(A, pole_j):
                    stray.append({"pole": format_element(pole_j), "ring": j})
    report.add(CheckRecord("maximality", in_inner and not stray, {}, wit + stray, note))
    cycle.report = report
    cycle.verified = report.passed
    return report


def build_herman_cycle(
    R: RationalMap,
    cycle: SiegelCycle,
    params: HermanParams,
    ctx: FieldContext,
) -> HermanCycle:
    Q = construct_q(R, params)
    return herman_rings(R, Q, cycle, params, ctx)


__all__ = [
    "HermanCycle",
    "HermanParams",
    "ScaledFrame",
    "build_herman_cycle",
    "construct_q",
    "herman_rings",
    "inner_ball_images",
    "reduced_scaled_pair",
    "ring_exps",
    "rq_proximity_check",
    "scaled_map",
    "scaled_reduction_degree",
    "verify_grl_hypotheses",
    "verify_herman_cycle",
]
