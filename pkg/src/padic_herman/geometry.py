"""Disks, balls and annuli on the projective line, with sampled verification.

Radii are always carried as exponents: a region with ``radius_exp = k`` has
radius ``p**(-k)``.  Membership is decided exactly from valuations:

* ``disk``      ``v(z - c) > k`` (open) or ``>= k`` (closed ball)
* ``infinity``  ``v(z) < k`` (open) or ``<= k``, plus the point ``oo``
* ``annulus``   ``k_out < v(z - c) < k_in`` with per-boundary openness
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor

from .errors import DiskImageError, EmptyRegionError, PoleError
from .padic import (
    INF,
    FieldContext,
    FieldElement,
    Norm,
    format_element,
    format_halfint,
    format_norm,
    format_point,
    oo,
    pi_power,
    vp,
)
from .poly import Poly, newton_polygon
from .ratmap import RationalMap, iterate
from .report import CheckRecord, VerificationReport

DISK = "disk"
INFINITY = "infinity"
ANNULUS = "annulus"

# admissible valuations explored per region, in units of the field's step
_VALUATION_WINDOW = 4
_MAX_ANNULUS_LEVELS = 8


def _fe(x, ctx: FieldContext) -> FieldElement:
    if isinstance(x, FieldElement):
        return x
    return FieldElement(x, 0, ctx)


@dataclass(frozen=True)
class Region:
    kind: str
    ctx: FieldContext
    radius_exp: Fraction  # outer radius exponent for annuli
    center: FieldElement | None = None
    open: bool = True  # disk/infinity: strict inequality; annulus: outer boundary
    inner_exp: Fraction | None = None
    inner_open: bool = True  # annulus: |z - c| > inner (deleted ball is closed)

    # -- constructors -------------------------------------------------------
    @classmethod
    def disk(cls, center, radius_exp, ctx: FieldContext) -> Region:
        """Open disk ``D_r(c) = {|z - c| < r}``."""
        return cls(DISK, ctx, Fraction(radius_exp), _fe(center, ctx), True)

    @classmethod
    def ball(cls, center, radius_exp, ctx: FieldContext) -> Region:
        """Closed ball ``B_r(c) = {|z - c| <= r}``."""
        return cls(DISK, ctx, Fraction(radius_exp), _fe(center, ctx), False)

    @classmethod
    def infinity(cls, radius_exp, ctx: FieldContext, open: bool = True) -> Region:
        """``D_R(oo) = {|z| > R} U {oo}``."""
        return cls(INFINITY, ctx, Fraction(radius_exp), None, open)

    @classmethod
    def annulus(
        cls,
        center,
        inner_exp,
        outer_exp,
        ctx: FieldContext,
        *,
        inner_open=True,
        outer_open=True,
    ) -> Region:
        inner_exp, outer_exp = Fraction(inner_exp), Fraction(outer_exp)
        if not inner_exp > outer_exp:
            raise ValueError(
                "annulus inner radius must be strictly below the outer radius"
            )
        return cls(
            ANNULUS, ctx, outer_exp, _fe(center, ctx), outer_open, inner_exp, inner_open
        )

    # -- basic properties ---------------------------------------------------
    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def is_finite_disk(self) -> bool:
        return self.kind == DISK

    @property
    def radius(self) -> Norm:
        return Norm(self.p, -self.radius_exp)

    @property
    def inner_radius(self) -> Norm | None:
        return None if self.inner_exp is None else Norm(self.p, -self.inner_exp)

    def center_point(self):
        return oo if self.kind == INFINITY else self.center

    def mirror(self) -> Region:
        """Image under ``z -> 1/z`` for disks around 0 and around infinity."""
        if self.kind == INFINITY:
            return Region(DISK, self.ctx, -self.radius_exp, _fe(0, self.ctx), self.open)
        if self.kind == DISK and not self.center:
            return Region(INFINITY, self.ctx, -self.radius_exp, None, self.open)
        raise ValueError("only regions centred at 0 or oo can be mirrored")

    def contains(self, z) -> bool:
        return region_contains(self, z)

    def same_set(self, other: Region) -> bool:
        if (self.kind, self.radius_exp, self.open, self.inner_exp, self.inner_open) != (
            other.kind,
            other.radius_exp,
            other.open,
            other.inner_exp,
            other.inner_open,
        ):
            return False
        if self.kind == INFINITY:
            return True
        v = vp(self.center - other.center, self.p)
        if self.kind == DISK:
            return region_contains(self, other.center)
        # annuli coincide iff their deleted inner balls coincide
        return v > self.inner_exp if not self.inner_open else v >= self.inner_exp

    def __str__(self):
        return format_region(self)


def format_region(G: Region) -> str:
    p = G.p
    if G.kind == INFINITY:
        r = format_norm(Norm(p, -G.radius_exp))
        return f"D_{{{r}}}(oo)" if G.open else f"B_{{{r}}}(oo)"
    c = format_element(G.center)
    if G.kind == DISK:
        r = format_norm(G.radius)
        return f"{'D' if G.open else 'B'}_{{{r}}}({c})"
    return f"A_{{{format_norm(G.inner_radius)}}}^{{{format_norm(G.radius)}}}({c})"


def region_contains(G: Region, z) -> bool:
    if z is oo:
        return G.kind == INFINITY
    if G.kind == INFINITY:
        v = vp(_fe(z, G.ctx), G.p)
        return v < G.radius_exp if G.open else v <= G.radius_exp
    v = vp(_fe(z, G.ctx) - G.center, G.p)
    if G.kind == DISK:
        return v > G.radius_exp if G.open else v >= G.radius_exp
    outer_ok = v > G.radius_exp if G.open else v >= G.radius_exp
    inner_ok = v < G.inner_exp if G.inner_open else v <= G.inner_exp
    return outer_ok and inner_ok


def regions_intersect(A: Region, B: Region) -> bool:
    """Intersection test for disks/balls and regions around infinity."""
    if ANNULUS in (A.kind, B.kind):
        raise ValueError("intersection test supports disks and regions around oo only")
    if A.kind == INFINITY and B.kind == INFINITY:
        return True
    if A.kind == DISK and B.kind == DISK:
        return region_contains(A, B.center) or region_contains(B, A.center)
    D, I = (A, B) if A.kind == DISK else (B, A)
    if region_contains(I, D.center):
        return True
    # D = D_r(c) with |c| <= R meets {|z| > R} iff r > R (or r = R, both closed)
    if D.radius_exp < I.radius_exp:
        return True
    return D.radius_exp == I.radius_exp and not D.open and not I.open


def disk_dist(D1: Region, D2: Region) -> Norm:
    if D1.kind != DISK or D2.kind != DISK:
        raise ValueError("disk_dist needs two finite disks or balls")
    if regions_intersect(D1, D2):
        return Norm(D1.p, None)
    return Norm.from_valuation(D1.p, vp(D1.center - D2.center, D1.p))


# -- sampling -----------------------------------------------------------------


def _levels(G: Region) -> list:
    """Admissible valuations of ``z - c`` (or of ``1/z``) to sample from."""
    step = G.ctx.step
    if G.kind == ANNULUS:
        lo, lo_open = G.radius_exp, G.open
        hi, hi_open = G.inner_exp, G.inner_open
        start = Fraction(floor(lo / step)) * step
        levels = []
        m = start
        while m <= hi and len(levels) < _MAX_ANNULUS_LEVELS:
            ok_lo = m > lo if lo_open else m >= lo
            ok_hi = m < hi if hi_open else m <= hi
            if ok_lo and ok_hi:
                levels.append(m)
            m += step
        return levels
    k = G.radius_exp if G.kind == DISK else -G.radius_exp
    m = Fraction(ceil(k / step)) * step
    if G.open and m == k:
        m += step
    return [m + i * step for i in range(_VALUATION_WINDOW * G.ctx.ramification)]


def _offset(ctx: FieldContext, m: Fraction, u: int, w: int, u2: int) -> FieldElement:
    j = int(2 * m) if ctx.ramification == 2 else int(m)
    p = ctx.p
    if ctx.ramification == 2:
        return pi_power(ctx, j) * (u + p * w) + pi_power(ctx, j + 1) * u2
    return FieldElement(Fraction(p) ** j * (u + p * w), 0, ctx)


def sample_region(G: Region, count: int, seed: int = 0) -> list:
    """Deterministic, seed-reproducible points lying exactly in ``G``."""
    if count < 1:
        raise ValueError("count must be >= 1")
    levels = _levels(G)
    if not levels:
        raise EmptyRegionError(
            f"{format_region(G)} has no points of valuation in the value group"
        )
    rng = random.Random(seed)
    p = G.p
    units = list(range(1, p))
    out, seen = [], set()
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count + 1000:
            raise EmptyRegionError(
                f"could not draw {count} distinct points from {format_region(G)}"
            )
        m = rng.choice(levels)
        u = rng.choice(units)
        w = rng.randrange(p * p)
        u2 = rng.randrange(p)
        off = _offset(G.ctx, m, u, w, u2)
        if G.kind == INFINITY:
            z = off.inverse()
        else:
            z = G.center + off
        if z in seen:
            continue
        seen.add(z)
        out.append(z)
    return out


def sample_pairs(G: Region, pairs: int, seed: int = 0) -> list:
    pts = sample_region(G, 2 * pairs, seed)
    return list(zip(pts[0::2], pts[1::2]))


# -- charts -------------------------------------------------------------------


def _source_chart(D: Region):
    """(chart disk, to_point) where the chart coordinate is z or 1/z."""
    if D.kind == DISK:
        return D, (lambda u: u)
    if D.kind == INFINITY:
        return D.mirror(), (lambda u: oo if not u else u.inverse())
    raise ValueError(f"expected a disk or a region around oo, got {D.kind}")


def _target_coord(w, inverted: bool):
    if inverted:
        if w is oo:
            return Fraction(0)
        if not w:
            raise PoleError("image is oo in the inverted chart")
        return 1 / w
    if w is oo:
        raise PoleError("sample maps to a pole")
    return w


@dataclass
class DiskImage:
    region: Region
    t: Norm
    ratio: Norm  # the common value of |R(z1)-R(z2)|/|z1-z2|, i.e. t/r
    witnesses: list = field(default_factory=list)

    def __iter__(self):
        return iter((self.region, self.t))


def _chart_hits(R: RationalMap, D: Region, chart: Region, inverted: bool) -> bool:
    """True if the chart's denominator has a root in the chart disk (exact, via Newton polygon)."""
    if D.kind == INFINITY:
        F, G = R.homogeneous()
        f, g = Poly(F[::-1]), Poly(G[::-1])
    else:
        f, g = R.f, R.g
    h = (f if inverted else g).compose(Poly([chart.center, 1]))
    if not h:
        return True
    npoly = newton_polygon(h, chart.ctx)
    if npoly.zero_order:
        return True
    k = chart.radius_exp
    return any(v > k or (v == k and not chart.open) for v in npoly.root_valuations())


def disk_image(R: RationalMap, D: Region, samples: int = 8, seed: int = 0) -> DiskImage:
    """Image disk of ``D`` under ``R`` by exact ratio consensus over samples."""
    chart, to_point = _source_chart(D)
    ctx = chart.ctx
    c = chart.center
    c_img = R(to_point(c))
    inverted = c_img is oo
    if _chart_hits(R, D, chart, inverted):
        what = "a zero" if inverted else "a pole"
        raise DiskImageError(
            f"{format_region(D)} contains {what} of the map; image is not a disk"
        )
    pts = [c] + sample_region(chart, max(samples, 3), seed)
    images = []
    witnesses = []
    for u in pts:
        w = R(to_point(u))
        try:
            images.append(_target_coord(w, inverted))
        except PoleError:
            witnesses.append({"z": format_point(to_point(u)), "image": format_point(w)})
            raise DiskImageError(
                f"sample {format_point(to_point(u))} of {format_region(D)} hits a pole",
                witnesses,
            ) from None
    idx_pairs = [(0, i) for i in range(1, len(pts))] + [
        (i, i + 1) for i in range(1, len(pts) - 1)
    ]
    ratios = set()
    for i, j in idx_pairs:
        dv_in = vp(pts[i] - pts[j], ctx.p)
        dv_out = vp(images[i] - images[j], ctx.p)
        c_ij = dv_out - dv_in if dv_out != INF else INF
        ratios.add(c_ij)
        witnesses.append(
            {
                "z1": format_point(to_point(pts[i])),
                "z2": format_point(to_point(pts[j])),
                "v_in": format_halfint(dv_in),
                "v_out": format_halfint(dv_out),
            }
        )
    if len(ratios) != 1 or INF in ratios:
        raise DiskImageError(
            f"ratio |R(z1)-R(z2)|/|z1-z2| is not constant on {format_region(D)}: "
            f"valuation shifts {sorted(format_halfint(r) for r in ratios)}",
            witnesses,
        )
    shift = ratios.pop()
    k_img = chart.radius_exp + shift
    if inverted:
        img = Region(INFINITY, ctx, -k_img, None, chart.open)
    else:
        img = Region(DISK, ctx, k_img, _fe(c_img, ctx), chart.open)
    return DiskImage(img, img.radius, Norm(ctx.p, -shift), witnesses)


# -- verification -------------------------------------------------------------


def _region_coord(G: Region, z):
    if G.kind == INFINITY:
        return _target_coord(z, True)
    return _target_coord(z, False)


def verify_isometry(
    R: RationalMap, n: int, G: Region, pairs: int = 32, seed: int = 0
) -> VerificationReport:
    """Check ``|R^n(z1) - R^n(z2)| = |z1 - z2|`` exactly on sampled pairs of ``G``."""
    report = VerificationReport(f"isometry of R^{n} on {format_region(G)}", seed=seed)
    rec = CheckRecord(
        "isometry",
        True,
        {"region": format_region(G), "n": n, "pairs": pairs, "seed": seed},
    )
    first_fail = None
    for idx, (z1, z2) in enumerate(sample_pairs(G, pairs, seed)):
        w1, w2 = iterate(R, z1, n), iterate(R, z2, n)
        wit = {"index": idx, "z1": format_point(z1), "z2": format_point(z2)}
        try:
            a1, a2 = _region_coord(G, z1), _region_coord(G, z2)
            b1, b2 = _region_coord(G, w1), _region_coord(G, w2)
        except PoleError:
            wit.update(
                ok=False, error="pole", image1=format_point(w1), image2=format_point(w2)
            )
            rec.witnesses.append(wit)
            first_fail = first_fail or wit
            continue
        v_in, v_out = vp(a1 - a2, G.p), vp(b1 - b2, G.p)
        ok = v_in == v_out
        wit.update(v_in=format_halfint(v_in), v_out=format_halfint(v_out), ok=ok)
        rec.witnesses.append(wit)
        if not ok and first_fail is None:
            first_fail = wit
    if first_fail is not None:
        rec.passed = False
        rec.note = f"first failing pair #{first_fail['index']}"
        rec.inputs["first_failure"] = first_fail
    report.add(rec)
    return report


@dataclass
class SiegelCycle:
    map: RationalMap
    disks: list
    report: VerificationReport
    verified: bool = False

    @property
    def n(self) -> int:
        return len(self.disks)

    @property
    def radii(self) -> list:
        return [D.radius for D in self.disks]

    @property
    def radius_exps(self) -> list:
        return [D.radius_exp for D in self.disks]


def verify_siegel_cycle(
    R: RationalMap, disks: list, pairs: int = 32, seed: int = 0
) -> SiegelCycle:
    n = len(disks)
    report = VerificationReport(
        "Siegel cycle " + " -> ".join(format_region(D) for D in disks), seed=seed
    )
    overlaps = []
    for i in range(n):
        for j in range(i + 1, n):
            if regions_intersect(disks[i], disks[j]):
                overlaps.append({"i": i, "j": j})
    report.add(CheckRecord("disjoint", not overlaps, {"n": n}, overlaps))

    for j, D in enumerate(disks):
        target = disks[(j + 1) % n]
        name = f"image[{j}]"
        inputs = {"source": format_region(D), "expected": format_region(target)}
        try:
            img = disk_image(R, D, samples=max(8, pairs // 4), seed=seed + j)
        except (DiskImageError, PoleError) as exc:
            wit = getattr(exc, "witnesses", [])
            report.add(CheckRecord(name, False, inputs, wit, str(exc)))
            continue
        ok = img.region.same_set(target)
        report.add(
            CheckRecord(
                name,
                ok,
                inputs,
                [{"image": format_region(img.region), "t": format_norm(img.t)}],
                "" if ok else f"image is {format_region(img.region)}",
            )
        )

    iso = verify_isometry(R, n, disks[0], pairs, seed)
    report.extend(iso)

    bad = [
        {"j": j, "rho_0": format_norm(disks[0].radius), "rho_j": format_norm(D.radius)}
        for j, D in enumerate(disks)
        if D.radius < disks[0].radius
    ]
    report.add(CheckRecord("labeling", not bad, {"rule": "rho_0 <= rho_j"}, bad))
    return SiegelCycle(R, list(disks), report, report.passed)


def region_to_record(G: Region) -> dict:
    if G.kind == ANNULUS:
        return {
            "kind": ANNULUS,
            "center": format_element(G.center),
            "inner_exp": format_halfint(G.inner_exp),
            "outer_exp": format_halfint(G.radius_exp),
            "inner_open": G.inner_open,
            "outer_open": G.open,
        }
    rec = {"kind": G.kind, "radius_exp": format_halfint(G.radius_exp), "open": G.open}
    if G.kind == DISK:
        rec = {"kind": DISK, "center": format_element(G.center), **rec}
    return rec


def region_from_record(rec: dict, ctx: FieldContext) -> Region:
    from .errors import ParseError
    from .padic import parse_element, parse_halfint

    if not isinstance(rec, dict):
        raise ParseError("region record must be an object")
    kind = rec.get("kind")
    try:
        if kind in (DISK, "ball"):
            is_open = rec.get("open", kind == DISK)
            if not isinstance(is_open, bool):
                raise ParseError("'open' must be a boolean")
            return Region(
                DISK,
                ctx,
                parse_halfint(rec["radius_exp"]),
                parse_element(rec["center"], ctx),
                is_open,
            )
        if kind == INFINITY:
            return Region(
                INFINITY,
                ctx,
                parse_halfint(rec["radius_exp"]),
                None,
                rec.get("open", True),
            )
        if kind == ANNULUS:
            return Region.annulus(
                parse_element(rec["center"], ctx),
                parse_halfint(rec["inner_exp"]),
                parse_halfint(rec["outer_exp"]),
                ctx,
                inner_open=rec.get("inner_open", True),
                outer_open=rec.get("outer_open", True),
            )
    except KeyError as exc:
        raise ParseError(f"region record missing field {exc.args[0]!r}") from None
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from None
    raise ParseError(f"unknown region kind {kind!r}")
