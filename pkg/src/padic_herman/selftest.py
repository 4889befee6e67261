"""Randomized property suites.

Each suite draws its instances from ``random.Random(seed)`` and records the
first few counterexamples as witnesses, so a rerun with the same seed
reproduces any failure exactly.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import CommonFactorError, DiskImageError
from .geometry import Region, disk_image, sample_pairs
from .padic import INF, FieldContext, FieldElement, format_element, pnorm, vp
from .poly import Poly, hensel_lift, newton_polygon, resultant
from .ratmap import RationalMap, reduction_report
from .report import CheckRecord, VerificationReport

PRIMES = (2, 3, 5, 7)
MAX_WITNESSES = 5


def _unit(rng: random.Random, p: int, bound: int = 50) -> int:
    while True:
        u = rng.randint(-bound, bound)
        if u % p:
            return u


def _padic_rational(rng: random.Random, p: int, lo: int = -3, hi: int = 3) -> Fraction:
    if rng.random() < 0.05:
        return Fraction(0)
    return (
        Fraction(_unit(rng, p)) * Fraction(p) ** rng.randint(lo, hi) / _unit(rng, p, 9)
    )


def _element(rng: random.Random, ctx: FieldContext) -> FieldElement:
    a = _padic_rational(rng, ctx.p)
    b = _padic_rational(rng, ctx.p) if rng.random() < 0.5 else 0
    return FieldElement(a, b, ctx)


def _finish(report, name, count, failures, note=""):
    report.add(
        CheckRecord(
            name, not failures, {"instances": count}, failures[:MAX_WITNESSES], note
        )
    )


def ultrametric_suite(
    report: VerificationReport, rng: random.Random, count: int = 1000
):
    failures = []
    for i in range(count):
        ctx = FieldContext(rng.choice(PRIMES), 2)
        x, y = _element(rng, ctx), _element(rng, ctx)
        vx, vy, vs = x.valuation(), y.valuation(), (x + y).valuation()
        problems = []
        if vs < min(vx, vy):
            problems.append("strong triangle")
        if vx != vy and vs != min(vx, vy):
            problems.append("isosceles")
        vxy = (x * y).valuation()
        if vxy != (vx + vy if INF not in (vx, vy) else INF):
            problems.append("multiplicativity")
        if pnorm(x + y) > max(pnorm(x), pnorm(y)):
            problems.append("norm triangle")
        if problems:
            failures.append(
                {
                    "index": i,
                    "x": format_element(x),
                    "y": format_element(y),
                    "laws": problems,
                }
            )
    _finish(report, "ultrametric laws", count, failures)


def newton_suite(report: VerificationReport, rng: random.Random, count: int = 100):
    failures = []
    for i in range(count):
        p = rng.choice(PRIMES)
        f = Poly([_padic_rational(rng, p, -2, 2) or 1])
        expected = []
        for _ in range(rng.randint(1, 5)):
            if rng.random() < 0.25:
                # z^2 - u p^m: roots of valuation m/2
                m = rng.randint(-3, 3)
                f = f * Poly([-_unit(rng, p) * Fraction(p) ** m, 0, 1])
                expected += [Fraction(m, 2)] * 2
            else:
                r = _padic_rational(rng, p)
                f = f * Poly([-r, 1])
                if r:
                    expected.append(vp(r, p))
        npoly = newton_polygon(f, p)
        got = sorted(npoly.root_valuations())
        if got != sorted(expected):
            failures.append(
                {
                    "index": i,
                    "p": p,
                    "f": str(f),
                    "newton": [str(v) for v in got],
                    "roots": [str(v) for v in sorted(expected)],
                }
            )
    _finish(report, "newton polygon vs root valuations", count, failures)


def hensel_suite(report: VerificationReport, rng: random.Random, count: int = 100):
    failures = []
    done = 0
    while done < count:
        p = rng.choice(PRIMES)
        N = rng.randint(2, 10)
        a = rng.randint(-100, 100)
        g = Poly([rng.randint(-20, 20) for _ in range(rng.randint(1, 4))])
        if not g or g(a) % p == 0:
            continue
        h = Poly([rng.randint(-20, 20) for _ in range(rng.randint(1, 5))])
        f = Poly([-a, 1]) * g + h * p
        a0 = a % p
        x = hensel_lift(f, a0, N, p).value()
        done += 1
        if vp(f(x), p) < N or (x - a0) % p != 0:
            failures.append({"p": p, "N": N, "f": str(f), "a0": a0, "x": str(x)})
    _finish(report, "hensel residue vp(f(x)) >= N", count, failures)


def _ratio_instance(R, D, pairs, seed):
    di = disk_image(R, D, samples=8, seed=seed)
    bad = []
    for z, w in sample_pairs(D, pairs, seed + 1):
        if z == w:
            continue
        ratio = pnorm(R(z) - R(w)) / pnorm(z - w)
        if ratio != di.ratio:
            bad.append(
                {"z": format_element(z), "w": format_element(w), "ratio": str(ratio)}
            )
    return bad


def ratio_suite(
    report: VerificationReport, rng: random.Random, count: int = 50, pairs: int = 12
):
    failures = []
    ctx1, ctx2 = FieldContext(5), FieldContext(5, 2)
    R_phi = RationalMap(Poly([5, 0, -5]), Poly([5, -1]), ctx1)
    done = 0
    while done < count:
        if done % 5 == 4:
            # subdisks of the 2-cycle of disks of R_phi
            c0, k0 = rng.choice([(0, 1), (1, 0)])
            k = k0 + rng.randint(0, 4)
            c = c0 + rng.randint(-30, 30) * 5 ** (k0 + 1)
            R, D = R_phi, Region.disk(c, k, ctx2)
        else:
            p = rng.choice(PRIMES)
            ctxp = FieldContext(p, 2)
            a, b, c, d = (_padic_rational(rng, p, -1, 2) for _ in range(4))
            if a * d - b * c == 0:
                continue
            k = Fraction(rng.randint(-4, 6), 2)
            center = _padic_rational(rng, p, -1, 3)
            if c and vp(center + d / c, p) >= k:  # pole in the open disk
                continue
            try:
                R = RationalMap(Poly([b, a]), Poly([d, c]), FieldContext(p))
            except CommonFactorError:
                continue
            D = Region.disk(center, k, ctxp)
        seed = rng.randint(0, 10**6)
        try:
            bad = _ratio_instance(R, D, pairs, seed)
        except DiskImageError as exc:
            bad = [{"error": str(exc)}]
        done += 1
        if bad:
            failures.append(
                {"map": str(R), "disk": str(D), "seed": seed, "bad": bad[:3]}
            )
    _finish(
        report,
        "ratio constancy on injective disks",
        count,
        failures,
        f"{pairs} sample pairs per instance",
    )


def _coeff(rng: random.Random, p: int) -> Fraction:
    e = rng.choice([-1, 0, 0, 0, 1, 2])
    return Fraction(rng.randint(-9, 9)) * Fraction(p) ** e


def reduction_suite(report: VerificationReport, rng: random.Random, count: int = 50):
    failures = []
    done = 0
    while done < count:
        p = rng.choice(PRIMES)
        d = rng.randint(1, 3)
        f = Poly([_coeff(rng, p) for _ in range(rng.randint(1, d + 1))])
        g = Poly([_coeff(rng, p) for _ in range(rng.randint(1, d + 1))])
        if not f or not g or max(f.degree, g.degree) < 1:
            continue
        try:
            R = RationalMap(f, g, FieldContext(p))
        except CommonFactorError:
            continue
        done += 1
        F, G = R.homogeneous()
        res = resultant(Poly(F), Poly(G), R.degree, R.degree)
        unit = vp(res, p) == 0
        rep = reduction_report(R)
        if rep.good != unit:
            failures.append(
                {"map": str(R), "p": p, "good": rep.good, "v(res)": str(vp(res, p))}
            )
    _finish(report, "good reduction iff unit resultant", count, failures)


def run_selftest(seed: int = 0) -> VerificationReport:
    report = VerificationReport("property suites", seed=seed)
    ultrametric_suite(report, random.Random(seed))
    newton_suite(report, random.Random(seed + 1))
    hensel_suite(report, random.Random(seed + 2))
    ratio_suite(report, random.Random(seed + 3))
    reduction_suite(report, random.Random(seed + 4))
    return report


__all__ = [
    "hensel_suite",
    "newton_suite",
    "ratio_suite",
    "reduction_suite",
    "run_selftest",
    "ultrametric_suite",
]
