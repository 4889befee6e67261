"""Rational maps on the projective line over Q (or Q(sqrt p)).

A map is stored as a coprime pair ``(f, g)`` with ``R(z) = f(z)/g(z)``,
normalized by a power of p so all coefficients are p-integral and at least
one is a unit.  The homogeneous pair is ``F(X,Y) = Y**d f(X/Y)`` and
``G(X,Y) = Y**d g(X/Y)`` with ``d = max(deg f, deg g)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .errors import CommonFactorError, DegreeCapError, NotPeriodicError, PolynomialError
from .padic import (
    INF,
    FieldContext,
    ProjPoint,
    element_of_valuation,
    format_point,
    oo,
    vp,
)
from .poly import (
    PadicApprox,
    Poly,
    RootCertificate,
    format_poly,
    fp_gcd,
    fp_trim,
    padic_roots,
    poly_gcd,
    reduce_coeff,
    resultant,
)

DEFAULT_DEGREE_CAP = 256


def _scale_pair(f: Poly, g: Poly, ctx: FieldContext):
    m = min(f.min_valuation(ctx.p), g.min_valuation(ctx.p))
    if m == 0 or m == INF:
        return f, g
    if Fraction(m).denominator == 1:
        s = Fraction(ctx.p) ** (-int(m))
    else:
        s = element_of_valuation(ctx.ramified(), -m)
    return f * s, g * s


class RationalMap:
    """Normalized rational map ``f/g`` with ``gcd(f, g) = 1``."""

    __slots__ = ("ctx", "degree", "f", "g")

    def __init__(self, f, g, ctx: FieldContext, *, check_coprime: bool = True):
        f = f if isinstance(f, Poly) else Poly(f)
        g = g if isinstance(g, Poly) else Poly(g)
        if not g:
            raise PolynomialError("denominator is the zero polynomial")
        if not f and g.degree == 0:
            raise PolynomialError("constant map has degree 0")
        if check_coprime:
            h = poly_gcd(f, g)
            if h.degree > 0:
                raise CommonFactorError(
                    f"numerator and denominator share the factor {h}", h
                )
        self.f, self.g = _scale_pair(f, g, ctx)
        self.ctx = ctx
        self.degree = max(self.f.degree, self.g.degree)
        if self.degree < 1:
            raise PolynomialError("rational map must have degree >= 1")

    @classmethod
    def from_fraction(cls, f: Poly, g: Poly, ctx: FieldContext) -> RationalMap:
        """Cancel ``gcd(f, g)`` first, then normalize."""
        h = poly_gcd(f, g)
        if h.degree > 0:
            f, g = f.exact_div(h), g.exact_div(h)
        return cls(f, g, ctx, check_coprime=False)

    @classmethod
    def from_strings(cls, num, den, p: int) -> RationalMap:
        from .padic import parse_rational

        ctx = FieldContext(p)
        return cls(
            Poly(parse_rational(c) for c in num),
            Poly(parse_rational(c) for c in den),
            ctx,
        )

    @property
    def p(self) -> int:
        return self.ctx.p

    def canonical(self) -> RationalMap:
        """Unit rescaling to primitive integer coefficients, denominator lead > 0."""
        if not (self.f.is_rational() and self.g.is_rational()):
            return self
        cs = [Fraction(c) for c in self.f.coeffs + self.g.coeffs]
        den = lcm(*[c.denominator for c in cs])
        num = 0
        for c in cs:
            num = gcd(num, int(c * den))
        s = Fraction(den, num)
        if self.g.lead < 0:
            s = -s
        return RationalMap(self.f * s, self.g * s, self.ctx, check_coprime=False)

    def homogeneous(self):
        """Coefficient lists of ``F`` and ``G``, both padded to degree ``d``."""
        n = self.degree + 1
        return self.f.padded(n), self.g.padded(n)

    def same_map(self, other: RationalMap) -> bool:
        return self.p == other.p and self.f * other.g == other.f * self.g

    def __eq__(self, other):
        if not isinstance(other, RationalMap):
            return NotImplemented
        return self.same_map(other)

    def __hash__(self):
        return hash((self.degree, self.p))

    # -- evaluation ---------------------------------------------------------
    def __call__(self, z):
        """Evaluate at an affine value or ``oo``; returns a value or ``oo``."""
        if z is oo:
            F, G = self.homogeneous()
            if not G[-1]:
                return oo
            return F[-1] / G[-1]
        den = self.g(z)
        if not den:
            return oo
        return self.f(z) / den

    def eval_homogeneous(self, X, Y):
        F, G = self.homogeneous()
        d = self.degree
        xs, ys = [Fraction(1)], [Fraction(1)]
        for _ in range(d):
            xs.append(xs[-1] * X)
            ys.append(ys[-1] * Y)
        Fv = sum((F[k] * xs[k] * ys[d - k] for k in range(d + 1)), Fraction(0))
        Gv = sum((G[k] * xs[k] * ys[d - k] for k in range(d + 1)), Fraction(0))
        return Fv, Gv

    def __str__(self):
        return f"({format_poly(self.f)})/({format_poly(self.g)})"

    def __repr__(self):
        return f"RationalMap({self}, p={self.p})"


def normalize(F, G, ctx: FieldContext) -> RationalMap:
    """Normalize a homogeneous pair given by dehomogenized coefficient lists."""
    f = F if isinstance(F, Poly) else Poly(F)
    g = G if isinstance(G, Poly) else Poly(G)
    if not f and not g:
        raise PolynomialError("pair is identically zero")
    return RationalMap(f, g, ctx)


# -- reduction ----------------------------------------------------------------


@dataclass(frozen=True)
class ReductionReport:
    p: int
    degree: int
    F_red: tuple  # homogeneous coefficients mod p, index k <-> X^k Y^(d-k)
    G_red: tuple
    induced_degree: int
    good: bool
    resultant_valuation: object
    resultant_agrees: bool

    def pair_string(self) -> str:
        return f"[{format_form(self.F_red, self.p)}, {format_form(self.G_red, self.p)}]"


def _sym(c: int, p: int) -> int:
    c %= p
    return c - p if c > p // 2 else c


def format_form(coeffs, p: int) -> str:
    """Homogeneous form over F_p with symmetric representatives, e.g. ``-XY``."""
    d = len(coeffs) - 1
    parts = []
    for k in range(d, -1, -1):
        c = _sym(coeffs[k], p)
        if not c:
            continue
        mono = ""
        for var, e in (("X", k), ("Y", d - k)):
            if e == 1:
                mono += var
            elif e > 1:
                mono += f"{var}^{e}"
        body = str(abs(c)) if (abs(c) != 1 or not mono) else ""
        term = body + mono
        if not parts:
            parts.append(("-" if c < 0 else "") + term)
        else:
            parts.append(("- " if c < 0 else "+ ") + term)
    return " ".join(parts) if parts else "0"


def induced_degree(f_red, g_red, p: int) -> int:
    """Degree of the map on P^1(F_p-bar) induced by a reduced pair (0 if constant)."""
    f_red, g_red = fp_trim(f_red, p), fp_trim(g_red, p)
    if not f_red or not g_red:
        return 0
    h = fp_gcd(f_red, g_red, p)
    return max(len(f_red), len(g_red)) - len(h)


def reduction_report(R: RationalMap) -> ReductionReport:
    p = R.p
    F, G = R.homogeneous()
    F_red = tuple(reduce_coeff(c, p) for c in F)
    G_red = tuple(reduce_coeff(c, p) for c in G)
    deg = induced_degree(F_red, G_red, p)
    good = deg == R.degree
    res = resultant(R.f, R.g, R.degree, R.degree)
    v = vp(res, p)
    agrees = (v == 0) == good
    return ReductionReport(p, R.degree, F_red, G_red, deg, good, v, agrees)


# -- iteration / composition --------------------------------------------------


def eval_map(R: RationalMap, P: ProjPoint) -> ProjPoint:
    Fv, Gv = R.eval_homogeneous(P.X, P.Y)
    return ProjPoint(Fv, Gv, P.ctx)


def iterate(R: RationalMap, P, n: int):
    """``R^n`` applied pointwise; accepts a ``ProjPoint`` or an affine value/``oo``."""
    if n < 0:
        raise ValueError("iteration count must be >= 0")
    if isinstance(P, ProjPoint):
        for _ in range(n):
            P = eval_map(R, P)
        return P
    z = P
    for _ in range(n):
        z = R(z)
    return z


def compose_symbolic(
    R: RationalMap, n: int, cap: int = DEFAULT_DEGREE_CAP
) -> RationalMap:
    if n < 1:
        raise ValueError("composition count must be >= 1")
    if R.degree**n > cap:
        raise DegreeCapError(f"deg R^{n} = {R.degree**n} exceeds cap {cap}")
    F, G = R.homogeneous()
    d = R.degree
    fn, gn = R.f, R.g
    for _ in range(n - 1):
        # (fn, gn) dehomogenize forms of degree d**k; actual degrees may be lower
        fpows = [Poly([1])]
        gpows = [Poly([1])]
        for _ in range(d):
            fpows.append(fpows[-1] * fn)
            gpows.append(gpows[-1] * gn)
        new_f = sum((fpows[k] * gpows[d - k] * F[k] for k in range(d + 1)), Poly())
        new_g = sum((fpows[k] * gpows[d - k] * G[k] for k in range(d + 1)), Poly())
        fn, gn = new_f, new_g
    return RationalMap.from_fraction(fn, gn, R.ctx)


def conjugate(R: RationalMap, a, b, c, d) -> RationalMap:
    """``h o R o h^{-1}`` for ``h(z) = (a z + b)/(c z + d)``."""
    det = a * d - b * c
    if not det:
        raise ValueError("singular Mobius transformation")
    # h^{-1}(w) = (d w - b)/(-c w + a)
    num_in, den_in = Poly([-b, d]), Poly([a, -c])
    F, G = R.homogeneous()
    k = R.degree
    npows, dpows = [Poly([1])], [Poly([1])]
    for _ in range(k):
        npows.append(npows[-1] * num_in)
        dpows.append(dpows[-1] * den_in)
    Fs = sum((npows[i] * dpows[k - i] * F[i] for i in range(k + 1)), Poly())
    Gs = sum((npows[i] * dpows[k - i] * G[i] for i in range(k + 1)), Poly())
    return RationalMap.from_fraction(Fs * a + Gs * b, Fs * c + Gs * d, R.ctx)


# -- multipliers --------------------------------------------------------------


class CycleClass(str, enum.Enum):
    SUPER_ATTRACTING = "super-attracting"
    ATTRACTING = "attracting"
    REPELLING = "repelling"
    INDIFFERENT = "indifferent"

    def __str__(self):
        return self.value


def _local_derivative(R: RationalMap, z, w):
    """Derivative of R from ``z`` to ``w = R(z)`` in the charts ``z`` or ``1/z``."""
    F, G = R.homogeneous()
    if z is oo:
        A, B, x = Poly(reversed(F)), Poly(reversed(G)), Fraction(0)
    else:
        A, B, x = R.f, R.g, z
    if w is oo:
        A, B = B, A
    Bx = B(x)
    if not Bx:
        raise NotPeriodicError("orbit point maps to a pole of the chart")
    return (A.derivative()(x) * Bx - A(x) * B.derivative()(x)) / (Bx * Bx)


def _as_value(P):
    if isinstance(P, ProjPoint):
        return P.value
    return P


def _same(z, w) -> bool:
    if z is oo or w is oo:
        return z is w
    return z == w


def multiplier(R: RationalMap, orbit):
    """Multiplier of a cycle by the chain rule, with ``w = 1/z`` at infinity."""
    pts = [_as_value(P) for P in orbit]
    if not pts:
        raise NotPeriodicError("empty orbit")
    lam = Fraction(1)
    for i, z in enumerate(pts):
        w = R(z)
        target = pts[(i + 1) % len(pts)]
        if not _same(w, target):
            raise NotPeriodicError(
                f"R({format_point(z)}) = {format_point(w)}, expected {format_point(target)}"
            )
        lam = lam * _local_derivative(R, z, w)
    return lam


def classify(lam, p: int | None = None) -> CycleClass:
    if not lam:
        return CycleClass.SUPER_ATTRACTING
    v = vp(lam, p)
    if v > 0:
        return CycleClass.ATTRACTING
    if v < 0:
        return CycleClass.REPELLING
    return CycleClass.INDIFFERENT


def classify_valuation(v) -> CycleClass:
    if v == INF:
        return CycleClass.SUPER_ATTRACTING
    if v > 0:
        return CycleClass.ATTRACTING
    if v < 0:
        return CycleClass.REPELLING
    return CycleClass.INDIFFERENT


# -- periodic points ----------------------------------------------------------


@dataclass
class PeriodicOrbit:
    points: list  # affine values or oo
    multiplier: object
    cls: CycleClass

    @property
    def period(self) -> int:
        return len(self.points)


@dataclass
class ApproxOrbit:
    """Orbit of Hensel-lifted (non-rational) periodic points."""

    points: list  # PadicApprox
    multiplier_valuation: object  # Fraction, INF, or None if undetermined
    cls: CycleClass | None


@dataclass
class PeriodicPoints:
    period: int
    orbits: list = field(default_factory=list)
    approximate: list = field(default_factory=list)
    certificates: list = field(default_factory=list)  # RootCertificate


def minimal_period(R: RationalMap, z, n: int) -> int | None:
    w = z
    for k in range(1, n + 1):
        w = R(w)
        if _same(w, z):
            return k
    return None


def _approx_orbits(R, lifted, n, N, p):
    orbits = []
    used = set()
    tol = N // 2 if N >= 2 else 1
    for i, a in enumerate(lifted):
        if i in used:
            continue
        x = a.value()
        # discard points whose true period is a proper divisor of n
        shorter = False
        w = x
        for m in range(1, n):
            w = R(w)
            if w is oo:
                break
            if n % m == 0 and vp(w - x, p) >= a.shift + tol:
                shorter = True
                break
        if shorter:
            used.add(i)
            continue
        pts, xs = [a], [x]
        used.add(i)
        w = x
        for _ in range(n - 1):
            w = R(w)
            if w is oo:
                break
            for j, b in enumerate(lifted):
                if j not in used and vp(w - b.value(), p) >= b.shift + tol:
                    used.add(j)
                    pts.append(b)
                    xs.append(b.value())
                    break
        lam = Fraction(1)
        for z in xs:
            w = R(z)
            if w is oo:
                lam = None
                break
            lam = lam * _local_derivative(R, z, w)
        if lam is None:
            mv, cls = None, None
        else:
            v = vp(lam, p)
            mv = v if v < tol else None
            cls = classify_valuation(v) if mv is not None else None
        orbits.append(ApproxOrbit(pts, mv, cls))
    return orbits


def periodic_points(
    R: RationalMap, n: int, N: int = 8, cap: int = DEFAULT_DEGREE_CAP
) -> PeriodicPoints:
    """Cycles of exact minimal period ``n``."""
    if n < 1:
        raise ValueError("period must be >= 1")
    Rn = R if n == 1 else compose_symbolic(R, n, cap)
    h = Rn.f - Poly.x() * Rn.g
    out = PeriodicPoints(n)
    candidates = []
    if iterate(R, oo, n) is oo:
        candidates.append(oo)
    if not h:
        raise NotPeriodicError(f"R^{n} is the identity")
    roots = padic_roots(h, R.p, N)
    candidates.extend(roots.exact)
    seen = set()
    for z in candidates:
        if z in seen:
            continue
        if minimal_period(R, z, n) != n:
            continue
        orbit = [z]
        w = R(z)
        while not _same(w, z):
            orbit.append(w)
            w = R(w)
        seen.update(orbit)
        lam = multiplier(R, orbit)
        out.orbits.append(PeriodicOrbit(orbit, lam, classify(lam, R.p)))
    out.approximate = _approx_orbits(R, roots.lifted, n, N, R.p)
    out.certificates = list(roots.residual)
    return out


__all__ = [
    "DEFAULT_DEGREE_CAP",
    "ApproxOrbit",
    "CycleClass",
    "PadicApprox",
    "PeriodicOrbit",
    "PeriodicPoints",
    "RationalMap",
    "ReductionReport",
    "RootCertificate",
    "classify",
    "compose_symbolic",
    "conjugate",
    "eval_map",
    "format_form",
    "induced_degree",
    "iterate",
    "minimal_period",
    "multiplier",
    "normalize",
    "periodic_points",
    "reduction_report",
]
