"""Exact univariate polynomials, Newton polygons and Hensel lifting.

Coefficients are ``Fraction`` (over Q) or ``FieldElement`` (over Q(sqrt p));
the arithmetic below only uses field operations so both work unchanged.
Polynomials over F_p are plain lists of ints, handled by the ``fp_*`` helpers.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import pairwise

from sympy import divisors

from .errors import HenselError, PolynomialError
from .padic import INF, FieldContext, FieldElement, vp, vp_rational

ZERO_DEGREE = -1  # degree marker of the zero polynomial


def _is_zero(c) -> bool:
    return not c


def _coerce_coeff(c):
    if isinstance(c, FieldElement):
        return c
    return Fraction(c)


class Poly:
    """Immutable polynomial, coefficients in ascending degree order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_coerce_coeff(c) for c in coeffs]
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls) -> Poly:
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> Poly:
        return cls([c])

    @classmethod
    def from_roots(cls, roots, lead=1) -> Poly:
        out = cls([lead])
        for r in roots:
            out = out * cls([-r, 1])
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    @property
    def lead(self):
        if not self.coeffs:
            raise PolynomialError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def order_at_zero(self) -> int:
        for i, c in enumerate(self.coeffs):
            if not _is_zero(c):
                return i
        raise PolynomialError("zero polynomial")

    # -- arithmetic ---------------------------------------------------------
    @staticmethod
    def _lift(other) -> Poly:
        return other if isinstance(other, Poly) else Poly([other])

    def __add__(self, other):
        other = self._lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Poly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def divmod(self, other: Poly):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead_inv = 1 / other.lead
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] * lead_inv
            quot[k] = c
            if _is_zero(c):
                continue
            for j, b in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * b
        return Poly(quot), Poly(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(self._lift(other))[0]

    def __mod__(self, other):
        return self.divmod(self._lift(other))[1]

    def exact_div(self, other: Poly) -> Poly:
        q, r = self.divmod(other)
        if r:
            raise PolynomialError("division is not exact")
        return q

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> Poly:
        return Poly(c * i for i, c in enumerate(self.coeffs) if i)

    def compose(self, inner: Poly) -> Poly:
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * inner + Poly([c])
        return acc

    def monic(self) -> Poly:
        return self * (1 / self.lead)

    def scale_var(self, s) -> Poly:
        """``f(s*z)``."""
        out = []
        sp = Fraction(1)
        for c in self.coeffs:
            out.append(c * sp)
            sp = sp * s
        return Poly(out)

    def padded(self, n: int) -> list:
        """Coefficients padded with zeros to length ``n``."""
        cs = list(self.coeffs)
        if len(cs) > n:
            raise PolynomialError(f"degree {self.degree} exceeds formal degree {n - 1}")
        return cs + [Fraction(0)] * (n - len(cs))

    def is_rational(self) -> bool:
        return all(
            not isinstance(c, FieldElement) or c.is_rational() for c in self.coeffs
        )

    def min_valuation(self, p: int):
        return min((vp(c, p) for c in self.coeffs), default=INF)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def format_poly(f: Poly, var: str = "z") -> str:
    from .padic import format_element

    if not f:
        return "0"
    parts = []
    for i in range(f.degree, -1, -1):
        c = f[i]
        if _is_zero(c):
            continue
        if isinstance(c, FieldElement) and not c.is_rational():
            body = f"({format_element(c)})"
            neg = False
        else:
            cq = c.a if isinstance(c, FieldElement) else c
            neg = cq < 0
            cq = abs(cq)
            body = "" if (cq == 1 and i > 0) else str(cq)
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        term = body + ("*" if body and mono else "") + mono
        if not parts:
            parts.append(("-" if neg else "") + term)
        else:
            parts.append(("- " if neg else "+ ") + term)
    return " ".join(parts)


# -- gcd / resultant --------------------------------------------------------


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd over the coefficient field (``Poly()`` when both are zero)."""
    a, b = f, g
    while b:
        a, b = b, a % b
    if not a:
        return a
    return a.monic()


def _det(matrix: list[list]) -> Fraction:
    m = [list(row) for row in matrix]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if not _is_zero(m[r][col])), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        pv = m[col][col]
        det = det * pv
        inv = 1 / pv
        for r in range(col + 1, n):
            factor = m[r][col] * inv
            if _is_zero(factor):
                continue
            for c in range(col, n):
                m[r][c] = m[r][c] - factor * m[col][c]
    return det


def sylvester(f: Poly, g: Poly, df: int | None = None, dg: int | None = None):
    df = f.degree if df is None else df
    dg = g.degree if dg is None else dg
    fc = list(reversed(f.padded(df + 1)))
    gc = list(reversed(g.padded(dg + 1)))
    size = df + dg
    rows = []
    for i in range(dg):
        rows.append([Fraction(0)] * i + fc + [Fraction(0)] * (size - df - 1 - i))
    for i in range(df):
        rows.append([Fraction(0)] * i + gc + [Fraction(0)] * (size - dg - 1 - i))
    return rows


def resultant(f: Poly, g: Poly, df: int | None = None, dg: int | None = None):
    """Sylvester resultant; ``df``/``dg`` give formal (homogeneous) degrees."""
    if not f or not g:
        raise PolynomialError("resultant of the zero polynomial")
    df = f.degree if df is None else df
    dg = g.degree if dg is None else dg
    if df == 0 and dg == 0:
        return Fraction(1)
    if df == 0:
        return f[0] ** dg
    if dg == 0:
        return g[0] ** df
    return _det(sylvester(f, g, df, dg))


# -- Newton polygons --------------------------------------------------------


@dataclass(frozen=True)
class NewtonPolygon:
    segments: tuple  # ((slope, length), ...) slopes strictly increasing
    zero_order: int = 0
    vertices: tuple = ()

    def root_valuations(self) -> list:
        """Valuations of the nonzero roots, with multiplicity."""
        out = []
        for slope, length in self.segments:
            out.extend([-slope] * length)
        return out


def newton_polygon(f: Poly, ctx_or_p) -> NewtonPolygon:
    p = ctx_or_p.p if isinstance(ctx_or_p, FieldContext) else int(ctx_or_p)
    if not f:
        raise PolynomialError("Newton polygon of the zero polynomial")
    pts = [(i, vp(c, p)) for i, c in enumerate(f.coeffs) if not _is_zero(c)]
    zero_order = pts[0][0]
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    segments = []
    for (x1, y1), (x2, y2) in pairwise(hull):
        slope = Fraction(y2 - y1) / (x2 - x1)
        segments.append((slope, x2 - x1))
    return NewtonPolygon(
        tuple(segments), zero_order, tuple((x, Fraction(y)) for x, y in hull)
    )


# -- F_p polynomials --------------------------------------------------------


def fp_trim(a: Sequence[int], p: int) -> list[int]:
    out = [c % p for c in a]
    while out and out[-1] == 0:
        out.pop()
    return out


def fp_degree(a: Sequence[int]) -> int:
    return len(a) - 1


def fp_divmod(a, b, p):
    a = fp_trim(a, p)
    b = fp_trim(b, p)
    if not b:
        raise ZeroDivisionError("division by zero polynomial over F_p")
    inv = pow(b[-1], -1, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    for k in range(len(a) - len(b), -1, -1):
        c = r[k + len(b) - 1] * inv % p
        q[k] = c
        if c:
            for j, bj in enumerate(b):
                r[k + j] = (r[k + j] - c * bj) % p
    return fp_trim(q, p), fp_trim(r[: len(b) - 1], p)


def fp_gcd(a, b, p) -> list[int]:
    a, b = fp_trim(a, p), fp_trim(b, p)
    while b:
        a, b = b, fp_divmod(a, b, p)[1]
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def fp_eval(a, x, p) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def fp_derivative(a, p):
    return fp_trim([i * c for i, c in enumerate(a)][1:], p)


def reduce_coeff(c, p: int) -> int:
    """Residue of a p-integral coefficient."""
    if isinstance(c, FieldElement):
        if c.valuation() < 0:
            raise PolynomialError(f"coefficient {c} is not p-integral")
        c = c.a
    c = Fraction(c)
    if vp_rational(c, p) < 0:
        raise PolynomialError(f"coefficient {c} is not p-integral")
    return c.numerator * pow(c.denominator, -1, p) % p


def fp_reduce(f: Poly, p: int) -> list[int]:
    return fp_trim([reduce_coeff(c, p) for c in f.coeffs], p)


def normalize_poly(f: Poly, p: int) -> Poly:
    """Scale a rational polynomial by a power of p so its minimum valuation is 0."""
    m = f.min_valuation(p)
    if m == INF or m == 0:
        return f
    if Fraction(m).denominator != 1:
        raise PolynomialError("normalize_poly expects rational coefficients")
    return f * (Fraction(p) ** (-int(m)))


# -- Hensel lifting ---------------------------------------------------------


@dataclass(frozen=True)
class PadicApprox:
    """``p**shift * (residue + O(p**precision))``."""

    p: int
    residue: int
    precision: int
    shift: int = 0

    def __post_init__(self):
        if not 0 <= self.residue < self.p**self.precision:
            raise ValueError("residue out of range")

    def value(self) -> Fraction:
        return Fraction(self.p) ** self.shift * self.residue

    def compatible(self, other: PadicApprox) -> bool:
        if self.p != other.p:
            return False
        lo = min(self.shift + self.precision, other.shift + other.precision)
        diff = self.value() - other.value()
        return vp_rational(diff, self.p) >= lo

    def __str__(self):
        base = f"{self.residue} mod {self.p}^{self.precision}"
        if self.shift:
            return f"{self.p}^{self.shift}*({base})"
        return base


def _integral_mod(f: Poly, p: int, modulus: int) -> list[int]:
    out = []
    for c in f.coeffs:
        c = Fraction(c.to_fraction() if isinstance(c, FieldElement) else c)
        out.append(c.numerator * pow(c.denominator, -1, modulus) % modulus)
    return out


def hensel_lift(f: Poly, a0: int, N: int, p: int) -> PadicApprox:
    """Lift a simple residue root ``a0`` of ``f`` to a root modulo ``p**N``."""
    if not f:
        raise PolynomialError("zero polynomial")
    if N < 1:
        raise ValueError("precision must be >= 1")
    f = normalize_poly(f, p)
    fbar = fp_reduce(f, p)
    a0 %= p
    if fp_eval(fbar, a0, p) != 0:
        raise HenselError(f"{a0} is not a root of f mod {p}")
    if fp_eval(fp_derivative(fbar, p), a0, p) == 0:
        raise HenselError(
            f"f'({a0}) = 0 mod {p}: residue root is not simple, cannot lift"
        )
    modulus = p**N
    fc = _integral_mod(f, p, modulus)
    dfc = [i * c % modulus for i, c in enumerate(fc)][1:]
    x = a0
    prec = 1
    while prec < N:
        prec = min(2 * prec, N)
        m = p**prec
        fx = fp_eval(fc, x, m)
        dfx = fp_eval(dfc, x, m)
        x = (x - fx * pow(dfx, -1, m)) % m
    return PadicApprox(p, x % modulus, N, 0)


# -- roots ------------------------------------------------------------------


@dataclass(frozen=True)
class RootCertificate:
    valuation: Fraction
    count: int
    reason: str


@dataclass
class PadicRoots:
    exact: list = field(default_factory=list)  # distinct rational roots
    multiplicities: dict = field(default_factory=dict)
    lifted: list = field(default_factory=list)  # PadicApprox
    residual: list = field(default_factory=list)  # RootCertificate


def _integer_primitive(f: Poly) -> list[int]:
    from math import gcd, lcm

    cs = [
        Fraction(c.to_fraction() if isinstance(c, FieldElement) else c)
        for c in f.coeffs
    ]
    den = lcm(*[c.denominator for c in cs])
    ints = [int(c * den) for c in cs]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints]


def rational_roots(f: Poly) -> list[Fraction]:
    """Distinct rational roots of a rational polynomial, by divisor enumeration."""
    if not f:
        raise PolynomialError("zero polynomial")
    roots = []
    if f[0] == 0:
        roots.append(Fraction(0))
        f = Poly(f.coeffs[f.order_at_zero() :])
    if f.degree <= 0:
        return roots
    ints = _integer_primitive(f)
    a0, an = abs(ints[0]), abs(ints[-1])
    seen = set()
    for num in divisors(a0):
        for den in divisors(an):
            for s in (1, -1):
                q = Fraction(s * num, den)
                if q in seen:
                    continue
                seen.add(q)
                if f(q) == 0:
                    roots.append(q)
    return sorted(roots)


def padic_roots(f: Poly, ctx_or_p, N: int = 8) -> PadicRoots:
    p = ctx_or_p.p if isinstance(ctx_or_p, FieldContext) else int(ctx_or_p)
    if not f:
        raise PolynomialError("zero polynomial")
    out = PadicRoots()
    rest = f
    for r in rational_roots(f):
        lin = Poly([-r, 1])
        mult = 0
        while True:
            q, rem = rest.divmod(lin)
            if rem:
                break
            rest = q
            mult += 1
        out.exact.append(r)
        out.multiplicities[r] = mult
    if rest.degree <= 0:
        return out
    npoly = newton_polygon(rest, p)
    for slope, length in npoly.segments:
        v = -slope
        if v.denominator != 1:
            out.residual.append(RootCertificate(v, length, "ramified valuation"))
            continue
        v = int(v)
        scaled = normalize_poly(rest.scale_var(Fraction(p) ** v), p)
        fbar = fp_reduce(scaled, p)
        dbar = fp_derivative(fbar, p)
        found = 0
        for a in range(1, p):
            if fp_eval(fbar, a, p) == 0 and fp_eval(dbar, a, p) != 0:
                approx = hensel_lift(scaled, a, N, p)
                out.lifted.append(PadicApprox(p, approx.residue, N, v))
                found += 1
        if found < length:
            out.residual.append(
                RootCertificate(Fraction(v), length - found, "no simple residue root")
            )
    return out


def fp_roots(a, p) -> list[int]:
    return [x for x in range(p) if fp_eval(a, x, p) == 0]
