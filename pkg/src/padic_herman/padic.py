"""Exact p-adic valuation arithmetic over Q and Q(sqrt p).

Elements are ``a + b*sqrt(p)`` with ``a, b`` in Q.  Valuations are
half-integers (``Fraction``) or ``INF`` for zero; norms are carried as exact
exponents, never floats.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cache, total_ordering
from numbers import Rational

from sympy import isprime

from .errors import ContextError, ParseError

INF = math.inf

HALF = Fraction(1, 2)


class _Infinity:
    """The point at infinity of the projective line, also the residue symbol."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "oo"

    def __str__(self):
        return "oo"

    def __reduce__(self):
        return (_Infinity, ())


oo = _Infinity()


@cache
def _check_prime(p: int) -> bool:
    return isprime(p)


@dataclass(frozen=True)
class FieldContext:
    p: int
    ramification: int = 1

    def __post_init__(self):
        if (
            not isinstance(self.p, int)
            or isinstance(self.p, bool)
            or not _check_prime(self.p)
        ):
            raise ContextError(f"p must be a prime integer, got {self.p!r}")
        if self.ramification not in (1, 2):
            raise ContextError(
                f"ramification must be 1 or 2, got {self.ramification!r}"
            )

    @property
    def step(self) -> Fraction:
        """Smallest positive valuation realised in this field."""
        return Fraction(1, self.ramification)

    def ramified(self) -> FieldContext:
        return FieldContext(self.p, 2)

    def element(self, a=0, b=0) -> FieldElement:
        return FieldElement(a, b, self)

    def sqrt_p(self) -> FieldElement:
        if self.ramification != 2:
            raise ContextError("sqrt(p) requires ramification 2")
        return FieldElement(0, 1, self)


def _join(c1: FieldContext, c2: FieldContext) -> FieldContext:
    if c1.p != c2.p:
        raise ContextError(f"cannot mix p={c1.p} and p={c2.p}")
    return c1 if c1.ramification >= c2.ramification else c2


def vp_int(n: int, p: int):
    if n == 0:
        return INF
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_rational(q, p: int):
    q = Fraction(q)
    if q == 0:
        return INF
    return vp_int(q.numerator, p) - vp_int(q.denominator, p)


class FieldElement:
    """Immutable element ``a + b*sqrt(p)`` of Q(sqrt p) (``b == 0`` over Q)."""

    __slots__ = ("a", "b", "ctx")

    def __init__(self, a, b=0, ctx: FieldContext | None = None):
        if ctx is None:
            raise ContextError("FieldElement needs a FieldContext")
        a = Fraction(a)
        b = Fraction(b)
        if b and ctx.ramification == 1:
            raise ContextError("sqrt(p) component requires ramification 2")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "ctx", ctx)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    # -- coercion -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return FieldElement(other, 0, self.ctx)
        return NotImplemented

    @property
    def p(self) -> int:
        return self.ctx.p

    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b:
            raise ValueError(f"{self} is not rational")
        return self.a

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(
            self.a + other.a, self.b + other.b, _join(self.ctx, other.ctx)
        )

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(-self.a, -self.b, self.ctx)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(
            self.a - other.a, self.b - other.b, _join(self.ctx, other.ctx)
        )

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ctx = _join(self.ctx, other.ctx)
        if not self.b and not other.b:
            return FieldElement(self.a * other.a, 0, ctx)
        a = self.a * other.a + ctx.p * self.b * other.b
        b = self.a * other.b + self.b * other.a
        return FieldElement(a, b, ctx)

    __rmul__ = __mul__

    def conjugate(self):
        return FieldElement(self.a, -self.b, self.ctx)

    def norm_down(self) -> Fraction:
        """Field norm to Q: ``a^2 - p b^2``."""
        return self.a * self.a - self.p * self.b * self.b

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero")
        if not self.b:
            return FieldElement(1 / self.a, 0, self.ctx)
        n = self.norm_down()
        return FieldElement(self.a / n, -self.b / n, self.ctx)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = FieldElement(1, 0, self.ctx)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.p == other.p and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return not self.b and self.a == other
        return NotImplemented

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b, self.p))

    # -- valuation ----------------------------------------------------------
    def valuation(self):
        va = vp_rational(self.a, self.p)
        if not self.b:
            return va
        vb = vp_rational(self.b, self.p) + HALF
        return min(va, vb)

    def __repr__(self):
        return f"FieldElement({format_element(self)!r}, p={self.p})"

    def __str__(self):
        return format_element(self)


Scalar = int | Fraction | FieldElement


def vp(x, p: int | None = None):
    """p-adic valuation of an int, Fraction or FieldElement (``INF`` for 0)."""
    if isinstance(x, FieldElement):
        if p is not None and p != x.p:
            raise ContextError(f"element over p={x.p} queried with p={p}")
        return x.valuation()
    if p is None:
        raise ContextError("p required for rational input")
    return vp_rational(x, p)


@total_ordering
@dataclass(frozen=True)
class Norm:
    """Exact value ``p**exp`` (``exp is None`` encodes the norm of zero)."""

    p: int
    exp: Fraction | None

    @classmethod
    def from_valuation(cls, p: int, v) -> Norm:
        if v == INF:
            return cls(p, None)
        return cls(p, -Fraction(v))

    @property
    def valuation(self):
        return INF if self.exp is None else -self.exp

    def is_zero(self) -> bool:
        return self.exp is None

    def _key(self):
        return -math.inf if self.exp is None else self.exp

    def __lt__(self, other):
        if not isinstance(other, Norm):
            return NotImplemented
        return self._key() < other._key()

    def __eq__(self, other):
        if isinstance(other, Norm):
            return self.p == other.p and self.exp == other.exp
        if other == 0:
            return self.exp is None
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.exp))

    def __mul__(self, other):
        if self.exp is None or other.exp is None:
            return Norm(self.p, None)
        return Norm(self.p, self.exp + other.exp)

    def __truediv__(self, other):
        if other.exp is None:
            raise ZeroDivisionError("division by the zero norm")
        if self.exp is None:
            return self
        return Norm(self.p, self.exp - other.exp)

    def as_fraction(self) -> Fraction | None:
        """Exact rational value when the exponent is integral."""
        if self.exp is None:
            return Fraction(0)
        if self.exp.denominator != 1:
            return None
        return Fraction(self.p) ** int(self.exp)

    def __str__(self):
        return format_norm(self)


def pnorm(x, p: int | None = None) -> Norm:
    if isinstance(x, FieldElement):
        p = x.p
    return Norm.from_valuation(p, vp(x, p))


def pi_power(ctx: FieldContext, j: int) -> FieldElement:
    """``sqrt(p)**j``; odd ``j`` needs a ramified context."""
    q, odd = divmod(j, 2)
    base = Fraction(ctx.p) ** q
    if odd:
        return FieldElement(0, base, ctx if ctx.ramification == 2 else ctx.ramified())
    return FieldElement(base, 0, ctx)


def element_of_valuation(ctx: FieldContext, v) -> FieldElement:
    """Canonical element ``p**floor(v) * sqrt(p)**(...)`` with valuation exactly ``v``."""
    v = Fraction(v)
    if (2 * v).denominator != 1:
        raise ValueError(f"valuation {v} is not a half-integer")
    return pi_power(ctx, int(2 * v))


# -- projective points ------------------------------------------------------


class ProjPoint:
    """Point ``[X : Y]`` of the projective line, scaled so ``min(v(X), v(Y)) == 0``."""

    __slots__ = ("X", "Y", "ctx")

    def __init__(self, X, Y, ctx: FieldContext):
        X = X if isinstance(X, FieldElement) else FieldElement(X, 0, ctx)
        Y = Y if isinstance(Y, FieldElement) else FieldElement(Y, 0, ctx)
        ctx = _join(_join(ctx, X.ctx), Y.ctx)
        if not X and not Y:
            raise ValueError("[0 : 0] is not a projective point")
        m = min(X.valuation(), Y.valuation())
        if m != 0:
            s = element_of_valuation(ctx, -m)
            X, Y = X * s, Y * s
        self.X, self.Y, self.ctx = X, Y, ctx

    @classmethod
    def of(cls, z, ctx: FieldContext) -> ProjPoint:
        if z is oo:
            return cls(1, 0, ctx)
        return cls(z, 1, ctx)

    @classmethod
    def infinity(cls, ctx: FieldContext) -> ProjPoint:
        return cls(1, 0, ctx)

    @property
    def is_infinity(self) -> bool:
        return not self.Y

    @property
    def value(self):
        """Affine coordinate ``X/Y`` or ``oo``."""
        if not self.Y:
            return oo
        return self.X / self.Y

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return self.X * other.Y == other.X * self.Y

    def __hash__(self):
        v = self.value
        return hash(oo) if v is oo else hash(v)

    def __repr__(self):
        return f"ProjPoint({self.value})"


def chordal(P1: ProjPoint, P2: ProjPoint) -> Norm:
    """Non-archimedean chordal distance; both points are already canonical."""
    _join(P1.ctx, P2.ctx)
    cross = P1.X * P2.Y - P2.X * P1.Y
    # canonical representatives have max(|X|, |Y|) == 1
    return Norm.from_valuation(P1.ctx.p, cross.valuation())


def reduce_scalar(x, p: int):
    """Residue of ``x`` in F_p, or ``oo`` when ``|x| > 1``."""
    if isinstance(x, FieldElement):
        if x.valuation() < 0:
            return oo
        x = x.a
    x = Fraction(x)
    if vp_rational(x, p) < 0:
        return oo
    return x.numerator * pow(x.denominator, -1, p) % p


def reduce_point(P) -> int | _Infinity:
    if isinstance(P, ProjPoint):
        if P.is_infinity:
            return oo
        # canonical scaling: Y is a unit unless the point lies outside O
        if P.Y.valuation() > 0:
            return oo
        return reduce_scalar(P.X / P.Y, P.ctx.p)
    raise TypeError(f"expected ProjPoint, got {type(P).__name__}")


# -- parsing / formatting ---------------------------------------------------

_SQRT_TERM = re.compile(
    r"^(?P<sign>[+-])?(?P<coef>\d+(?:/\d+)?)?\*?sqrt\((?P<p>\d+)\)$"
)


def parse_rational(text: str) -> Fraction:
    t = str(text).strip().replace(" ", "")
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", t):
        raise ParseError(f"invalid rational {text!r}")
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"invalid rational {text!r}: {exc}") from None


def _split_terms(text: str):
    s = text.strip()
    terms = []
    start = 0
    for i, ch in enumerate(s):
        if ch in "+-" and i > 0:
            prev = s[:i].rstrip()
            if prev and prev[-1] not in "*/(":
                terms.append(s[start:i])
                start = i
    terms.append(s[start:])
    return [t.strip() for t in terms if t.strip()]


def parse_element(text: str, ctx: FieldContext) -> FieldElement:
    """Parse ``"a/b"`` or ``"a/b + c/d*sqrt(p)"``."""
    if not isinstance(text, str):
        if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
            return FieldElement(text, 0, ctx)
        raise ParseError(f"expected a string, got {text!r}")
    a = Fraction(0)
    b = Fraction(0)
    terms = _split_terms(text)
    if not terms:
        raise ParseError(f"empty element {text!r}")
    for term in terms:
        compact = term.replace(" ", "")
        m = _SQRT_TERM.match(compact)
        if m:
            if int(m.group("p")) != ctx.p:
                raise ParseError(
                    f"sqrt({m.group('p')}) in element over p={ctx.p}: {text!r}"
                )
            c = parse_rational(m.group("coef")) if m.group("coef") else Fraction(1)
            b += -c if m.group("sign") == "-" else c
        else:
            a += parse_rational(compact)
    if b and ctx.ramification == 1:
        ctx = ctx.ramified()
    return FieldElement(a, b, ctx)


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q)


def format_element(x) -> str:
    if not isinstance(x, FieldElement):
        return format_rational(x)
    if not x.b:
        return format_rational(x.a)
    sq = f"sqrt({x.p})"
    bpart = sq if x.b == 1 else f"{format_rational(abs(x.b))}*{sq}"
    if not x.a:
        if x.b == -1:
            return f"-{sq}"
        return bpart if x.b > 0 else f"-{bpart}"
    sign = "+" if x.b > 0 else "-"
    if x.b == -1:
        bpart = sq
    return f"{format_rational(x.a)} {sign} {bpart}"


def format_point(z) -> str:
    if z is oo:
        return "oo"
    if isinstance(z, ProjPoint):
        return format_point(z.value)
    return format_element(z)


def format_halfint(v) -> str:
    if v == INF:
        return "inf"
    return str(Fraction(v))


def parse_halfint(text) -> Fraction:
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    q = parse_rational(str(text))
    if (2 * q).denominator != 1:
        raise ParseError(f"{text!r} is not a half-integer")
    return q


def format_norm(n: Norm) -> str:
    if n.exp is None:
        return "0"
    e = n.exp
    if e == 0:
        return "1"
    if e.denominator == 1 and e > 0:
        return f"{n.p}^{e.numerator}"
    return f"{n.p}^({e})"
