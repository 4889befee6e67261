"""JSON records for maps, regions and construction parameters.

Parsing errors carry a JSONPath-like location such as ``$.num[1]``.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ContextError, PadicHermanError, ParseError
from .geometry import Region, region_from_record, region_to_record
from .herman import HermanParams
from .padic import FieldContext, format_element, parse_rational
from .poly import Poly
from .ratmap import RationalMap


def _fail(where: str, msg: str):
    raise ParseError(f"{where}: {msg}")


def _require(rec, key: str, where: str):
    if not isinstance(rec, dict):
        _fail(where, "expected an object")
    if key not in rec:
        _fail(where, f"missing field {key!r}")
    return rec[key]


def parse_prime(value, where: str = "$.p") -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(where, f"p must be an integer, got {value!r}")
    try:
        FieldContext(value)
    except ContextError as exc:
        _fail(where, str(exc))
    return value


def _coeffs(values, where: str) -> list:
    if not isinstance(values, list) or not values:
        _fail(where, "expected a non-empty list of rational strings")
    out = []
    for i, c in enumerate(values):
        if not isinstance(c, str):
            _fail(f"{where}[{i}]", f"rationals must be strings, got {c!r}")
        try:
            out.append(parse_rational(c))
        except (ParseError, ValueError, ZeroDivisionError):
            _fail(f"{where}[{i}]", f"cannot parse {c!r} as a rational")
    return out


def map_to_record(R: RationalMap) -> dict:
    return {
        "p": R.p,
        "num": [format_element(c) for c in R.f.coeffs] or ["0"],
        "den": [format_element(c) for c in R.g.coeffs] or ["0"],
    }


def map_from_record(rec, where: str = "$") -> RationalMap:
    p = parse_prime(_require(rec, "p", where), f"{where}.p")
    num = _coeffs(_require(rec, "num", where), f"{where}.num")
    den = _coeffs(_require(rec, "den", where), f"{where}.den")
    if not any(den):
        _fail(f"{where}.den", "denominator is identically zero")
    try:
        return RationalMap(Poly(num), Poly(den), FieldContext(p))
    except (PadicHermanError, ValueError) as exc:
        _fail(where, str(exc))


def region_from(rec, ctx: FieldContext, where: str) -> Region:
    try:
        return region_from_record(rec, ctx.ramified())
    except ParseError as exc:
        _fail(where, str(exc))


def regions_from(recs, ctx: FieldContext, where: str) -> list:
    if not isinstance(recs, list) or not recs:
        _fail(where, "expected a non-empty list of region records")
    return [region_from(r, ctx, f"{where}[{i}]") for i, r in enumerate(recs)]


def regions_to_records(regions) -> list:
    return [region_to_record(G) for G in regions]


def params_from_record(rec, where: str = "$.params") -> HermanParams:
    vals = {}
    for key in ("z0", "mu"):
        raw = _require(rec, key, where)
        if not isinstance(raw, str):
            _fail(f"{where}.{key}", f"rationals must be strings, got {raw!r}")
        try:
            vals[key] = parse_rational(raw)
        except (ParseError, ValueError, ZeroDivisionError):
            _fail(f"{where}.{key}", f"cannot parse {raw!r} as a rational")
    try:
        return HermanParams(Fraction(vals["z0"]), Fraction(vals["mu"]))
    except (PadicHermanError, ValueError) as exc:
        _fail(where, str(exc))


__all__ = [
    "map_from_record",
    "map_to_record",
    "params_from_record",
    "parse_prime",
    "region_from",
    "regions_from",
    "regions_to_records",
]
