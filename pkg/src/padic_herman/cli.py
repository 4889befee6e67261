"""Command-line front end.

Every run writes one document holding the job settings, the structured
check records and a rendered text summary.  Exit status is 0 when every
check passes, 1 when a verification fails and 2 on unusable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .builtin import reproduce
from .errors import PadicHermanError, ParseError
from .geometry import format_region, verify_siegel_cycle
from .herman import (
    HermanCycle,
    build_herman_cycle,
    verify_grl_hypotheses,
    verify_herman_cycle,
)
from .padic import format_element, format_halfint, format_point
from .ratmap import DEFAULT_DEGREE_CAP, periodic_points, reduction_report
from .records import (
    map_from_record,
    map_to_record,
    params_from_record,
    regions_from,
    regions_to_records,
)
from .report import CheckRecord, VerificationReport
from .selftest import run_selftest

COMMANDS = (
    "analyze",
    "verify-siegel",
    "construct-herman",
    "verify-herman",
    "reproduce",
    "selftest",
)
TOOL = "padic-herman"


class InputError(Exception):
    pass


def load_inputs(paths: list) -> dict:
    """Merge the JSON inputs; a bare map record becomes the ``map`` entry."""
    doc = {}
    for path in paths:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise InputError(f"{path}: cannot read ({exc.strerror})") from None
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(
                f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})"
            ) from None
        if not isinstance(data, dict):
            raise InputError(f"{path}: $: expected a JSON object")
        if "p" in data:
            data = {"map": data}
        doc.update(data)
    return doc


def _need(doc: dict, key: str):
    if key not in doc:
        raise ParseError(f"$: missing field {key!r}")
    return doc[key]


def _periodic_section(R, n: int, precision: int, cap: int) -> tuple:
    pp = periodic_points(R, n, precision, cap)
    rep = VerificationReport(f"periodic points of period {n}")
    data = []
    for orb in pp.orbits:
        pts = [format_point(z) for z in orb.points]
        entry = {
            "points": pts,
            "multiplier": format_element(orb.multiplier),
            "class": str(orb.cls),
        }
        data.append(entry)
        rep.add(
            CheckRecord("cycle {" + ", ".join(pts) + "}", True, entry, [], str(orb.cls))
        )
    for orb in pp.approximate:
        entry = {
            "points": [str(a) for a in orb.points],
            "multiplier_valuation": None
            if orb.multiplier_valuation is None
            else format_halfint(orb.multiplier_valuation),
            "class": None if orb.cls is None else str(orb.cls),
        }
        data.append(entry)
        rep.add(
            CheckRecord(
                "approximate cycle", True, entry, [], entry["class"] or "undetermined"
            )
        )
    for cert in pp.certificates:
        entry = {
            "valuation": format_halfint(cert.valuation),
            "count": cert.count,
            "reason": cert.reason,
        }
        data.append(entry)
        rep.add(CheckRecord("non-rational roots", True, entry, [], cert.reason))
    return rep, data


def cmd_analyze(doc, args) -> dict:
    R = map_from_record(_need(doc, "map"), "$.map")
    red = reduction_report(R)
    rep = VerificationReport("reduction")
    info = {
        "map": str(R),
        "degree": red.degree,
        "reduced_pair": red.pair_string(),
        "induced_degree": red.induced_degree,
        "good_reduction": red.good,
        "resultant_valuation": format_halfint(red.resultant_valuation),
    }
    rep.add(
        CheckRecord(
            "reduction vs resultant",
            red.resultant_agrees,
            info,
            [],
            "good reduction" if red.good else "bad reduction",
        )
    )
    sections, periodic = [rep], {}
    for n in (1, 2):
        s, d = _periodic_section(R, n, args.precision, args.degree_cap)
        sections.append(s)
        periodic[str(n)] = d
    return {"sections": sections, "data": {"reduction": info, "periodic": periodic}}


def cmd_verify_siegel(doc, args) -> dict:
    R = map_from_record(_need(doc, "map"), "$.map")
    disks = regions_from(_need(doc, "cycle"), R.ctx, "$.cycle")
    sc = verify_siegel_cycle(R, disks, args.samples, args.seed)
    return {
        "sections": [sc.report],
        "data": {"map": map_to_record(R), "cycle": regions_to_records(disks)},
    }


def cmd_construct_herman(doc, args) -> dict:
    R = map_from_record(_need(doc, "map"), "$.map")
    disks = regions_from(_need(doc, "cycle"), R.ctx, "$.cycle")
    params = params_from_record(_need(doc, "params"))
    sc = verify_siegel_cycle(R, disks, args.samples, args.seed)
    sections = [sc.report]
    hyp = verify_grl_hypotheses(R, sc, params)
    sections.append(hyp)
    data = {"params": params.to_record()}
    if sc.verified and hyp.passed:
        hc = build_herman_cycle(R, sc, params, R.ctx.ramified())
        rec = map_to_record(hc.Q)
        rec["provenance"] = {
            "map": map_to_record(R),
            "cycle": regions_to_records(disks),
            "params": params.to_record(),
            "hypotheses": hyp.to_dict(),
        }
        data["Q"] = rec
        data["rings"] = regions_to_records(hc.rings)
        if args.map_out:
            Path(args.map_out).write_text(
                json.dumps(rec, indent=2, sort_keys=True) + "\n"
            )
    return {"sections": sections, "data": data}


def cmd_verify_herman(doc, args) -> dict:
    Q = map_from_record(_need(doc, "map"), "$.map")
    rings = regions_from(_need(doc, "rings"), Q.ctx, "$.rings")
    params = params_from_record(_need(doc, "params"))
    hc = HermanCycle(Q, rings, params)
    rep = verify_herman_cycle(Q, hc, args.samples, args.seed)
    return {"sections": [rep], "data": {"rings": [format_region(A) for A in rings]}}


def cmd_reproduce(doc, args) -> dict:
    if args.example is None:
        raise InputError("reproduce: --example 1|2 is required")
    res = reproduce(args.example, args.samples, args.seed)
    return {"sections": res.sections, "data": res.data, "notes": res.notes}


def cmd_selftest(doc, args) -> dict:
    return {"sections": [run_selftest(args.seed)], "data": {}}


HANDLERS = {
    "analyze": cmd_analyze,
    "verify-siegel": cmd_verify_siegel,
    "construct-herman": cmd_construct_herman,
    "verify-herman": cmd_verify_herman,
    "reproduce": cmd_reproduce,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog=TOOL, description="Verified p-adic dynamics on the projective line."
    )
    ap.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument(
        "--input",
        action="append",
        default=[],
        metavar="PATH",
        help="JSON input; repeat to merge several files",
    )
    ap.add_argument(
        "--samples", type=int, default=32, help="sample pairs per check (default 32)"
    )
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument(
        "--precision", type=int, default=8, help="Hensel precision N (default 8)"
    )
    ap.add_argument("--degree-cap", type=int, default=DEFAULT_DEGREE_CAP)
    ap.add_argument("--example", type=int, choices=(1, 2))
    ap.add_argument(
        "--out", metavar="PATH", help="write the report here instead of stdout"
    )
    ap.add_argument(
        "--map-out",
        metavar="PATH",
        help="construct-herman: also write the Q map record",
    )
    ap.add_argument("--format", choices=("json", "text"), default="json")
    return ap


def job_record(args) -> dict:
    return {
        "command": args.command,
        "inputs": list(args.input),
        "samples": args.samples,
        "seed": args.seed,
        "precision": args.precision,
        "degree_cap": args.degree_cap,
        "example": args.example,
    }


def render_text(job: dict, sections: list, notes: list, passed: bool) -> str:
    head = f"{TOOL} {__version__} {job['command']} (samples={job['samples']}, seed={job['seed']})"
    parts = [head] + [s.render_text() for s in sections]
    parts += [f"note: {n}" for n in notes]
    parts.append("RESULT: " + ("PASS" if passed else "FAIL"))
    return "\n".join(parts)


def execute(args) -> tuple:
    """Execute one parsed job; returns (exit status, report document or None, error text)."""
    job = job_record(args)
    if args.samples < 1 or args.precision < 1 or args.degree_cap < 1:
        return 2, None, "--samples, --precision and --degree-cap must be positive"
    try:
        doc = load_inputs(args.input)
        out = HANDLERS[args.command](doc, args)
    except (InputError, ParseError) as exc:
        return 2, None, str(exc)
    except PadicHermanError as exc:
        return 2, None, f"{type(exc).__name__}: {exc}"
    sections = out["sections"]
    notes = out.get("notes", [])
    passed = all(s.passed for s in sections)
    report = {
        "tool": TOOL,
        "version": __version__,
        "job": job,
        "passed": passed,
        "sections": [s.to_dict() for s in sections],
        "data": out.get("data", {}),
        "notes": notes,
        "text": render_text(job, sections, notes, passed),
    }
    return (0 if passed else 1), report, ""


def run(argv=None) -> tuple:
    return execute(build_parser().parse_args(argv))


def serialize(report: dict, fmt: str) -> str:
    if fmt == "text":
        return report["text"] + "\n"
    return json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    status, report, err = execute(args)
    if report is None:
        print(f"{TOOL}: error: {err}", file=sys.stderr)
        return status
    text = serialize(report, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
