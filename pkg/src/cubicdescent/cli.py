"""Command-line front end: JSON reports, scans, class groups and the verification suites.

Exit codes: 0 success, 1 a verification suite found a counterexample,
2 tangent hyperplane, 3 equality hypotheses not met (the report is still
printed, with bounds), 4 unparseable input or a reducible polynomial.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Optional, Sequence

from .arith import format_rational, to_rational
from .classgroup import Effort, IdealClassData, compute_class_group, load_class_group_json
from .cubicfield import make_field
from .curve import CurvePoint, WeierstrassCurve
from .descent import DEFAULT_SEARCH_BOUND, DescentReport, full_report
from .errors import EffortExceeded, Reducible, Tangent
from .surface import Basis, Hyperplane, SurfacePoint
from .verify import SUITES, run_suite

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_FALSIFIED = 1
EXIT_TANGENT = 2
EXIT_HYPOTHESES = 3
EXIT_USAGE = 4


class UsageError(Exception):
    """Input that cannot be parsed."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ------------------------------------------------------------------ serialization


def _q(v) -> str:
    return format_rational(to_rational(v))


def _curve(W: WeierstrassCurve) -> dict:
    return {"coefficients": [_q(c) for c in W.coefficients]}


def _point(P: CurvePoint) -> Optional[list]:
    return None if P.is_infinity else [_q(P.x), _q(P.y)]


def _surface_point(P: SurfacePoint) -> list:
    return [_q(c) for c in P.coords]


def _class_group(data: Optional[IdealClassData]) -> Optional[dict]:
    if data is None:
        return None
    return {
        "class_number": data.class_number,
        "elementary_divisors": list(data.elementary_divisors),
        "three_rank": data.three_rank,
        "certified": data.certified,
        "stable": data.stable,
        "g_invariant": data.g_invariant,
        "source": data.source,
    }


def report_document(r: DescentReport) -> dict:
    """Every DescentReport field exactly once; the inputs are echoed under "input"."""
    c = r.cassels
    return {
        "schema_version": SCHEMA_VERSION,
        "input": {
            "t": _q(r.t),
            "hyperplane": [_q(v) for v in r.hyperplane],
            "basis": [[_q(v) for v in row] for row in r.basis.matrix],
        },
        "curve": _curve(r.curve),
        "dual": _curve(r.dual),
        "discriminant": _q(r.discriminant),
        "j_invariant": None if r.j_invariant is None else _q(r.j_invariant),
        "norm_gamma": _q(r.norm_gamma),
        "S": r.s_sets.sorted("S"),
        "S_prime": r.s_sets.sorted("S_prime"),
        "R": r.s_sets.sorted("R"),
        "valuations": {str(p): v for p, v in r.valuations.items()},
        "local_images": {str(p): v for p, v in r.local_images.items()},
        "cassels": None if c is None else {"d_plus": c.d_plus, "d_minus": c.d_minus, "d_inf": c.d_inf, "r": c.r},
        "dim_n_phi": r.dim_n_phi,
        "dim_selmer_phi": r.dim_selmer_phi,
        "dim_selmer_phi_hat": r.dim_selmer_phi_hat,
        "selmer_exact": r.selmer_exact,
        "dim_selmer_phi_hat_lower": r.dim_selmer_phi_hat_lower,
        "duality_consistent": r.duality_consistent,
        "dim_n_cl_g3": r.dim_n_cl_g3,
        "dim_n_cl_g3_direct": r.dim_n_cl_g3_direct,
        "n_cl_g3_agrees": r.n_cl_g3_agrees,
        "bound_chain_holds": r.bound_chain_holds,
        "rank_lower": r.rank_lower,
        "rank_upper": r.rank_upper,
        "sha_phi_hat_dim": r.sha_phi_hat_dim,
        "hypotheses": dict(r.hypotheses),
        "witnesses": [_point(P) for P in r.witnesses],
        "c3": {
            "count": r.c3.count,
            "conductors": list(r.c3.conductors),
            "restricted": r.c3.restricted,
            "identity_holds": r.c3.identity_holds,
        },
        "class_group": _class_group(r.class_group),
        "notes": list(r.notes),
        "certification": {
            "selmer_exact": r.selmer_exact,
            "class_group_certified": None if r.class_group is None else r.class_group.certified,
        },
    }


def tangent_document(exc: Tangent) -> dict:
    payload = exc.parametrization
    if payload is not None:
        payload = dict(payload)
        payload["samples"] = [{"uv": s["uv"], "point": _surface_point(s["point"])} for s in payload["samples"]]
    return {"schema_version": SCHEMA_VERSION, "error": "Tangent", "message": str(exc), "parametrization": payload}


def _dump(doc: dict, compact: bool = False) -> str:
    if compact:
        return json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return json.dumps(doc, sort_keys=True, indent=2)


# ------------------------------------------------------------------ parsing


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not a rational number: {text!r}") from exc


def parse_hyperplane(text: str) -> Hyperplane:
    try:
        return Hyperplane.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad hyperplane {text!r}: {exc}") from exc


def parse_basis(text: Optional[str], field) -> Basis:
    if text is None or text == "skew":
        return Basis.skew(field)
    if text == "power":
        return Basis.power(field)
    values = [parse_rational(v) for v in text.split(",")]
    if len(values) != 9:
        raise UsageError("--basis takes 'skew', 'power' or 9 comma-separated rationals")
    try:
        return Basis.from_flat(field, values)
    except (ValueError, ZeroDivisionError, AssertionError) as exc:
        raise UsageError(f"bad basis: {exc}") from exc


def _effort(name: Optional[str]) -> Effort:
    try:
        return Effort.named(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# ------------------------------------------------------------------ commands


def _run_report(args) -> int:
    t = parse_rational(args.t)
    H = parse_hyperplane(args.hyperplane)
    field = make_field(t)
    basis = parse_basis(args.basis, field)
    effort = _effort(args.effort)
    data = None
    if args.classgroup_file:
        try:
            data = load_class_group_json(args.classgroup_file, field)
        except (OSError, ValueError, KeyError) as exc:
            raise UsageError(f"bad class group file: {exc}") from exc
    start = time.perf_counter()
    try:
        r = full_report(t, H, basis, class_group=data, compute_classgroup=args.compute_classgroup, effort=effort, search_bound=args.search_bound)
    except Tangent as exc:
        print(_dump(tangent_document(exc)))
        return EXIT_TANGENT
    doc = report_document(r)
    if args.timings:
        doc["timings"] = {"seconds": round(time.perf_counter() - start, 3)}
    print(_dump(doc))
    return EXIT_OK if r.selmer_exact else EXIT_HYPOTHESES


def _scan_one(job) -> tuple[Fraction, str]:
    t, H, search_bound = job
    try:
        r = full_report(t, H, search_bound=search_bound)
        doc = report_document(r)
    except Tangent as exc:
        doc = tangent_document(exc)
        doc["input"] = {"t": _q(t), "hyperplane": [_q(v) for v in H]}
    return t, _dump(doc, compact=True)


def scan_values(t_from: Fraction, t_to: Fraction, step: Fraction, integral_only: bool) -> list[Fraction]:
    """The parameters of a scan, in increasing order, without the reducible ones."""
    values = []
    t = t_from
    while t <= t_to:
        if not (integral_only and t.denominator != 1):
            try:
                make_field(t)
                values.append(t)
            except Reducible:
                pass
        t += step
    return values


def _run_scan(args) -> int:
    t_from, t_to = parse_rational(args.t_from), parse_rational(args.t_to)
    step = parse_rational(args.step)
    if t_from > t_to or step <= 0:
        raise UsageError("need t-from <= t-to and a positive step")
    H = parse_hyperplane(args.hyperplane)
    jobs = [(t, H, args.search_bound) for t in scan_values(t_from, t_to, step, args.integral_only)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            lines = list(pool.map(_scan_one, jobs))
    else:
        lines = [_scan_one(j) for j in jobs]
    for _, line in sorted(lines, key=lambda x: x[0]):
        print(line)
    return EXIT_OK


def _run_classgroup(args) -> int:
    field = make_field(parse_rational(args.t))
    try:
        data = compute_class_group(field, _effort(args.effort))
    except EffortExceeded as exc:
        print(_dump({"schema_version": SCHEMA_VERSION, "error": "EffortExceeded", "message": str(exc)}))
        return EXIT_HYPOTHESES
    doc = data.to_json(field.t)
    doc["three_rank"] = data.three_rank
    text = _dump(doc)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_OK


def _run_verify(args) -> int:
    res = run_suite(args.suite, args.samples, args.seed)
    counters = ", ".join(f"{k}={v}" for k, v in sorted(res.counters.items()))
    if res.passed:
        print(f"suite {res.name}: pass ({res.checked} checks{'; ' + counters if counters else ''})")
        return EXIT_OK
    print(f"suite {res.name}: FAIL ({len(res.failures)} counterexamples in {res.checked} checks)")
    for f in res.failures[:10]:
        print("  " + ", ".join(f"{k}={v}" for k, v in f.items()))
    return EXIT_FALSIFIED


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cubicdescent", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    rep = sub.add_parser("report", help="descent report for one (t, H) as JSON")
    rep.add_argument("--t", required=True, help="rational parameter, e.g. -27 or 5/8")
    rep.add_argument("--hyperplane", required=True, help="a,b,c for a(x - w) + b y + c z = 0")
    rep.add_argument("--basis", help="'skew' (default: 1, alpha, 1/(1 - alpha)), 'power', or 9 rationals row by row")
    rep.add_argument("--classgroup-file", help="external class group JSON")
    rep.add_argument("--compute-classgroup", action="store_true", help="compute the class group and cross-check")
    rep.add_argument("--effort", help="low, default or high (DESCENT_EFFORT overrides)")
    rep.add_argument("--search-bound", type=int, default=DEFAULT_SEARCH_BOUND, help="naive height bound of the point search")
    rep.add_argument("--timings", action="store_true", help="add wall-clock timings (output is then not reproducible)")
    rep.set_defaults(run=_run_report)

    sc = sub.add_parser("scan", help="JSON lines of reports over a range of t")
    sc.add_argument("--t-from", required=True)
    sc.add_argument("--t-to", required=True)
    sc.add_argument("--step", default="1", help="rational step (default 1)")
    sc.add_argument("--integral-only", action="store_true", help="keep only integral t")
    sc.add_argument("--hyperplane", default="0,0,1")
    sc.add_argument("--search-bound", type=int, default=100)
    sc.add_argument("--jobs", type=int, default=1, help="worker processes")
    sc.set_defaults(run=_run_scan)

    cg = sub.add_parser("classgroup", help="class group of K_t as JSON (the external file format)")
    cg.add_argument("--t", required=True)
    cg.add_argument("--effort")
    cg.add_argument("--output", help="also write the JSON to this file")
    cg.set_defaults(run=_run_classgroup)

    ver = sub.add_parser("verify", help="run a seeded property suite")
    ver.add_argument("--suite", required=True, choices=sorted(SUITES))
    ver.add_argument("--samples", type=int, default=20)
    ver.add_argument("--seed", type=int, default=0)
    ver.set_defaults(run=_run_verify)
    return p


_VALUE_OPTIONS = {"--t", "--t-from", "--t-to", "--step", "--hyperplane", "--basis"}


def _attach_values(argv: Sequence[str]) -> list[str]:
    """Write "--t -3/2" as "--t=-3/2" so that negative fractions are not read as options."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_OPTIONS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_attach_values(argv))
    try:
        return args.run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Reducible as exc:
        print(_dump({"schema_version": SCHEMA_VERSION, "error": "Reducible", "message": str(exc)}))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
