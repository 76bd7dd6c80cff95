"""Command-line front end.

Subcommands: present, theta, rho, sq, hilbert, and the verification suites
under ``verify`` (mq1, tauseq, seq, prop-reg, chern, kcasi, topcmp,
radical).  Output is human-readable text, or the stable JSON report with
--json.  Exit codes: 0 all checks pass, 1 any failure, 2 only
pass/unresolved (resource-capped), 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .algebra import PolyParseError, format_poly, make_bo, make_bso, make_bso_top
from .groebner import ResourceLimitError
from .presentations import (
    bound_indices,
    present,
    presentation_hilbert,
    radical_equal_on_generators,
    topological_comparison_report,
    verify_bound_dichotomy,
    verify_chern_suite,
    verify_tau_sequence,
    verify_theta_sequence,
)
from .reports import Report
from .splitting import bilinear_sweep, verify_seq_theorem
from .steenrod import rho, sq, theta

USAGE_ERROR = 64

_GROUP_ALIASES = {
    "o": "O",
    "so": "SO",
    "spin": "Spin",
    "gamma+": "GammaPlus",
    "gammaplus": "GammaPlus",
    "gamma_plus": "GammaPlus",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _group(value: str) -> str:
    key = value.strip().lower()
    if key not in _GROUP_ALIASES:
        raise UsageError(
            f"unknown group {value!r}; expected one of o, so, spin, gamma+")
    return _GROUP_ALIASES[key]


def build_parser() -> _Parser:
    parser = _Parser(prog="swu", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, n_required=True):
        if n_required:
            p.add_argument("--n", type=int, required=True)
        p.add_argument("--json", action="store_true")
        p.add_argument("--timings", action="store_true")
        p.add_argument("--pair-limit", type=int, default=None)

    p = sub.add_parser("present", help="export a ring presentation")
    p.add_argument("--group", required=True)
    common(p)

    p = sub.add_parser("theta", help="expand an iterated square of u_2")
    p.add_argument("--j", type=int, required=True)
    common(p)

    p = sub.add_parser("rho", help="expand an iterated square of w_2")
    p.add_argument("--j", type=int, required=True)
    common(p)

    p = sub.add_parser("sq", help="apply a Steenrod square to a polynomial")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--expr", required=True)
    p.add_argument("--ring", default="bso", choices=("bso", "bo", "bso-top"))
    common(p)

    p = sub.add_parser("hilbert", help="Hilbert series table of a presentation")
    p.add_argument("--group", required=True)
    p.add_argument("--max-p", type=int, default=12)
    p.add_argument("--max-q", type=int, default=8)
    common(p)

    p = sub.add_parser("verify", help="run a verification suite")
    vsub = p.add_subparsers(dest="suite", required=True)

    v = vsub.add_parser("mq1", help="theta-sequence regularity, membership of "
                                    "the next theta, and the bound dichotomy")
    common(v)
    v = vsub.add_parser("tauseq", help="regularity of tau followed by the thetas")
    common(v)
    v = vsub.add_parser("seq", help="reduced Steenrod tower regular in F2[u_*] "
                                    "with twisted closed forms")
    common(v)
    v = vsub.add_parser("prop-reg", help="twisted bilinear sequences are regular")
    v.add_argument("--max-m", type=int, default=3)
    v.add_argument("--samples", type=int, default=50)
    v.add_argument("--seed", type=int, default=20250810)
    v.add_argument("--jobs", type=int, default=1)
    common(v, n_required=False)
    v = vsub.add_parser("chern", help="tau theta_j^2 as a Steenrod composite of c_2")
    v.add_argument("--max-j", type=int, default=None)
    common(v)
    v = vsub.add_parser("kcasi", help="l(n) - k(n) lies in {0, 1}")
    v.add_argument("--max", type=int, default=64)
    common(v, n_required=False)
    v = vsub.add_parser("topcmp", help="relations match the singular-cohomology side")
    common(v)
    v = vsub.add_parser("radical", help="radical of the Chern relations matches "
                                        "the pulled-back theta ideal")
    v.add_argument("--degree-bound", type=int, default=None)
    common(v)
    return parser


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _report_json(report: Report, timings: bool) -> dict:
    checks = []
    for c in report.checks:
        entry = {"id": c.id, "verdict": c.verdict, "certificate": c.certificate}
        if timings and c.wall_time_s is not None:
            entry["wall_time_s"] = c.wall_time_s
        checks.append(entry)
    return {"suite": report.suite, "parameters": report.parameters,
            "checks": checks, "exit_code": report.exit_code()}


def _render_report(report: Report, args) -> int:
    if args.json:
        _emit_json(_report_json(report, args.timings))
    else:
        lines = [f"suite: {report.suite}"]
        params = " ".join(f"{k}={v}" for k, v in report.parameters.items())
        lines.append(f"parameters: {params}")
        for c in report.checks:
            line = f"check {c.id}: {c.verdict.upper()}"
            if args.timings and c.wall_time_s is not None:
                line += f" ({c.wall_time_s:.3f}s)"
            lines.append(line)
        passed = sum(1 for c in report.checks if c.verdict == "pass")
        lines.append(f"result: {'PASS' if report.ok else 'FAIL' if report.failed else 'UNRESOLVED'}"
                     f" ({passed}/{len(report.checks)})")
        _emit("\n".join(lines))
    return report.exit_code()


def _timed_checks(report: Report, enabled: bool, start: float) -> None:
    if not enabled:
        return
    total = time.monotonic() - start
    per = total / max(len(report.checks), 1)
    for c in report.checks:
        if c.wall_time_s is None:
            c.wall_time_s = per


def _cmd_present(args) -> int:
    pres = present(_group(args.group), args.n)
    if args.json:
        _emit(pres.to_json())
        return 0
    d = pres.to_json_dict()
    lines = [f"group: {d['group']}", f"n: {d['n']}", f"base: {d['base']}"]
    lines.append("generators: " + ", ".join(
        f"{g['name']} ({g['p']},{g['q']})" for g in d["generators"]))
    if d["relations"]:
        lines.append("relations:")
        lines.extend(f"  {r}" for r in d["relations"])
    else:
        lines.append("relations: none")
    if d["adjoined"]:
        lines.append("adjoined: " + ", ".join(
            f"{g['name']} ({g['p']},{g['q']})" for g in d["adjoined"]))
    else:
        lines.append("adjoined: none")
    _emit("\n".join(lines))
    return 0


def _cmd_theta(args) -> int:
    value = theta(args.n, args.j)
    if args.json:
        _emit_json({"n": args.n, "j": args.j, "theta": format_poly(value)})
    else:
        _emit(format_poly(value))
    return 0


def _cmd_rho(args) -> int:
    value = rho(args.n, args.j)
    if args.json:
        _emit_json({"n": args.n, "j": args.j, "rho": format_poly(value)})
    else:
        _emit(format_poly(value))
    return 0


def _cmd_sq(args) -> int:
    ctx = {"bso": make_bso, "bo": make_bo, "bso-top": make_bso_top}[args.ring](args.n)
    f = ctx.parse(args.expr)
    value = sq(args.m, f)
    if args.json:
        _emit_json({"ring": ctx.name, "m": args.m, "input": format_poly(f),
                    "result": format_poly(value)})
    else:
        _emit(format_poly(value))
    return 0


def _cmd_hilbert(args) -> int:
    pres = present(_group(args.group), args.n)
    series = presentation_hilbert(pres, (args.max_p, args.max_q),
                                  pair_limit=args.pair_limit)
    num, den = series.rational_form()
    if args.json:
        _emit_json({
            "group": pres.group, "n": pres.n,
            "numerator": [list(t) for t in num],
            "denominator": [list(t) for t in den],
            "table": [[p, q, c] for (p, q), c in sorted(series.coefficients.items())],
        })
        return 0
    lines = [f"numerator: {' '.join(f'{c}@t^{p}s^{q}' for p, q, c in num)}",
             "denominator: " + " ".join(f"(1-t^{p}s^{q})" for p, q in den),
             "p\tq\tdim"]
    for (p, q), c in sorted(series.coefficients.items()):
        lines.append(f"{p}\t{q}\t{c}")
    _emit("\n".join(lines))
    return 0


def _cmd_verify(args) -> int:
    start = time.monotonic()
    if args.suite == "mq1":
        report = verify_theta_sequence(args.n, pair_limit=args.pair_limit)
    elif args.suite == "tauseq":
        report = verify_tau_sequence(args.n, pair_limit=args.pair_limit)
    elif args.suite == "seq":
        report = verify_seq_theorem(args.n, pair_limit=args.pair_limit)
    elif args.suite == "prop-reg":
        report = bilinear_sweep(args.max_m, args.samples, args.seed,
                                jobs=args.jobs, pair_limit=args.pair_limit)
    elif args.suite == "chern":
        report = verify_chern_suite(args.n, args.max_j)
    elif args.suite == "kcasi":
        report = verify_bound_dichotomy(args.max)
    elif args.suite == "topcmp":
        report = topological_comparison_report(args.n)
    elif args.suite == "radical":
        report = radical_equal_on_generators(args.n, args.degree_bound,
                                             pair_limit=args.pair_limit)
    else:  # pragma: no cover - argparse keeps us honest
        raise UsageError(f"unknown suite {args.suite!r}")
    _timed_checks(report, args.timings, start)
    return _render_report(report, args)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "present":
            return _cmd_present(args)
        if args.command == "theta":
            return _cmd_theta(args)
        if args.command == "rho":
            return _cmd_rho(args)
        if args.command == "sq":
            return _cmd_sq(args)
        if args.command == "hilbert":
            return _cmd_hilbert(args)
        if args.command == "verify":
            return _cmd_verify(args)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except PolyParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except ResourceLimitError as exc:
        report = Report("resource", {})
        report.add_unresolved("resource-limit", {"reason": str(exc)})
        print(f"resource limit exceeded: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
