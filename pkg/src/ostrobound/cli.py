"""Command-line front end.

Exit codes: 0 success (bound holds), 1 usage or validation error,
2 unsupported branch / undefined tau / hypothesis not satisfied,
3 a bound or verification check failed.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

from . import report as rpt
from .errors import DomainError, OracleFailure, UnsupportedBranch, ZeroEndpointDerivative
from .funcspace import ConvexityOrder, Interval, catalog, get_function
from .ostrowski import VERIFY_TOL, integral_of, verify_inequality
from .pdfapp import get_distribution, pdf_bound_thm3, pdf_bound_thm4
from .psibounds import HolderPair, Tau, bound_corollary_M, psi1, psi2
from .quadrature import classical_error_bound, em_bound_prop1, em_bound_prop2, midpoint_sum, uniform_partition
from .sweeps import SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_BRANCH, EXIT_FAILED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, suppress: bool):
    d = argparse.SUPPRESS if suppress else None
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json",
                     default=d if suppress else "human", help="emit a JSON report")
    fmt.add_argument("--csv", dest="format", action="store_const", const="csv",
                     default=d if suppress else "human", help="emit CSV rows")
    p.add_argument("--out", default=d, help="write the report to this path instead of stdout")
    p.add_argument("--tol", type=float, default=d if suppress else VERIFY_TOL,
                   help="verification tolerance on the margin (default 1e-9)")


def _problem_args(p):
    p.add_argument("--fn", required=True, help="catalog function id (see `catalog`)")
    p.add_argument("--a", type=float, help="left endpoint (default: the function's interval)")
    p.add_argument("--b", type=float, help="right endpoint")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ostrobound", description="Ostrowski-type bounds for s-logarithmically convex derivatives.")
    _common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="evaluate one bound and compare it with the true deviation")
    _common(p, suppress=True)
    p.add_argument("variant", choices=("thm1", "thm2", "corM", "mid"))
    p.add_argument("--fn", help="catalog function id (not used by corM)")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--x", type=float, help="evaluation point (default: midpoint)")
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--q", type=float, help="Hölder exponent q > 1 (required for thm2)")
    p.add_argument("--M", type=float, help="derivative cap for corM")
    p.add_argument("--grid", type=int, default=101, help="hypothesis grid size")
    p.add_argument("--reflect", action="store_true", help="mirror the problem when tau > 1")

    p = sub.add_parser("verify", help="run verification suites")
    _common(p, suppress=True)
    p.add_argument("--suite", default="default", choices=("default", *SUITES))
    p.add_argument("--fn", help="restrict function-based suites to one catalog id")
    p.add_argument("--grid", type=int, help="number of tau values for the psi-oracle suite")
    p.add_argument("--records", action="store_true", help="include every record in JSON output")

    p = sub.add_parser("integrate", help="composite midpoint rule with error certificates")
    _common(p, suppress=True)
    _problem_args(p)
    p.add_argument("--n", type=int, required=True, help="number of uniform subintervals")
    p.add_argument("--bound", choices=("prop1", "prop2", "none"), default="none")
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--q", type=float, default=2.0)
    p.add_argument("--classical-K", dest="classical_K", type=float, help="sup |f''| for the classical bound")
    p.add_argument("--reflect", action="store_true")

    p = sub.add_parser("pdf", help="CDF versus expectation bound for a built-in density")
    _common(p, suppress=True)
    p.add_argument("--dist", required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--q", type=float, help="use the Hölder form with this q")
    p.add_argument("--grid", type=int, default=101)

    p = sub.add_parser("catalog", help="list built-in functions")
    _common(p, suppress=True)
    return parser


def _interval(args, fn=None) -> Interval:
    default = fn.default_interval if fn is not None else Interval(0.0, 1.0)
    a = default.a if args.a is None else args.a
    b = default.b if args.b is None else args.b
    return Interval(a, b)


def _fn(fn_id):
    if fn_id is None:
        raise UsageError("--fn is required")
    try:
        return get_function(fn_id)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def _holder(q):
    return None if q is None else HolderPair.from_q(q)


def _emit(args, report: dict, csv_rows=None, human=None):
    if args.format == "json":
        text = rpt.dumps(report)
    elif args.format == "csv":
        text = rpt.to_csv(csv_rows or [])
    else:
        text = human if human is not None else _human(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(v):
    if isinstance(v, float):
        return "nan" if not math.isfinite(v) else f"{v:.12g}"
    return str(v)


def _human(report: dict) -> str:
    lines = []
    for key, val in report.items():
        if key == "timings" or isinstance(val, (list, dict)) and key != "params":
            continue
        if key == "params":
            val = " ".join(f"{k}={_fmt(v)}" for k, v in val.items() if v is not None)
        lines.append(f"{key:>14}: {_fmt(val) if val is not None else '-'}")
    return "\n".join(lines) + "\n"


def cmd_bound(args) -> int:
    t0 = time.perf_counter()
    s = ConvexityOrder(args.s).s
    pq = _holder(args.q)
    if args.variant == "thm2" and pq is None:
        raise UsageError("thm2 needs --q")
    params = {"variant": args.variant, "fn": args.fn, "a": None, "b": None, "x": None, "s": s,
              "q": None if pq is None else pq.q}

    if args.variant == "corM":
        if args.M is None:
            raise UsageError("corM needs --M")
        iv = _interval(args)
        x = iv.midpoint if args.x is None else iv.check_point(args.x)
        params.update(a=iv.a, b=iv.b, x=x, M=args.M)
        rhs = bound_corollary_M(args.M, iv, x, s, pq)
        tau = Tau.classify(args.M)
        psi = (psi1(tau, s, iv, x) if pq is None else psi2(tau, s, pq, iv, x)).value
        report = rpt.make_report("bound", params, tau=tau.value, branch=tau.branch.value, psi=psi, rhs=rhs,
                                 timings={"total_s": time.perf_counter() - t0})
        row = {"command": "bound", "a": iv.a, "b": iv.b, "x": x, "s": s, "q": params["q"],
               "tau": tau.value, "branch": tau.branch.value, "psi": psi, "rhs": rhs}
        _emit(args, report, [row])
        return EXIT_OK

    fn = _fn(args.fn)
    iv = _interval(args, fn)
    x = iv.midpoint if (args.x is None or args.variant == "mid") else iv.check_point(args.x)
    params.update(a=iv.a, b=iv.b, x=x)
    rec = verify_inequality(fn, iv, x, s, pq, grid_n=args.grid, tol=args.tol, reflect=args.reflect)
    report = rpt.report_from_record("bound", params, rec, {"total_s": time.perf_counter() - t0},
                                    reflected=rec.reflected)
    _emit(args, report, [rpt.record_fields(rec, "bound")])
    if not rec.hypothesis_ok:
        print(f"hypothesis H(s={s:g}) fails for {fn.id} on [{iv.a:g}, {iv.b:g}]; bound not guaranteed",
              file=sys.stderr)
        return EXIT_BRANCH
    return EXIT_OK if rec.holds else EXIT_FAILED


def cmd_verify(args) -> int:
    t0 = time.perf_counter()
    if args.fn is not None:
        _fn(args.fn)
    kwargs = {"fn_id": args.fn, "grid": args.grid, "tol": args.tol}
    rep = run_suite(args.suite, **kwargs)
    params = {"suite": args.suite, "fn": args.fn, "grid": args.grid, "tol": args.tol}
    checks = [{"name": c.name, "passed": c.passed, "value": c.value, "limit": c.limit, "detail": c.detail}
              for c in rep.checks]
    extra = {"summary": rep.summary, "checks": checks}
    if args.records:
        extra["records"] = [rpt.record_fields(r, "verify") for r in rep.records]
    report = rpt.make_report("verify", params, margin=rep.worst_margin, holds=rep.ok,
                             timings={"total_s": time.perf_counter() - t0}, **extra)
    human = [f"suite {args.suite}: " + ", ".join(f"{k}={v}" for k, v in rep.summary.items())]
    if rep.records:
        human.append(f"worst margin (hypothesis satisfied): {_fmt(rep.worst_margin)}")
    for c in rep.checks:
        human.append(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.value:.3g} (limit {c.limit:.3g})")
    _emit(args, report, [rpt.record_fields(r, "verify") for r in rep.records], "\n".join(human) + "\n")
    return EXIT_OK if rep.ok else EXIT_FAILED


def cmd_integrate(args) -> int:
    t0 = time.perf_counter()
    fn = _fn(args.fn)
    iv = _interval(args, fn)
    d = uniform_partition(iv, args.n)
    s = ConvexityOrder(args.s).s
    params = {"fn": fn.id, "a": iv.a, "b": iv.b, "n": args.n, "bound": args.bound, "s": s,
              "q": args.q if args.bound == "prop2" else None, "classical_K": args.classical_K}
    approx = midpoint_sum(fn, d)
    extra = {"approx": approx}
    cert = None
    if args.bound == "prop1":
        cert = em_bound_prop1(fn, d, s, reflect=args.reflect)
    elif args.bound == "prop2":
        cert = em_bound_prop2(fn, d, s, HolderPair.from_q(args.q), reflect=args.reflect)
    if cert is not None:
        true_error, integral = cert.true_error, cert.integral
        extra["certificate"] = cert.bound
        extra["weighted_certificate"] = cert.weighted_bound
        extra["hypothesis_ok"] = cert.hypothesis_ok
        extra["per_interval"] = [
            {"a": t.interval.a, "b": t.interval.b, "tau": t.tau, "branch": t.branch, "psi": t.psi,
             "term": t.term, "hypothesis_ok": t.hypothesis_ok, "reflected": t.reflected}
            for t in cert.per_interval
        ]
        oracle_err = cert.oracle_err
    else:
        integral, oracle_err = integral_of(fn, iv)
        true_error = integral - approx
    extra["integral"] = integral
    extra["true_error"] = true_error
    rhs = cert.bound if cert is not None else None
    if args.classical_K is not None:
        extra["classical_bound"] = classical_error_bound(args.classical_K, d)
        if rhs is None:
            rhs = extra["classical_bound"]
    lhs = abs(true_error)
    margin = None if rhs is None else rhs - lhs
    holds = None if rhs is None else margin >= -(args.tol + oracle_err)
    report = rpt.make_report("integrate", params, lhs=lhs, rhs=rhs, margin=margin, holds=holds,
                             oracle_err=oracle_err, timings={"total_s": time.perf_counter() - t0}, **extra)
    row = {"command": "integrate", "fn": fn.id, "a": iv.a, "b": iv.b, "s": s, "q": params["q"],
           "lhs": lhs, "rhs": rhs, "margin": margin, "holds": holds, "oracle_err": oracle_err}
    _emit(args, report, [row])
    if cert is not None and not cert.hypothesis_ok:
        print("hypothesis fails on at least one subinterval; certificate not guaranteed", file=sys.stderr)
        return EXIT_BRANCH
    return EXIT_OK if holds in (None, True) else EXIT_FAILED


def cmd_pdf(args) -> int:
    t0 = time.perf_counter()
    try:
        dist = get_distribution(args.dist)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    s = ConvexityOrder(args.s).s
    pq = _holder(args.q)
    rec = (pdf_bound_thm3(dist, args.x, s, grid_n=args.grid, tol=args.tol) if pq is None
           else pdf_bound_thm4(dist, args.x, s, pq, grid_n=args.grid, tol=args.tol))
    params = {"dist": dist.id, "a": dist.support.a, "b": dist.support.b, "x": rec.x, "s": s,
              "q": None if pq is None else pq.q}
    cdf_x = float(dist.cdf(rec.x))
    report = rpt.report_from_record("pdf", params, rec, {"total_s": time.perf_counter() - t0},
                                    expectation=dist.expectation, cdf_x=cdf_x)
    _emit(args, report, [rpt.record_fields(rec, "pdf")])
    if not rec.hypothesis_ok:
        print(f"hypothesis H(s={s:g}) fails for density {dist.id}; bound not guaranteed", file=sys.stderr)
        return EXIT_BRANCH
    return EXIT_OK if rec.holds else EXIT_FAILED


def cmd_catalog(args) -> int:
    entries = []
    for fn in catalog():
        entries.append({
            "id": fn.id, "a": fn.default_interval.a, "b": fn.default_interval.b,
            "description": fn.description, "claims": sorted(str(t) for t in fn.claimed_classes),
            "excluded": fn.excluded,
        })
    report = rpt.make_report("catalog", {}, entries=entries)
    human = "\n".join(
        f"{e['id']:<10} [{e['a']:g}, {e['b']:g}]  {e['description']}"
        + (f"  (excluded: {e['excluded']})" if e["excluded"] else "")
        for e in entries
    ) + "\n"
    rows = [{"command": "catalog", "fn": e["id"], "a": e["a"], "b": e["b"]} for e in entries]
    _emit(args, report, rows, human)
    return EXIT_OK


COMMANDS = {"bound": cmd_bound, "verify": cmd_verify, "integrate": cmd_integrate, "pdf": cmd_pdf,
            "catalog": cmd_catalog}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UnsupportedBranch as exc:
        print("error: unsupported branch τ>1; try --reflect", file=sys.stderr)
        print(f"  detail: {exc}", file=sys.stderr)
        return EXIT_BRANCH
    except ZeroEndpointDerivative as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BRANCH
    except (DomainError, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OracleFailure as exc:
        print(f"error: oracle integration failed: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
