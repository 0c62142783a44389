"""Command-line front end: ``fxpnet build|degrees|verify|report``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .degree_stats import degree_histogram, loglog_fit
from .fxp_map import DomainError, QuantizationMode
from .netio import ParseError, dumps_json, export_degree_csv, export_dot, export_graphml, write_json
from .prop_verify import CLAIM_IDS, failed_claims, run_checks
from .report import (
    EXIT_ASSERTION,
    EXIT_OK,
    EXIT_USAGE,
    RunConfig,
    mu_record,
    parse_n_range,
    report_path,
    resolve_out,
    run_report,
)
from .state_net import build_network

_EXT = {"dot": "dot", "graphml": "graphml", "csv": "csv", "json": "json"}


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mu", required=True, help="control parameter, e.g. 121/2^5")
    common.add_argument("--n", required=True, help="precision N or range A..B")
    common.add_argument("--quant", choices=[m.value for m in QuantizationMode],
                        default="round")
    common.add_argument("--out", help="output path; may contain {n} for per-n files")
    common.add_argument("--k-min", type=int, default=1)
    common.add_argument("--m-max", type=int, default=16)
    common.add_argument("--assert-conjectures", action="store_true")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")

    p = argparse.ArgumentParser(prog="fxpnet", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    b = sub.add_parser("build", parents=[common], help="emit DOT or GraphML networks")
    b.add_argument("--format", choices=["dot", "graphml"], default="dot")
    d = sub.add_parser("degrees", parents=[common], help="emit in-degree CSV")
    d.add_argument("--format", choices=["csv"], default="csv")
    d.add_argument("--fit", action="store_true", help="print the log-log fit as JSON")
    v = sub.add_parser("verify", parents=[common], help="run selected property checks")
    v.add_argument("--format", choices=["json"], default="json")
    v.add_argument("--checks", default=",".join(CLAIM_IDS),
                   help="comma list from " + ",".join(CLAIM_IDS))
    r = sub.add_parser("report", parents=[common], help="full experiment battery as JSON")
    r.add_argument("--format", choices=["json"], default="json")
    return p


def _config(args: argparse.Namespace, checks: tuple[str, ...] = CLAIM_IDS) -> RunConfig:
    return RunConfig(
        mu_spec=args.mu,
        n_range=parse_n_range(args.n),
        mode=args.quant,
        checks=checks,
        k_min=args.k_min,
        m_max=args.m_max,
        assert_conjectures=args.assert_conjectures,
        out=args.out,
        jobs=args.jobs,
    )


def _per_n_path(cfg: RunConfig, n: int, stem: str, ext: str) -> Path:
    multi = cfg.n_range[0] != cfg.n_range[1]
    if cfg.out and "{n}" in cfg.out:
        return resolve_out(cfg.out.format(n=n), "")
    if cfg.out and multi:
        raise UsageError("--out needs a {n} placeholder when --n spans several precisions")
    mu = cfg.mu
    return resolve_out(cfg.out, f"{stem}_mu{mu.numerator}_{mu.exponent}_n{n}.{ext}")


def cmd_build(args, cfg: RunConfig) -> int:
    export = export_dot if args.format == "dot" else export_graphml
    for n in cfg.ns:
        path = _per_n_path(cfg, n, "network", _EXT[args.format])
        export(build_network(cfg.mu, n, cfg.mode), path)
        print(path)
    return EXIT_OK


def cmd_degrees(args, cfg: RunConfig) -> int:
    fits = []
    for n in cfg.ns:
        dist = degree_histogram(build_network(cfg.mu, n, cfg.mode))
        path = _per_n_path(cfg, n, "degrees", "csv")
        export_degree_csv(dist, path)
        print(path, file=sys.stderr if args.fit else sys.stdout)
        if args.fit:
            fit = loglog_fit(dist, cfg.k_min)
            fits.append({"n": n, **fit.__dict__})
    if args.fit:
        sys.stdout.write(dumps_json(fits))
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    reports = run_checks(cfg.mu, cfg.ns, cfg.checks, cfg.m_max, cfg.mode)
    failed = failed_claims(reports, cfg.asserted)
    doc = {"mu": mu_record(cfg.mu), "config": cfg.describe(),
           "properties": [r.to_dict() for r in reports], "failed_assertions": failed}
    if cfg.out:
        print(write_json(doc, resolve_out(cfg.out, "")))
    else:
        sys.stdout.write(dumps_json(doc))
    for r in reports:
        tag = "ok" if r.holds else ("FAIL" if r.claim_id in cfg.asserted else "false")
        print(f"{r.claim_id} n={r.n}: {tag} ({len(r.violations)} violations, "
              f"{r.checked_count} checked)", file=sys.stderr)
    return EXIT_ASSERTION if failed else EXIT_OK


def cmd_report(args, cfg: RunConfig) -> int:
    path = report_path(cfg)
    try:
        _, code = run_report(cfg)
    except Exception as exc:  # partial report already written with completed=false
        print(f"fxpnet: report failed: {exc}; partial results in {path}", file=sys.stderr)
        return EXIT_USAGE
    print(path)
    return code


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        checks = CLAIM_IDS
        if args.command == "verify":
            checks = tuple(c.strip().upper() for c in args.checks.split(",") if c.strip())
        cfg = _config(args, checks)
        handler = {"build": cmd_build, "degrees": cmd_degrees,
                   "verify": cmd_verify, "report": cmd_report}[args.command]
        return handler(args, cfg)
    except (ParseError, DomainError, UsageError, OSError) as exc:
        print(f"fxpnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
