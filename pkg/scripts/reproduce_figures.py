"""Regenerate the data behind the network drawings and in-degree plots.

Writes, under the output directory (default ./results):
  networks/   DOT + GraphML for mu = 121/2^5 at n = 5, 6, 7, 12
  degrees/    degree,count CSV for n = 5..20
  fits.json   log-log fit per n
  report.json full claim battery for n = 5..18

    python scripts/reproduce_figures.py [--out results] [--n-max 20]
"""
from __future__ import annotations

import argparse
from dataclasses import asdict
from pathlib import Path

from fxpnet import build_network
from fxpnet.degree_stats import degree_histogram, loglog_fit
from fxpnet.netio import export_degree_csv, export_dot, export_graphml, parse_mu, write_json
from fxpnet.report import RunConfig, run_report


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results")
    ap.add_argument("--mu", default="121/2^5")
    ap.add_argument("--n-max", type=int, default=20)
    ap.add_argument("--report-n-max", type=int, default=18)
    args = ap.parse_args()

    root = Path(args.out)
    (root / "networks").mkdir(parents=True, exist_ok=True)
    (root / "degrees").mkdir(parents=True, exist_ok=True)
    mu = parse_mu(args.mu)

    for n in (5, 6, 7, 12):
        net = build_network(mu, n)
        export_dot(net, root / "networks" / f"n{n}.dot")
        export_graphml(net, root / "networks" / f"n{n}.graphml")
        print(f"network n={n}: {net.size} nodes")

    fits = []
    for n in range(mu.exponent, args.n_max + 1):
        dist = degree_histogram(build_network(mu, n))
        export_degree_csv(dist, root / "degrees" / f"n{n}.csv")
        fit = loglog_fit(dist)
        fits.append(asdict(fit))
        print(f"degrees n={n:2d}: max k={max(dist.counts):4d}  slope={fit.slope:+.3f}  "
              f"r2={fit.r_squared:.3f}")
    write_json(fits, root / "fits.json")

    cfg = RunConfig(args.mu, (mu.exponent, args.report_n_max), out=str(root / "report.json"))
    doc, code = run_report(cfg)
    for p in doc["properties"]:
        if isinstance(p["n"], list):
            print(f"{p['claim_id']} n={p['n'][0]}..{p['n'][1]}: holds={p['holds']} "
                  f"({p['violation_count']} violations)")
    print(f"report written to {root / 'report.json'} (exit code {code})")


if __name__ == "__main__":
    main()
