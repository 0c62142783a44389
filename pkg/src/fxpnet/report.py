"""Precision-sweep orchestration and the canonical JSON report."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

from . import __version__
from .degree_stats import degree_histogram, loglog_fit
from .fxp_map import MAX_BITS, ControlParameter, QuantizationMode
from .netio import ParseError, parse_mu, write_json
from .prop_verify import (
    ALWAYS_ASSERTED,
    CLAIM_IDS,
    CONJECTURES,
    clear_caches,
    failed_claims,
    run_checks,
)
from .state_net import build_network, summarize

OUT_DIR_ENV = "FXPNET_OUT_DIR"
EXIT_OK, EXIT_USAGE, EXIT_ASSERTION = 0, 1, 2


def parse_n_range(spec: str | int) -> tuple[int, int]:
    """``"12"`` -> (12, 12); ``"5..20"`` -> (5, 20)."""
    text = str(spec).strip()
    try:
        if ".." in text:
            lo, hi = (int(p) for p in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise ParseError(f"bad precision range {spec!r}; use N or A..B") from None
    if lo > hi:
        raise ParseError(f"empty precision range {spec!r}")
    return lo, hi


def resolve_out(path: str | Path | None, default_name: str) -> Path:
    """Relative paths (and the default name) land under $FXPNET_OUT_DIR when set."""
    base = os.environ.get(OUT_DIR_ENV)
    p = Path(path) if path else Path(default_name)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


@dataclass
class RunConfig:
    mu_spec: str
    n_range: tuple[int, int]
    mode: QuantizationMode = QuantizationMode.ROUND
    checks: tuple[str, ...] = CLAIM_IDS
    k_min: int = 1
    m_max: int = 16
    assert_conjectures: bool = False
    out: str | None = None
    jobs: int = 1
    mu: ControlParameter = field(init=False)

    def __post_init__(self) -> None:
        self.mode = QuantizationMode(self.mode)
        self.mu = parse_mu(self.mu_spec)
        lo, hi = self.n_range
        if lo < self.mu.exponent or hi > MAX_BITS:
            raise ParseError(
                f"precision range {lo}..{hi} must lie within [{self.mu.exponent}, {MAX_BITS}]"
            )
        unknown = set(self.checks) - set(CLAIM_IDS)
        if unknown:
            raise ParseError(f"unknown checks {sorted(unknown)}; choose from {CLAIM_IDS}")
        if self.k_min < 1 or self.m_max < 1:
            raise ParseError("--k-min and --m-max must be >= 1")

    @property
    def ns(self) -> list[int]:
        return list(range(self.n_range[0], self.n_range[1] + 1))

    @property
    def asserted(self) -> frozenset[str]:
        return ALWAYS_ASSERTED | CONJECTURES if self.assert_conjectures else ALWAYS_ASSERTED

    def describe(self) -> dict[str, Any]:
        return {
            "mu_spec": self.mu_spec,
            "n_range": list(self.n_range),
            "quant": self.mode.value,
            "checks": list(self.checks),
            "k_min": self.k_min,
            "m_max": self.m_max,
            "assert_conjectures": self.assert_conjectures,
        }


def mu_record(mu: ControlParameter) -> dict[str, Any]:
    return {
        "raw": f"{mu.raw_numerator}/2^{mu.raw_exponent}",
        "normalized": str(mu),
        "numerator": mu.numerator,
        "exponent": mu.exponent,
    }


def network_section(mu: ControlParameter, n: int, mode: QuantizationMode, k_min: int) -> dict:
    net = build_network(mu, n, mode)
    summary = summarize(net)
    dist = degree_histogram(net)
    fit = loglog_fit(dist, k_min)
    return {
        "n": n,
        "node_count": net.size,
        "summary": {
            "component_count": summary.component_count,
            "cycle_count": summary.cycle_count,
            "components": [
                {"id": c.id, "node_count": c.node_count, "cycle_length": c.cycle_length,
                 "cycle": c.cycle, "max_tail_length": c.max_tail_length}
                for c in summary.components
            ],
            "self_loop_nodes": summary.self_loop_nodes,
            "max_in_degree_node": summary.max_in_degree_node,
            "max_in_degree": summary.max_in_degree,
        },
        "degree_distribution": dist.counts,
        "fit": asdict(fit),
    }


def _section_task(args: tuple) -> dict:
    return network_section(*args)


def report_path(config: RunConfig) -> Path:
    mu, (lo, hi) = config.mu, config.n_range
    return resolve_out(config.out, f"report_mu{mu.numerator}_{mu.exponent}_n{lo}-{hi}.json")


def run_report(config: RunConfig, write: bool = True) -> tuple[dict[str, Any], int]:
    """Run the full battery; return the report document and the exit code."""
    doc: dict[str, Any] = {
        "tool": "fxpnet",
        "tool_version": __version__,
        "completed": False,
        "config": config.describe(),
        "mu": mu_record(config.mu),
        "notes": [
            "degree fits: ordinary least squares on (ln k, ln count), zero counts skipped",
            "P1, P2, P3, C2 and D1-D6 use round quantization; C1 uses the configured mode",
        ],
        "networks": [],
        "properties": [],
    }
    out = report_path(config)
    try:
        tasks = [(config.mu, n, config.mode, config.k_min) for n in config.ns]
        if config.jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=config.jobs) as pool:
                doc["networks"] = list(pool.map(_section_task, tasks))
        else:
            doc["networks"] = [_section_task(t) for t in tasks]
        reports = run_checks(config.mu, config.ns, config.checks, config.m_max, config.mode)
        doc["properties"] = [r.to_dict() for r in reports]
        failed = failed_claims(reports, config.asserted)
        doc["asserted_claims"] = sorted(config.asserted & set(config.checks))
        doc["failed_assertions"] = failed
        doc["completed"] = True
    finally:
        clear_caches()
        if write:
            write_json(doc, out)
    return doc, EXIT_ASSERTION if failed else EXIT_OK
