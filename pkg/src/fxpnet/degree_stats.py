"""In-degree histograms and log-log power-law fits."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .fxp_map import ControlParameter, DomainError, QuantizationMode
from .state_net import StateNetwork, build_network, in_degrees

MIN_FIT_POINTS = 3


@dataclass(frozen=True)
class DegreeDistribution:
    n: int
    counts: dict[int, int]

    @property
    def node_count(self) -> int:
        return sum(self.counts.values())

    @property
    def edge_count(self) -> int:
        return sum(k * c for k, c in self.counts.items())


@dataclass(frozen=True)
class PowerLawFit:
    """OLS line through (ln k, ln count). ``available`` is False below 3 points."""

    slope: float
    intercept: float
    r_squared: float
    k_min: int
    points_used: int
    available: bool = True
    n: int | None = None


def histogram_from_successor(successor: np.ndarray) -> dict[int, int]:
    deg = np.bincount(successor, minlength=len(successor))
    ks, cs = np.unique(deg, return_counts=True)
    return {int(k): int(c) for k, c in zip(ks, cs)}


def degree_histogram(net: StateNetwork) -> DegreeDistribution:
    ks, cs = np.unique(in_degrees(net), return_counts=True)
    return DegreeDistribution(net.n, {int(k): int(c) for k, c in zip(ks, cs)})


def loglog_fit(dist: DegreeDistribution | Mapping[int, int], k_min: int = 1) -> PowerLawFit:
    if k_min < 1:
        raise DomainError(f"k_min must be >= 1, got {k_min}")
    counts = dist.counts if isinstance(dist, DegreeDistribution) else dict(dist)
    n = dist.n if isinstance(dist, DegreeDistribution) else None
    pts = sorted((k, c) for k, c in counts.items() if k >= k_min and c > 0)
    if len(pts) < MIN_FIT_POINTS:
        return PowerLawFit(math.nan, math.nan, math.nan, k_min, len(pts), available=False, n=n)
    x = np.log(np.array([k for k, _ in pts], dtype=float))
    y = np.log(np.array([c for _, c in pts], dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return PowerLawFit(float(slope), float(intercept), min(max(r2, 0.0), 1.0), k_min,
                       len(pts), n=n)


def fit_trend(
    mu: ControlParameter,
    n_range: Iterable[int],
    k_min: int = 1,
    mode: QuantizationMode | str = QuantizationMode.ROUND,
) -> list[PowerLawFit]:
    return [loglog_fit(degree_histogram(build_network(mu, n, mode)), k_min)
            for n in sorted(set(n_range))]
