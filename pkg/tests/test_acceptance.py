"""Exit criteria of the build. One test per criterion; tolerances are exact unless noted."""
import json
import subprocess
import sys
import textwrap
import time

import numpy as np
import pytest

from conftest import MATRIX_MUS, MODES
from fxpnet import ControlParameter, build_network, find_cycles, in_degrees, logistic_step
from fxpnet.cli import main
from fxpnet.degree_stats import DegreeDistribution, degree_histogram, loglog_fit
from fxpnet.netio import (
    export_degree_csv,
    export_dot,
    export_graphml,
    read_degree_csv,
    read_dot,
    read_graphml,
    validate_graphml,
)
from fxpnet.prop_verify import (
    check_c1_collision_distance,
    check_c2_component_count,
    check_discussion_claims,
    check_p1_even,
    check_p2_odd,
)
from fxpnet.state_net import tail_lengths, weak_components
from oracles import (
    F_oracle,
    cycles_oracle,
    flood_components,
    in_degree_oracle,
    successor_oracle,
    tails_oracle,
)

MU = ControlParameter(121, 5)


def matrix(max_n):
    for num, exp in MATRIX_MUS:
        mu = ControlParameter(num, exp)
        for n in range(mu.exponent, max_n + 1):
            for mode in MODES:
                yield mu, n, mode


@pytest.fixture(scope="module")
def matrix_networks():
    return [build_network(mu, n, mode) for mu, n, mode in matrix(16)]


@pytest.mark.criterion("1 exactness oracle: logistic_step == rational oracle, n <= 10")
def test_c01_exactness_oracle():
    cases = list(matrix(10))
    expected = {(mu, n, mode): successor_oracle(mu.numerator, mu.exponent, n, mode)
                for mu, n, mode in cases}
    t0 = time.perf_counter()
    got = {(mu, n, mode): [logistic_step(i, mu, n, mode) for i in range((1 << n) + 1)]
           for mu, n, mode in cases}
    elapsed = time.perf_counter() - t0
    assert got == expected
    assert elapsed < 1.0, f"{elapsed:.2f}s"


@pytest.mark.criterion("2 Property 1 (even labels): zero violations, n 5..16")
def test_c02_property1():
    t0 = time.perf_counter()
    reports = [check_p1_even(MU, n) for n in range(5, 17)]
    elapsed = time.perf_counter() - t0
    assert all(r.holds for r in reports), [r.violations[:3] for r in reports if not r.holds]
    assert [r.checked_count for r in reports] == [(1 << n) + 1 for n in range(5, 17)]
    assert elapsed < 5.0


@pytest.mark.criterion("3 Property 2 (odd labels): zero violations, n 5..16")
def test_c03_property2():
    t0 = time.perf_counter()
    reports = [check_p2_odd(MU, n) for n in range(5, 17)]
    elapsed = time.perf_counter() - t0
    assert all(r.holds for r in reports), [r.violations[:3] for r in reports if not r.holds]
    assert [r.checked_count for r in reports] == [1 << n for n in range(5, 17)]
    assert elapsed < 5.0


@pytest.mark.criterion("4 structural theorem: cycles == components, sizes and in-degrees sum")
def test_c04_structural(matrix_networks):
    for net in matrix_networks:
        comps = weak_components(net)
        assert len(find_cycles(net)) == len(comps)
        assert sum(c.node_count for c in comps) == (1 << net.n) + 1
        assert int(in_degrees(net).sum()) == (1 << net.n) + 1


@pytest.mark.criterion("5 symmetry: F_n(i) == F_n(2^n - i) over the matrix")
def test_c05_symmetry(matrix_networks):
    for net in matrix_networks:
        assert np.array_equal(net.successor, net.successor[::-1])


@pytest.mark.criterion("6 oracle graph equivalence for n <= 10")
def test_c06_oracle_equivalence(matrix_networks):
    checked = 0
    for net in matrix_networks:
        if net.n > 10:
            continue
        succ = successor_oracle(net.mu.numerator, net.mu.exponent, net.n, net.mode.value)
        assert net.successor.tolist() == succ
        comps = weak_components(net)
        oracle_comps = flood_components(succ)
        assert sorted(c.node_count for c in comps) == sorted(len(c) for c in oracle_comps)
        by_cycle = {c.cycle[0]: c.node_count for c in comps}
        for oc in oracle_comps:
            (cyc,) = [c for c in cycles_oracle(succ) if c[0] in oc]
            assert by_cycle[min(cyc)] == len(oc)
        assert sorted(map(tuple, find_cycles(net))) == sorted(
            tuple(c[c.index(min(c)):] + c[:c.index(min(c))]) for c in cycles_oracle(succ))
        assert tail_lengths(net).tolist() == tails_oracle(succ)
        assert in_degrees(net).tolist() == in_degree_oracle(succ)
        checked += 1
    assert checked == sum(1 for _, n, _ in matrix(10))


@pytest.mark.criterion("7 conjecture evidence: C1 and C2 exhaustive, n 5..18, < 60 s")
def test_c07_conjectures():
    t0 = time.perf_counter()
    c1 = [check_c1_collision_distance(MU, n) for n in range(5, 19)]
    c2 = check_c2_component_count(MU, range(5, 19))
    elapsed = time.perf_counter() - t0
    for n, r in zip(range(5, 19), c1):
        size = (1 << n) + 1
        assert r.checked_count == size * (size - 1) // 2
        assert r.holds == (not r.violations)
    assert c2.checked_count == 14
    assert set(c2.data["component_counts"]) == {str(n) for n in range(5, 19)}
    print("C1 holds per n:", [r.holds for r in c1], "C2 counts:", c2.data["component_counts"])
    assert elapsed < 60.0


def _d_n_oracle(n):
    # argmax of in-degree from the rational oracle; symmetry halves the work
    half = 1 << (n - 1)
    deg = {}
    for i in range(half + 1):
        v = F_oracle(i, 121, 5, n)
        deg[v] = deg.get(v, 0) + (1 if i in (0, half) else 2)
    deg[0] += 1  # node 2^n
    best = max(deg.values())
    return min(v for v, k in deg.items() if k == best)


@pytest.mark.criterion("8 discussion claims D1-D6, n 5..18; D2 holds; D5 vs derived D_n")
def test_c08_discussion_claims():
    reports = {r.claim_id: r for r in check_discussion_claims(MU, range(5, 19))}
    assert list(reports) == ["D1", "D2", "D3", "D4", "D5", "D6"]
    assert reports["D2"].holds and reports["D2"].checked_count > 0
    derived = {str(n): _d_n_oracle(n) for n in range(5, 19)}
    assert reports["D5"].data["D_n"] == derived
    expected_d5 = all(derived[str(n + 1)] - 2 * derived[str(n)] in (-1, 0, 1)
                      for n in range(5, 18))
    assert reports["D5"].holds == expected_d5
    print("D-claim verdicts:", {k: r.holds for k, r in reports.items()})


@pytest.mark.criterion("9 scale-free reproduction at n = 18 plus synthetic slope recovery")
def test_c09_scale_free():
    t0 = time.perf_counter()
    dist = degree_histogram(build_network(MU, 18))
    assert dist.node_count == dist.edge_count == (1 << 18) + 1
    fit = loglog_fit(dist, 1)
    assert fit.available and fit.slope < 0
    for gamma in (1.5, 2.0, 3.0):
        synth = DegreeDistribution(0, {k: round(1e6 * k**-gamma) for k in range(1, 65)})
        assert abs(loglog_fit(synth).slope + gamma) <= 0.05
    assert time.perf_counter() - t0 < 10.0


@pytest.mark.criterion("10 export round-trips (DOT, GraphML + schema, CSV)")
def test_c10_exports(tmp_path):
    for n in (5, 6, 12):
        net = build_network(MU, n)
        dot = export_dot(net, tmp_path / f"n{n}.dot")
        gml = export_graphml(net, tmp_path / f"n{n}.graphml")
        validate_graphml(gml)
        assert np.array_equal(read_dot(dot).successor, net.successor)
        assert np.array_equal(read_graphml(gml).successor, net.successor)
        rows = read_degree_csv(export_degree_csv(degree_histogram(net), tmp_path / f"n{n}.csv"))
        assert sum(rows.values()) == sum(k * c for k, c in rows.items()) == (1 << n) + 1


@pytest.mark.criterion("11 determinism: two report runs give byte-identical JSON")
def test_c11_determinism(tmp_path):
    outs = []
    for tag in ("a", "b"):
        out = tmp_path / f"{tag}.json"
        assert main(["report", "--mu", "121/2^5", "--n", "5..14", "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


@pytest.mark.criterion("12 performance: report at n = 20 under 60 s and 1 GB")
def test_c12_performance(tmp_path):
    out = tmp_path / "r20.json"
    script = textwrap.dedent(f"""
        import json, resource, sys, time
        from fxpnet.cli import main
        t0 = time.perf_counter()
        code = main(["report", "--mu", "121/2^5", "--n", "20", "--out", {str(out)!r}])
        rss = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
        print(json.dumps({{"code": code, "seconds": time.perf_counter() - t0, "rss_kb": rss}}))
    """)
    proc = subprocess.run([sys.executable, "-c", script], capture_output=True, text=True,
                          check=True)
    stats = json.loads(proc.stdout.strip().splitlines()[-1])
    print("n=20 report:", stats)
    assert stats["code"] == 0
    assert stats["seconds"] < 60.0
    assert stats["rss_kb"] < 1024 * 1024
    assert json.loads(out.read_text())["completed"] is True
