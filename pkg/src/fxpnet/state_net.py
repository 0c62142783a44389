"""State-transition network of F_n and its functional-graph structure."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fxp_map import (
    ControlParameter,
    DomainError,
    QuantizationMode,
    check_precision,
    step_table,
)

UNVISITED, IN_PROGRESS, DONE = 0, 1, 2


@dataclass(frozen=True, eq=False)
class StateNetwork:
    mu: ControlParameter
    n: int
    mode: QuantizationMode
    successor: np.ndarray

    def __post_init__(self) -> None:
        succ = np.asarray(self.successor, dtype=np.int64)
        size = (1 << self.n) + 1
        if succ.shape != (size,):
            raise DomainError(f"successor table must have {size} entries, got {succ.shape}")
        if succ.size and (succ.min() < 0 or succ.max() >= size):
            raise DomainError("successor entries must lie in [0, 2^n]")
        succ.setflags(write=False)
        object.__setattr__(self, "successor", succ)

    @property
    def size(self) -> int:
        return self.successor.size

    @property
    def top(self) -> int:
        return 1 << self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateNetwork):
            return NotImplemented
        return (self.mu, self.n, self.mode) == (other.mu, other.n, other.mode) and bool(
            np.array_equal(self.successor, other.successor)
        )


@dataclass
class ComponentInfo:
    id: int
    node_count: int
    cycle: list[int]
    max_tail_length: int

    @property
    def cycle_length(self) -> int:
        return len(self.cycle)


@dataclass
class NetworkSummary:
    component_count: int
    components: list[ComponentInfo]
    self_loop_nodes: list[int]
    max_in_degree_node: int
    max_in_degree: int
    cycle_count: int = field(default=0)


def build_network(
    mu: ControlParameter, n: int, mode: QuantizationMode | str = QuantizationMode.ROUND
) -> StateNetwork:
    mode = QuantizationMode(mode)
    check_precision(mu, n)
    return StateNetwork(mu, n, mode, step_table(mu, n, mode))


class UnionFind:
    """Array-backed disjoint sets, union by size with path compression."""

    def __init__(self, length: int):
        self.parent = list(range(length))
        self.weight = [1] * length

    def find(self, i: int) -> int:
        parent = self.parent
        root = i
        while parent[root] != root:
            root = parent[root]
        while parent[i] != root:
            parent[i], i = root, parent[i]
        return root

    def union(self, i: int, j: int) -> int:
        i, j = self.find(i), self.find(j)
        if i == j:
            return i
        if self.weight[i] < self.weight[j]:
            i, j = j, i
        self.parent[j] = i
        self.weight[i] += self.weight[j]
        return i


def find_cycles(net: StateNetwork) -> list[list[int]]:
    """Every cycle of the network, each rotated to start at its smallest label.

    Cycles are listed in ascending order of their smallest label.
    """
    succ = net.successor.tolist()
    state = [UNVISITED] * len(succ)
    cycles = []
    for start in range(len(succ)):
        if state[start] != UNVISITED:
            continue
        path = []
        v = start
        while state[v] == UNVISITED:
            state[v] = IN_PROGRESS
            path.append(v)
            v = succ[v]
        if state[v] == IN_PROGRESS:
            cyc = path[path.index(v):]
            k = cyc.index(min(cyc))
            cycles.append(cyc[k:] + cyc[:k])
        for u in path:
            state[u] = DONE
    cycles.sort(key=lambda c: c[0])
    return cycles


def in_degrees(net: StateNetwork) -> np.ndarray:
    return np.bincount(net.successor, minlength=net.size)


def tail_lengths(net: StateNetwork, cycles: list[list[int]] | None = None) -> np.ndarray:
    """Transient length of every node before it lands on a cycle."""
    if cycles is None:
        cycles = find_cycles(net)
    succ = net.successor.tolist()
    tail = [-1] * len(succ)
    for cyc in cycles:
        for v in cyc:
            tail[v] = 0
    for start in range(len(succ)):
        if tail[start] >= 0:
            continue
        path = []
        v = start
        while tail[v] < 0:
            path.append(v)
            v = succ[v]
        t = tail[v]
        for u in reversed(path):
            t += 1
            tail[u] = t
    return np.array(tail, dtype=np.int64)


def tail_length(net: StateNetwork, i: int) -> int:
    if not 0 <= i < net.size:
        raise DomainError(f"node label {i} outside [0, {net.top}]")
    on_cycle = {v for c in find_cycles(net) for v in c}
    succ = net.successor
    t = 0
    while i not in on_cycle:
        i = int(succ[i])
        t += 1
    return t


def component_labels(net: StateNetwork) -> np.ndarray:
    """Root id per node from union-find over the {i, successor[i]} pairs."""
    uf = UnionFind(net.size)
    for i, j in enumerate(net.successor.tolist()):
        uf.union(i, j)
    return np.array([uf.find(i) for i in range(net.size)], dtype=np.int64)


def weak_components(net: StateNetwork) -> list[ComponentInfo]:
    """Weakly connected components, largest first (ties: smallest member label)."""
    labels = component_labels(net)
    cycles = find_cycles(net)
    tails = tail_lengths(net, cycles)
    roots, first, counts = np.unique(labels, return_index=True, return_counts=True)
    max_tail = np.zeros(roots.size, dtype=np.int64)
    idx = np.searchsorted(roots, labels)
    np.maximum.at(max_tail, idx, tails)
    cycle_of = {}
    for cyc in cycles:
        r = int(np.searchsorted(roots, labels[cyc[0]]))
        if r in cycle_of:
            raise AssertionError(f"component rooted at {roots[r]} holds two cycles")
        cycle_of[r] = cyc
    # np.unique's first index is the smallest member label of each component.
    order = sorted(range(roots.size), key=lambda r: (-int(counts[r]), int(first[r])))
    return [
        ComponentInfo(
            id=k,
            node_count=int(counts[r]),
            cycle=cycle_of[r],
            max_tail_length=int(max_tail[r]),
        )
        for k, r in enumerate(order)
    ]


def max_in_degree(net: StateNetwork) -> tuple[int, int]:
    """(D_n, in-degree of D_n); ties go to the smallest label."""
    deg = in_degrees(net)
    node = int(np.argmax(deg))
    return node, int(deg[node])


def summarize(net: StateNetwork) -> NetworkSummary:
    comps = weak_components(net)
    node, deg = max_in_degree(net)
    loops = np.flatnonzero(net.successor == np.arange(net.size)).tolist()
    return NetworkSummary(
        component_count=len(comps),
        components=comps,
        self_loop_nodes=loops,
        max_in_degree_node=node,
        max_in_degree=deg,
        cycle_count=len(comps),
    )
