"""Reference connectivity checks used to validate the partition algorithms.

Everything here is plain Python on purpose: it shares no code with the
compiled kernels, so a bug in one is unlikely to hide in the other.
"""

from __future__ import annotations

import numpy as np

from netconn.errors import PreconditionError
from netconn.model import AdjacencyMap, Network, Partition

TRIANGULAR_LIMIT = 64


def _reach_row(neighbors: list[list[int]], origin: int) -> list[bool]:
    """Reachability row of ``origin`` via iterative depth-first search."""
    reached = [False] * len(neighbors)
    reached[origin] = True
    stack = [origin]
    while stack:
        u = stack.pop()
        for v in neighbors[u]:
            if not reached[v]:
                reached[v] = True
                stack.append(v)
    return reached


def _neighbor_lists(adj: AdjacencyMap) -> list[list[int]]:
    offsets = adj.offsets.tolist()
    targets = adj.targets.tolist()
    return [targets[offsets[u] : offsets[u + 1]] for u in range(len(offsets) - 1)]


def reachability_row(adj: AdjacencyMap, origin: int) -> np.ndarray:
    n = adj.node_count
    if not 0 <= origin < n:
        raise PreconditionError(f"origin {origin} outside 0..{n - 1}")
    return np.array(_reach_row(_neighbor_lists(adj), origin), dtype=bool)


def direct_inspection_connected(adj: AdjacencyMap, origin: int = 0) -> bool:
    """True iff every node can be reached from ``origin``.

    One row suffices: reachability is reflexive, symmetric and transitive, so
    any two nodes are connected through the origin.
    """
    return bool(reachability_row(adj, origin).all())


def triangular_pair_connected(adj: AdjacencyMap, limit: int = TRIANGULAR_LIMIT) -> bool:
    """Check every pair (n, m) with m > n explicitly. Quadratic; small N only."""
    n = adj.node_count
    if n > limit:
        raise PreconditionError(f"triangular check refused for N={n} > {limit}")
    neighbors = _neighbor_lists(adj)
    for origin in range(n - 1):
        row = _reach_row(neighbors, origin)
        if not all(row[origin + 1 :]):
            return False
    return True


class DisjointSet:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra


def union_find_partitions(net: Network) -> list[Partition]:
    """Components by disjoint-set union, sorted by minimum node.

    Nodes and segment indices inside each partition are ascending.
    """
    if not net.is_dense:
        raise PreconditionError("union_find_partitions needs dense indices")
    pairs = net.segments.tolist()
    dsu = DisjointSet(net.node_count)
    for a, b in pairs:
        dsu.union(a, b)
    groups: dict[int, list[int]] = {}
    for v in range(net.node_count):
        groups.setdefault(dsu.find(v), []).append(v)
    seg_groups: dict[int, list[int]] = {}
    for i, (a, _) in enumerate(pairs):
        seg_groups.setdefault(dsu.find(a), []).append(i)
    # nodes are visited in ascending order, so dict order is by minimum node
    return [Partition(nodes, seg_groups[root]) for root, nodes in groups.items()]


def brute_force_bridges(n: int, pairs: list[tuple[int, int]]) -> list[int]:
    """Segments whose removal leaves the (connected) graph disconnected."""
    out = []
    for skip in range(len(pairs)):
        neighbors: list[list[int]] = [[] for _ in range(n)]
        for i, (a, b) in enumerate(pairs):
            if i != skip:
                neighbors[a].append(b)
                neighbors[b].append(a)
        if not all(_reach_row(neighbors, 0)):
            out.append(skip)
    return out
