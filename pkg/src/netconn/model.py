"""Network data model: segments, index compaction, adjacency, statistics.

Node indices are arbitrary non-negative integers in input files. The
partition algorithms work on dense indices ``0..N-1``; ``compact_indices``
and ``restore_indices`` move between the two.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from netconn.errors import (
    EmptyNetworkError,
    FormatError,
    InvariantError,
    MappingError,
    PreconditionError,
)

INDEX_DTYPE = np.int64


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Network:
    """Ordered segment list; ``segments`` has shape ``(M, 2)``.

    Nodes exist only as segment endpoints, so a singular (unconnected) node
    cannot be expressed.
    """

    segments: np.ndarray
    node_ids: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        seg = np.array(self.segments, dtype=INDEX_DTYPE, copy=True)
        if seg.size == 0:
            raise EmptyNetworkError("network has no segments")
        if seg.ndim != 2 or seg.shape[1] != 2:
            raise FormatError(f"segments must have shape (M, 2), got {seg.shape}")
        if (seg < 0).any():
            raise FormatError("node indices must be non-negative")
        loops = np.flatnonzero(seg[:, 0] == seg[:, 1])
        if loops.size:
            raise FormatError(f"segment {int(loops[0])} is a self-loop")
        object.__setattr__(self, "segments", _frozen(seg))
        object.__setattr__(self, "node_ids", _frozen(np.unique(seg)))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]]) -> Network:
        return cls(np.array(list(pairs), dtype=INDEX_DTYPE).reshape(-1, 2))

    @property
    def node_count(self) -> int:
        return int(self.node_ids.size)

    @property
    def segment_count(self) -> int:
        return int(self.segments.shape[0])

    N = node_count
    M = segment_count

    @property
    def is_dense(self) -> bool:
        """True when node indices are exactly ``0..N-1``."""
        return int(self.node_ids[-1]) == self.node_ids.size - 1

    def degrees(self) -> np.ndarray:
        """Connectivity index per node, aligned with ``node_ids``."""
        _, counts = np.unique(self.segments, return_counts=True)
        return counts

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in self.segments]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return np.array_equal(self.segments, other.segments)

    def __hash__(self) -> int:
        return hash(self.segments.tobytes())

    def __len__(self) -> int:
        return self.segment_count

    def __repr__(self) -> str:
        return f"Network(N={self.node_count}, M={self.segment_count})"


# ---------------------------------------------------------------------------
# Edge-list I/O


def parse_network_lines(text: bytes | str) -> tuple[Network, np.ndarray]:
    """Parse an edge list, also returning the 1-based source line of each segment."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError(f"input is not valid UTF-8: {exc}") from None

    pairs: list[tuple[int, int]] = []
    lines: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise FormatError(f"expected 2 tokens, found {len(tokens)}", lineno)
        if not all(t.isascii() and t.isdigit() for t in tokens):
            raise FormatError(f"node indices must be non-negative integers: {line!r}", lineno)
        u, v = int(tokens[0]), int(tokens[1])
        if u == v:
            raise FormatError(f"self-loop on node {u}", lineno)
        pairs.append((u, v))
        lines.append(lineno)

    if not pairs:
        raise EmptyNetworkError("network has no segments")
    return Network(np.array(pairs, dtype=INDEX_DTYPE)), np.array(lines, dtype=INDEX_DTYPE)


def parse_network(text: bytes | str) -> Network:
    """Parse the ``u v`` per line edge-list format.

    Blank lines and lines starting with ``#`` are skipped. Parallel segments
    are kept; self-loops are rejected with the offending line number.
    """
    return parse_network_lines(text)[0]


def read_network(path: str | Path) -> Network:
    return parse_network(Path(path).read_bytes())


def format_network(net: Network) -> str:
    seg = net.segments
    if seg.shape[0] == 0:
        return ""
    return "\n".join(f"{a} {b}" for a, b in seg.tolist()) + "\n"


def write_network(net: Network, path: str | Path) -> None:
    Path(path).write_text(format_network(net), encoding="utf-8")


# ---------------------------------------------------------------------------
# Index compaction


@dataclass(frozen=True, eq=False)
class IndexMapping:
    """Bijection between dense compact indices and original node ids."""

    original_of: np.ndarray
    _sorted_ids: np.ndarray = field(init=False, repr=False)
    _sorted_pos: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        orig = np.array(self.original_of, dtype=INDEX_DTYPE, copy=True).ravel()
        order = np.argsort(orig, kind="stable")
        sorted_ids = orig[order]
        if sorted_ids.size > 1 and (np.diff(sorted_ids) == 0).any():
            raise MappingError("original ids must be distinct")
        object.__setattr__(self, "original_of", _frozen(orig))
        object.__setattr__(self, "_sorted_ids", _frozen(sorted_ids))
        object.__setattr__(self, "_sorted_pos", _frozen(order.astype(INDEX_DTYPE)))

    @classmethod
    def identity(cls, n: int) -> IndexMapping:
        return cls(np.arange(n, dtype=INDEX_DTYPE))

    def __len__(self) -> int:
        return int(self.original_of.size)

    def compact_of(self, ids: np.ndarray | int) -> np.ndarray | int:
        """Look up compact indices for original ids."""
        arr = np.asarray(ids, dtype=INDEX_DTYPE)
        pos = np.searchsorted(self._sorted_ids, arr)
        pos_clipped = np.minimum(pos, self._sorted_ids.size - 1)
        if not np.array_equal(self._sorted_ids[pos_clipped], arr):
            raise MappingError("original id not present in mapping")
        out = self._sorted_pos[pos_clipped]
        return int(out) if out.ndim == 0 else out

    def restore(self, compact: np.ndarray) -> np.ndarray:
        arr = np.asarray(compact, dtype=INDEX_DTYPE)
        if arr.size and (arr.min() < 0 or arr.max() >= len(self)):
            raise MappingError(
                f"compact index outside mapping domain 0..{len(self) - 1}"
            )
        return self.original_of[arr]

    def is_identity(self) -> bool:
        return np.array_equal(self.original_of, np.arange(len(self)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IndexMapping):
            return NotImplemented
        return np.array_equal(self.original_of, other.original_of)

    def __hash__(self) -> int:
        return hash(self.original_of.tobytes())


def format_mapping(mapping: IndexMapping) -> str:
    return "".join(f"{i} {o}\n" for i, o in enumerate(mapping.original_of.tolist()))


def parse_mapping(text: str) -> IndexMapping:
    rows: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2 or not all(t.isdigit() for t in tokens):
            raise FormatError("expected 'compact original'", lineno)
        rows[int(tokens[0])] = int(tokens[1])
    if sorted(rows) != list(range(len(rows))):
        raise MappingError("compact indices must be exactly 0..N-1")
    return IndexMapping(np.array([rows[i] for i in range(len(rows))], dtype=INDEX_DTYPE))


def compact_indices(net: Network) -> tuple[Network, IndexMapping]:
    """Relabel nodes densely, in order of first appearance in the segment list."""
    flat = net.segments.ravel()
    uniq, first, inverse = np.unique(flat, return_index=True, return_inverse=True)
    order = np.argsort(first, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    dense = rank[inverse].reshape(net.segments.shape)
    return Network(dense), IndexMapping(uniq[order])


def restore_indices(net: Network, mapping: IndexMapping) -> Network:
    return Network(mapping.restore(net.segments))


# ---------------------------------------------------------------------------
# Adjacency


@dataclass(frozen=True, eq=False)
class AdjacencyMap:
    """Node-to-neighbours table in CSR form.

    ``targets[offsets[u]:offsets[u + 1]]`` lists the neighbours of ``u`` in
    segment order; a parallel segment contributes one entry per copy.
    """

    offsets: np.ndarray
    targets: np.ndarray

    @property
    def node_count(self) -> int:
        return int(self.offsets.size - 1)

    def __len__(self) -> int:
        return self.node_count

    def __getitem__(self, u: int) -> np.ndarray:
        return self.targets[self.offsets[u] : self.offsets[u + 1]]

    def neighbors(self, u: int) -> list[int]:
        return self[u].tolist()

    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    @property
    def entry_count(self) -> int:
        return int(self.targets.size)


def build_adjacency(net: Network) -> AdjacencyMap:
    if not net.is_dense:
        raise PreconditionError("build_adjacency needs dense indices; compact first")
    n = net.node_count
    src = net.segments.ravel()
    dst = net.segments[:, ::-1].ravel()
    order = np.argsort(src, kind="stable")
    offsets = np.zeros(n + 1, dtype=INDEX_DTYPE)
    np.cumsum(np.bincount(src, minlength=n), out=offsets[1:])
    return AdjacencyMap(_frozen(offsets), _frozen(np.ascontiguousarray(dst[order])))


# ---------------------------------------------------------------------------
# Partitions and start rules


@dataclass(frozen=True, eq=False)
class Partition:
    """One connected component: its nodes and the positions of its segments."""

    nodes: np.ndarray
    segment_indices: np.ndarray = field(
        default_factory=lambda: np.empty(0, dtype=INDEX_DTYPE)
    )

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=INDEX_DTYPE)
        if nodes.size == 0:
            raise InvariantError("partition has no nodes")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(
            self, "segment_indices", np.asarray(self.segment_indices, dtype=INDEX_DTYPE)
        )

    @property
    def node_count(self) -> int:
        return int(self.nodes.size)

    @property
    def segment_count(self) -> int:
        return int(self.segment_indices.size)

    def node_set(self) -> frozenset[int]:
        return frozenset(self.nodes.tolist())

    def segment_set(self) -> frozenset[int]:
        return frozenset(self.segment_indices.tolist())


def node_family(parts: Sequence[Partition]) -> tuple[tuple[int, ...], ...]:
    """Order-insensitive canonical form of a partition list's node sets."""
    return tuple(sorted(tuple(sorted(p.nodes.tolist())) for p in parts))


def segment_family(parts: Sequence[Partition]) -> tuple[tuple[int, ...], ...]:
    return tuple(sorted(tuple(sorted(p.segment_indices.tolist())) for p in parts))


def partition_labels(n: int, parts: Sequence[Partition]) -> np.ndarray:
    """Partition number of each dense node, -1 where uncovered."""
    labels = np.full(n, -1, dtype=INDEX_DTYPE)
    for k, p in enumerate(parts):
        labels[p.nodes] = k
    return labels


@dataclass(frozen=True)
class StartRule:
    """How the algorithms pick the next start node or seed segment.

    ``lowest`` takes the lowest-index unconsumed item. ``random`` follows a
    permutation drawn from ``seed``.
    """

    kind: str = "lowest"
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("lowest", "random"):
            raise ValueError(f"unknown start rule {self.kind!r}")

    def order(self, count: int) -> np.ndarray:
        if self.kind == "lowest":
            return np.arange(count, dtype=INDEX_DTYPE)
        return np.random.default_rng(self.seed).permutation(count).astype(INDEX_DTYPE)

    def draws(self, count: int) -> np.ndarray:
        """Uniform [0, 1) draws, one per potential seed pick."""
        return np.random.default_rng(self.seed).random(count)


LOWEST = StartRule()


@dataclass(frozen=True)
class MemoryEstimate:
    """Boolean and integer storage slots of a partition search."""

    bool_slots: int
    int_slots: int


@dataclass
class SlotCounter:
    """Instrumentation filled in by the algorithms as they allocate.

    ``bool_slots`` counts Boolean flag entries (stored one bit each) and
    ``int_slots`` the integer connectivity table (neighbour table or segment
    list). Work queues are tallied separately in ``aux_int_slots``.
    """

    bool_slots: int = 0
    int_slots: int = 0
    aux_int_slots: int = 0
    inspections: int = 0
    sweeps: int = 0

    def estimate(self) -> MemoryEstimate:
        return MemoryEstimate(self.bool_slots, self.int_slots)


# ---------------------------------------------------------------------------
# Node classes, topology and statistics


class NodeClass(enum.Enum):
    BOUNDARY = "boundary"
    BRIDGE = "bridge"
    BIFURCATION = "bifurcation"

    @classmethod
    def of(cls, c: int) -> NodeClass:
        if c < 1:
            raise InvariantError(f"connectivity index {c} < 1 (singular node)")
        if c == 1:
            return cls.BOUNDARY
        if c == 2:
            return cls.BRIDGE
        return cls.BIFURCATION


class Topology(enum.Enum):
    OPEN = "open"
    CLOSED = "closed"
    SEMI_CLOSED = "semi-closed"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class NetworkStats:
    N: int
    M: int
    c_avg: Fraction
    histogram: dict[NodeClass, int]
    degree_histogram: dict[int, int]
    partition_count: int
    partition_classes: tuple[Topology, ...]


def format_ratio(value: Fraction, digits: int = 4) -> str:
    return f"{float(value):.{digits}f}"


def _csr(n: int, seg: np.ndarray) -> tuple[list[int], list[int], list[int]]:
    m = seg.shape[0]
    src = seg.ravel()
    dst = seg[:, ::-1].ravel()
    eid = np.repeat(np.arange(m), 2)
    order = np.argsort(src, kind="stable")
    offsets = np.zeros(n + 1, dtype=INDEX_DTYPE)
    np.cumsum(np.bincount(src, minlength=n), out=offsets[1:])
    return offsets.tolist(), dst[order].tolist(), eid[order].tolist()


def find_bridges(n: int, seg: np.ndarray) -> tuple[list[int], int]:
    """Bridge segments of a dense multigraph via iterative low-link DFS.

    Returns the bridge positions into ``seg`` and the number of nodes reached
    from node 0. A parallel pair is never a bridge because only the exact
    segment used to enter a node is excluded from its back-edges.
    """
    offsets, nbr, eid = _csr(n, seg)
    disc = [-1] * n
    low = [0] * n
    ptr = offsets[:-1].copy()
    bridges: list[int] = []
    disc[0] = low[0] = 0
    timer = 1
    stack: list[tuple[int, int]] = [(0, -1)]
    while stack:
        u, via = stack[-1]
        k = ptr[u]
        if k < offsets[u + 1]:
            ptr[u] = k + 1
            e = eid[k]
            if e == via:
                continue
            v = nbr[k]
            if disc[v] == -1:
                disc[v] = low[v] = timer
                timer += 1
                stack.append((v, e))
            elif disc[v] < low[u]:
                low[u] = disc[v]
        else:
            stack.pop()
            if stack:
                p = stack[-1][0]
                if low[u] < low[p]:
                    low[p] = low[u]
                if low[u] > disc[p]:
                    bridges.append(via)
    return sorted(bridges), timer


def classify_partition(net: Network, part: Partition) -> Topology:
    """Open (tree), closed (bridgeless with a cycle) or semi-closed."""
    if part.segment_count == 0:
        raise PreconditionError("partition carries no segments; attach them first")
    nodes = np.sort(part.nodes)
    seg = net.segments[part.segment_indices]
    local = np.searchsorted(nodes, seg)
    if (local >= nodes.size).any() or not np.array_equal(nodes[np.minimum(local, nodes.size - 1)], seg):
        raise PreconditionError("partition segment has an endpoint outside the partition")
    n_p, m_p = int(nodes.size), int(seg.shape[0])
    bridges, reached = find_bridges(n_p, local)
    if reached != n_p:
        raise PreconditionError("partition is not connected")
    if m_p == n_p - 1:
        return Topology.OPEN
    if not bridges:
        return Topology.CLOSED
    return Topology.SEMI_CLOSED


def check_cover(net: Network, parts: Sequence[Partition]) -> None:
    """Raise InvariantError unless ``parts`` is a disjoint cover of ``net``."""
    if not parts:
        raise InvariantError("empty partition list")
    all_nodes = np.sort(np.concatenate([p.nodes for p in parts]))
    if not np.array_equal(all_nodes, net.node_ids):
        raise InvariantError("partition node sets are not a disjoint cover of the nodes")
    all_segs = np.sort(np.concatenate([p.segment_indices for p in parts]))
    if not np.array_equal(all_segs, np.arange(net.segment_count)):
        raise InvariantError("partition segment sets are not a disjoint cover of the segments")
    owner = np.empty(net.segment_count, dtype=INDEX_DTYPE)
    for k, p in enumerate(parts):
        owner[p.segment_indices] = k
    pos = np.searchsorted(net.node_ids, net.segments)
    node_owner = np.empty(net.node_count, dtype=INDEX_DTYPE)
    for k, p in enumerate(parts):
        node_owner[np.searchsorted(net.node_ids, p.nodes)] = k
    ends = node_owner[pos]
    if not ((ends[:, 0] == owner) & (ends[:, 1] == owner)).all():
        raise InvariantError("a segment is attributed to a partition missing its endpoints")


def compute_stats(net: Network, parts: Sequence[Partition]) -> NetworkStats:
    check_cover(net, parts)
    degree_hist = Counter(net.degrees().tolist())
    histogram = {cls: 0 for cls in NodeClass}
    for c, count in degree_hist.items():
        histogram[NodeClass.of(c)] += count
    return NetworkStats(
        N=net.node_count,
        M=net.segment_count,
        c_avg=Fraction(2 * net.segment_count, net.node_count),
        histogram=histogram,
        degree_histogram=dict(sorted(degree_hist.items())),
        partition_count=len(parts),
        partition_classes=tuple(classify_partition(net, p) for p in parts),
    )
