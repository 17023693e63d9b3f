"""Partition enumeration by neighbour expansion over a node-to-neighbours table.

Two Boolean arrays drive the search: ``removed`` marks nodes whose
neighbours have been expanded, ``in_partition`` marks nodes affiliated with
the partition currently being grown. The frontier is processed first in,
first out, so deep chains never hit the recursion limit.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from netconn._kernels import flag_words, node_mapping_kernel
from netconn.errors import InvariantError, PreconditionError
from netconn.model import (
    INDEX_DTYPE,
    LOWEST,
    AdjacencyMap,
    MemoryEstimate,
    Network,
    Partition,
    SlotCounter,
    StartRule,
)


def find_partitions_node_mapping(
    adj: AdjacencyMap,
    start_rule: StartRule = LOWEST,
    counter: SlotCounter | None = None,
) -> list[Partition]:
    """Return one node-only Partition per connected component.

    Partitions come out in start-node order; nodes inside each partition are
    listed in discovery order. Use ``assign_segments`` to attach segments.
    """
    n = adj.node_count
    if n < 1:
        raise PreconditionError("adjacency map is empty")
    removed = flag_words(n)
    in_partition = flag_words(n)
    queue = np.empty(n, dtype=INDEX_DTYPE)
    bounds, inspections = node_mapping_kernel(
        adj.offsets, adj.targets, start_rule.order(n), removed, in_partition, queue
    )
    if counter is not None:
        counter.bool_slots += 2 * n
        counter.int_slots += adj.targets.size
        counter.aux_int_slots += queue.size
        counter.inspections += int(inspections)
    return [Partition(queue[lo:hi]) for lo, hi in zip(bounds[:-1], bounds[1:])]


def assign_segments(net: Network, parts: Sequence[Partition]) -> list[Partition]:
    """Attach each segment to the partition holding both its endpoints."""
    n = net.node_count
    if not net.is_dense:
        raise PreconditionError("assign_segments needs dense indices")
    label = np.full(n, -1, dtype=INDEX_DTYPE)
    for k, p in enumerate(parts):
        label[p.nodes] = k
    if (label < 0).any():
        raise PreconditionError("partitions do not cover every node")
    ends = label[net.segments]
    if (ends[:, 0] != ends[:, 1]).any():
        bad = int(np.flatnonzero(ends[:, 0] != ends[:, 1])[0])
        raise InvariantError(f"segment {bad} spans two partitions")
    owner = ends[:, 0]
    order = np.argsort(owner, kind="stable")
    cuts = np.searchsorted(owner[order], np.arange(len(parts) + 1))
    return [
        Partition(p.nodes, order[cuts[k] : cuts[k + 1]])
        for k, p in enumerate(parts)
    ]


def memory_estimate_node_mapping(n: int, m: int) -> MemoryEstimate:
    """Two N-length flag arrays plus the 2M-entry neighbour table."""
    if n < 2 or m < 1:
        raise PreconditionError("need N >= 2 and M >= 1")
    return MemoryEstimate(bool_slots=2 * n, int_slots=2 * m)
