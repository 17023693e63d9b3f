"""Partition enumeration by repeated sweeps over the segment list.

A partition is seeded with both ends of one segment. Each sweep walks the
unconsumed segments in stored order and absorbs every segment touching a
connected node; sweeping stops once a pass adds no new node. Segment
membership falls out of the search directly.
"""

from __future__ import annotations

import enum

import numpy as np

from netconn._kernels import (
    flag_words,
    segment_mapping_direct_kernel,
    segment_mapping_lazy_kernel,
)
from netconn.errors import PreconditionError
from netconn.model import (
    INDEX_DTYPE,
    LOWEST,
    MemoryEstimate,
    Network,
    Partition,
    SlotCounter,
    StartRule,
)


class RemovalVariant(enum.Enum):
    # consumed segments are dropped from a compacted working list
    DIRECT = "direct"
    # consumed segments are flagged in an M-length Boolean array
    LAZY = "lazy"


def find_partitions_segment_mapping(
    net: Network,
    variant: RemovalVariant = RemovalVariant.DIRECT,
    seed_rule: StartRule = LOWEST,
    counter: SlotCounter | None = None,
) -> list[Partition]:
    if not net.is_dense:
        raise PreconditionError("segment mapping needs dense indices; compact first")
    seg = net.segments
    n, m = net.node_count, net.segment_count
    node_connected = flag_words(n)

    if variant is RemovalVariant.LAZY:
        segment_removed = flag_words(m)
        result = segment_mapping_lazy_kernel(
            seg, n, seed_rule.order(m), node_connected, segment_removed
        )
        bool_slots = n + m
        aux = 0
    else:
        work = np.empty(m, dtype=INDEX_DTYPE)
        use_draws = seed_rule.kind == "random"
        draws = seed_rule.draws(m) if use_draws else np.empty(0)
        result = segment_mapping_direct_kernel(
            seg, n, draws, use_draws, node_connected, work
        )
        bool_slots = n
        aux = work.size

    node_out, node_bounds, seg_out, seg_bounds, sweeps, inspections = result
    if counter is not None:
        counter.bool_slots += bool_slots
        counter.int_slots += seg.size
        counter.aux_int_slots += aux
        counter.sweeps += int(sweeps)
        counter.inspections += int(inspections)
    return [
        Partition(node_out[node_bounds[k] : node_bounds[k + 1]],
                  seg_out[seg_bounds[k] : seg_bounds[k + 1]])
        for k in range(node_bounds.size - 1)
    ]


def memory_estimate_segment_mapping(
    n: int, m: int, variant: RemovalVariant = RemovalVariant.DIRECT
) -> MemoryEstimate:
    if n < 2 or m < 1:
        raise PreconditionError("need N >= 2 and M >= 1")
    extra = m if variant is RemovalVariant.LAZY else 0
    return MemoryEstimate(bool_slots=n + extra, int_slots=2 * m)
