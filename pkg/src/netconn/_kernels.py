"""Compiled inner loops for node mapping and segment mapping.

Boolean flag arrays are bit-packed into uint64 words (one bit per node or
segment) so the randomly accessed node flags stay cache resident on large
networks. Flag arrays are allocated by the callers so they can be counted.
Every kernel returns the partitions as a flat array plus boundary offsets.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_ONE = np.uint64(1)


def flag_words(count: int) -> np.ndarray:
    """Zeroed bit-packed Boolean array with ``count`` entries."""
    return np.zeros((count + 63) // 64, dtype=np.uint64)


@njit(inline="always")
def _get(bits, i):
    return (bits[i >> 6] >> np.uint64(i & 63)) & _ONE


@njit(inline="always")
def _set(bits, i):
    bits[i >> 6] |= _ONE << np.uint64(i & 63)


@njit(inline="always")
def _clear(bits, i):
    bits[i >> 6] &= ~(_ONE << np.uint64(i & 63))


@njit(cache=True)
def node_mapping_kernel(offsets, targets, start_order, removed, in_partition, queue):
    n = offsets.size - 1
    bounds = np.empty(n + 1, np.int64)
    bounds[0] = 0
    nparts = 0
    head = 0
    tail = 0
    inspections = 0
    for s in start_order:
        if _get(removed, s):
            continue
        _set(in_partition, s)
        queue[tail] = s
        tail += 1
        while head < tail:
            u = queue[head]
            head += 1
            for k in range(offsets[u], offsets[u + 1]):
                v = targets[k]
                inspections += 1
                if not _get(in_partition, v):
                    _set(in_partition, v)
                    queue[tail] = v
                    tail += 1
            _set(removed, u)
        # affiliation is per partition; clear only what this one touched
        for k in range(bounds[nparts], tail):
            _clear(in_partition, queue[k])
        nparts += 1
        bounds[nparts] = tail
    return bounds[: nparts + 1].copy(), inspections


@njit(cache=True)
def segment_mapping_lazy_kernel(seg, n, seed_order, node_connected, segment_removed):
    m = seg.shape[0]
    node_out = np.empty(n, np.int64)
    seg_out = np.empty(m, np.int64)
    node_bounds = np.empty(m + 1, np.int64)
    seg_bounds = np.empty(m + 1, np.int64)
    node_bounds[0] = 0
    seg_bounds[0] = 0
    nparts = 0
    nt = 0
    st = 0
    remaining = m
    first = 0
    sweeps = 0
    inspections = 0
    for s in seed_order:
        if _get(segment_removed, s):
            continue
        a = seg[s, 0]
        b = seg[s, 1]
        _set(segment_removed, s)
        remaining -= 1
        seg_out[st] = s
        st += 1
        _set(node_connected, a)
        _set(node_connected, b)
        node_out[nt] = a
        node_out[nt + 1] = b
        nt += 2
        progressed = True
        while remaining > 0 and progressed:
            progressed = False
            sweeps += 1
            while _get(segment_removed, first):
                first += 1
            for i in range(first, m):
                if _get(segment_removed, i):
                    continue
                inspections += 1
                a = seg[i, 0]
                b = seg[i, 1]
                ca = _get(node_connected, a)
                cb = _get(node_connected, b)
                if ca or cb:
                    _set(segment_removed, i)
                    remaining -= 1
                    seg_out[st] = i
                    st += 1
                    if not ca:
                        _set(node_connected, a)
                        node_out[nt] = a
                        nt += 1
                        progressed = True
                    elif not cb:
                        _set(node_connected, b)
                        node_out[nt] = b
                        nt += 1
                        progressed = True
        for k in range(node_bounds[nparts], nt):
            _clear(node_connected, node_out[k])
        nparts += 1
        node_bounds[nparts] = nt
        seg_bounds[nparts] = st
    return (
        node_out,
        node_bounds[: nparts + 1].copy(),
        seg_out,
        seg_bounds[: nparts + 1].copy(),
        sweeps,
        inspections,
    )


@njit(cache=True)
def segment_mapping_direct_kernel(seg, n, seed_draws, use_draws, node_connected, work):
    m = seg.shape[0]
    for i in range(m):
        work[i] = i
    node_out = np.empty(n, np.int64)
    seg_out = np.empty(m, np.int64)
    node_bounds = np.empty(m + 1, np.int64)
    seg_bounds = np.empty(m + 1, np.int64)
    node_bounds[0] = 0
    seg_bounds[0] = 0
    nparts = 0
    nt = 0
    st = 0
    length = m
    sweeps = 0
    inspections = 0
    while length > 0:
        pick = 0
        if use_draws:
            pick = int(seed_draws[nparts] * length)
            if pick >= length:
                pick = length - 1
        s = work[pick]
        a = seg[s, 0]
        b = seg[s, 1]
        remaining = length - 1
        seg_out[st] = s
        st += 1
        _set(node_connected, a)
        _set(node_connected, b)
        node_out[nt] = a
        node_out[nt + 1] = b
        nt += 2
        skip = pick
        progressed = True
        while remaining > 0 and progressed:
            progressed = False
            sweeps += 1
            w = 0
            for j in range(length):
                if j == skip:
                    continue
                i = work[j]
                inspections += 1
                a = seg[i, 0]
                b = seg[i, 1]
                ca = _get(node_connected, a)
                cb = _get(node_connected, b)
                if ca or cb:
                    seg_out[st] = i
                    st += 1
                    if not ca:
                        _set(node_connected, a)
                        node_out[nt] = a
                        nt += 1
                        progressed = True
                    elif not cb:
                        _set(node_connected, b)
                        node_out[nt] = b
                        nt += 1
                        progressed = True
                else:
                    work[w] = i
                    w += 1
            length = w
            remaining = w
            skip = -1
        if skip >= 0:
            # seed was the last segment; no sweep ran to drop it
            length = 0
        for k in range(node_bounds[nparts], nt):
            _clear(node_connected, node_out[k])
        nparts += 1
        node_bounds[nparts] = nt
        seg_bounds[nparts] = st
    return (
        node_out,
        node_bounds[: nparts + 1].copy(),
        seg_out,
        seg_bounds[: nparts + 1].copy(),
        sweeps,
        inspections,
    )
