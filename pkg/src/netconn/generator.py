"""Random networks with a prescribed size, connectivity index and partition count.

Each partition starts as a random spanning tree, which fixes the partition
count by construction, and is then topped up with extra segments between
uniformly drawn node pairs. Node labels and segment order are shuffled
afterwards so partitions are interleaved in the output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from netconn.errors import FeasibilityError, InvariantError
from netconn.model import INDEX_DTYPE, Network

MAX_ROUNDS = 100


@dataclass(frozen=True)
class GeneratorConfig:
    nodes: int
    c_target: Fraction | float | int | str
    partitions: int = 1
    seed: int = 0
    scatter_indices: bool = False
    allow_parallel: bool = False

    def __post_init__(self) -> None:
        c = self.c_target
        if isinstance(c, float):
            c = Fraction(c).limit_denominator(10**9)
        object.__setattr__(self, "c_target", Fraction(c))

    def partition_sizes(self) -> list[int]:
        base, extra = divmod(self.nodes, self.partitions)
        return [base + 1] * extra + [base] * (self.partitions - extra)

    def segments_for(self, n_p: int) -> int:
        """round(n_p * c / 2), halves rounded up."""
        return math.floor(Fraction(n_p) * self.c_target / 2 + Fraction(1, 2))

    def check(self) -> None:
        if self.partitions < 1:
            raise FeasibilityError("partitions must be >= 1")
        if self.nodes < 2 * self.partitions:
            raise FeasibilityError(
                f"nodes={self.nodes} < 2 * partitions={2 * self.partitions}"
            )
        if self.c_target <= 0:
            raise FeasibilityError("c_target must be positive")
        for n_p in sorted(set(self.partition_sizes())):
            m_p = self.segments_for(n_p)
            if m_p < n_p - 1:
                raise FeasibilityError(
                    f"c_target={self.c_target} too low: partition of {n_p} nodes "
                    f"needs M_p >= {n_p - 1}, got {m_p}"
                )
            cap = n_p * (n_p - 1) // 2
            if not self.allow_parallel and m_p > cap:
                raise FeasibilityError(
                    f"c_target={self.c_target} too high: partition of {n_p} nodes "
                    f"allows at most {cap} segments without parallels, needs {m_p}"
                )


def _pair_keys(u: np.ndarray, v: np.ndarray, n: int) -> np.ndarray:
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    return lo * n + hi


def _spanning_tree(rng: np.random.Generator, n: int) -> np.ndarray:
    perm = rng.permutation(n)
    if n == 1:
        return np.empty((0, 2), dtype=INDEX_DTYPE)
    # attach node perm[i] to a uniformly chosen earlier node
    earlier = np.floor(rng.random(n - 1) * np.arange(1, n)).astype(INDEX_DTYPE)
    return np.column_stack([perm[1:], perm[earlier]]).astype(INDEX_DTYPE)


def _extra_simple(rng: np.random.Generator, n: int, tree: np.ndarray, k: int) -> np.ndarray:
    """``k`` segments over node pairs not yet used, drawn uniformly."""
    if k == 0:
        return np.empty((0, 2), dtype=INDEX_DTYPE)
    used = np.sort(_pair_keys(tree[:, 0], tree[:, 1], n))
    chosen = np.empty(0, dtype=INDEX_DTYPE)
    for _ in range(MAX_ROUNDS):
        need = k - chosen.size
        if need == 0:
            break
        draw = max(2 * need, 16)
        u = rng.integers(0, n, draw)
        v = rng.integers(0, n, draw)
        keep = u != v
        keys = _pair_keys(u[keep], v[keep], n)
        pos = np.searchsorted(used, keys)
        fresh = keys[used[np.minimum(pos, used.size - 1)] != keys]
        _, first = np.unique(fresh, return_index=True)
        fresh = fresh[np.sort(first)][:need]
        chosen = np.concatenate([chosen, fresh])
        used = np.sort(np.concatenate([used, fresh]))
    need = k - chosen.size
    if need:
        # near the density cap: enumerate what is left and sample from it
        iu, ju = np.triu_indices(n, 1)
        all_keys = iu.astype(INDEX_DTYPE) * n + ju
        free = np.setdiff1d(all_keys, used, assume_unique=True)
        chosen = np.concatenate([chosen, rng.choice(free, size=need, replace=False)])
    return np.column_stack([chosen // n, chosen % n]).astype(INDEX_DTYPE)


def _extra_parallel(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    u = rng.integers(0, n, k)
    v = (u + rng.integers(1, n, k)) % n
    return np.column_stack([u, v]).astype(INDEX_DTYPE)


def generate_segments(cfg: GeneratorConfig) -> np.ndarray:
    cfg.check()
    rng = np.random.default_rng(cfg.seed)
    labels = rng.permutation(cfg.nodes).astype(INDEX_DTYPE)
    blocks = []
    offset = 0
    for n_p in cfg.partition_sizes():
        m_p = cfg.segments_for(n_p)
        tree = _spanning_tree(rng, n_p)
        k = m_p - (n_p - 1)
        if cfg.allow_parallel:
            extra = _extra_parallel(rng, n_p, k)
        else:
            extra = _extra_simple(rng, n_p, tree, k)
        local = np.concatenate([tree, extra])
        blocks.append(labels[offset + local])
        offset += n_p
    seg = np.concatenate(blocks)
    seg = seg[rng.permutation(seg.shape[0])]
    flip = rng.random(seg.shape[0]) < 0.5
    seg[flip] = seg[flip, ::-1]
    if cfg.scatter_indices:
        span = 10 * cfg.nodes + 1000
        sparse_ids = np.sort(rng.choice(span, size=cfg.nodes, replace=False))
        seg = sparse_ids[rng.permutation(cfg.nodes)][seg]
    return seg


def generate_network(cfg: GeneratorConfig, verify: bool = False) -> Network:
    """Build a random network for ``cfg``; deterministic in ``cfg.seed``.

    With ``verify`` the partition count is rechecked by disjoint-set union.
    """
    net = Network(generate_segments(cfg))
    if verify:
        from netconn.model import compact_indices
        from netconn.oracle import union_find_partitions

        dense = net if net.is_dense else compact_indices(net)[0]
        found = len(union_find_partitions(dense))
        if found != cfg.partitions or net.node_count != cfg.nodes:
            raise InvariantError(
                f"generated {found} partitions / {net.node_count} nodes, "
                f"expected {cfg.partitions} / {cfg.nodes}"
            )
    return net
