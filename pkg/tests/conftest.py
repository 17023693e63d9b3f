from __future__ import annotations

import itertools
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from netconn.generator import GeneratorConfig
from netconn.model import Network

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def triangle() -> Network:
    return Network.from_pairs([(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def two_pieces() -> Network:
    return Network.from_pairs([(0, 1), (2, 3)])


def closure_components(n: int, pairs: list[tuple[int, int]]) -> set[frozenset[int]]:
    """Components from the full N x N reachability matrix (Warshall closure)."""
    reach = [[i == j for j in range(n)] for i in range(n)]
    for a, b in pairs:
        reach[a][b] = reach[b][a] = True
    for k, i, j in itertools.product(range(n), repeat=3):
        if reach[i][k] and reach[k][j]:
            reach[i][j] = True
    return {frozenset(j for j in range(n) if reach[i][j]) for i in range(n)}


@st.composite
def dense_networks(draw, max_nodes: int = 30, max_segments: int = 60) -> Network:
    """Dense-indexed multigraphs, possibly disconnected, no self-loops."""
    n = draw(st.integers(2, max_nodes))
    pairs = draw(
        st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda t: t[0] != t[1]),
            min_size=1,
            max_size=max_segments,
        )
    )
    # relabel so that indices are exactly 0..N'-1
    used = sorted({v for p in pairs for v in p})
    rank = {v: i for i, v in enumerate(used)}
    return Network.from_pairs([(rank[a], rank[b]) for a, b in pairs])


def stream_config(rng: np.random.Generator, max_nodes: int = 200) -> GeneratorConfig:
    """One random generator config from the acceptance sampling space."""
    partitions = int(rng.integers(1, 9))
    nodes = int(rng.integers(2 * partitions, max_nodes + 1))
    c_target = Fraction(int(rng.integers(200, 801)), 100)
    cfg = GeneratorConfig(
        nodes=nodes,
        c_target=c_target,
        partitions=partitions,
        seed=int(rng.integers(0, 2**63)),
        scatter_indices=bool(rng.integers(0, 2)),
    )
    smallest = min(cfg.partition_sizes())
    if cfg.segments_for(smallest) > smallest * (smallest - 1) // 2:
        cfg = replace(cfg, allow_parallel=True)
    return cfg
