from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import closure_components, dense_networks
from netconn.errors import PreconditionError
from netconn.generator import GeneratorConfig, generate_network
from netconn.model import Network, build_adjacency, check_cover, compact_indices
from netconn.oracle import (
    DisjointSet,
    brute_force_bridges,
    direct_inspection_connected,
    reachability_row,
    triangular_pair_connected,
    union_find_partitions,
)


def test_direct_inspection_examples(triangle, two_pieces):
    assert direct_inspection_connected(build_adjacency(triangle), 0)
    assert not direct_inspection_connected(build_adjacency(two_pieces), 0)


def test_reachability_row_is_reflexive(two_pieces):
    row = reachability_row(build_adjacency(two_pieces), 2)
    assert row.tolist() == [False, False, True, True]


def test_origin_out_of_range(triangle):
    with pytest.raises(PreconditionError):
        direct_inspection_connected(build_adjacency(triangle), 3)


def test_triangular_examples(triangle, two_pieces):
    assert triangular_pair_connected(build_adjacency(triangle))
    assert not triangular_pair_connected(build_adjacency(two_pieces))


def test_triangular_refuses_large():
    path = Network.from_pairs([(i, i + 1) for i in range(70)])
    with pytest.raises(PreconditionError):
        triangular_pair_connected(build_adjacency(path))


def test_union_find_examples(triangle):
    parts = union_find_partitions(triangle)
    assert [p.nodes.tolist() for p in parts] == [[0, 1, 2]]
    parts = union_find_partitions(Network.from_pairs([(0, 1), (2, 3), (1, 4)]))
    assert [p.nodes.tolist() for p in parts] == [[0, 1, 4], [2, 3]]
    assert [p.segment_indices.tolist() for p in parts] == [[0, 2], [1]]


def test_disjoint_set_union_returns_root():
    ds = DisjointSet(4)
    ds.union(0, 1)
    ds.union(2, 3)
    assert ds.find(1) == ds.find(0) != ds.find(2)
    ds.union(1, 3)
    assert len({ds.find(v) for v in range(4)}) == 1


@settings(max_examples=400, deadline=None)
@given(net=dense_networks(max_nodes=12, max_segments=18))
def test_union_find_against_closure(net):
    parts = union_find_partitions(net)
    check_cover(net, parts)
    expected = closure_components(net.node_count, net.pairs())
    assert {p.node_set() for p in parts} == expected


@settings(max_examples=300, deadline=None)
@given(net=dense_networks(max_nodes=20, max_segments=30))
def test_reductions_agree(net):
    adj = build_adjacency(net)
    connected = len(union_find_partitions(net)) == 1
    answers = {direct_inspection_connected(adj, o) for o in range(net.node_count)}
    assert answers == {connected}
    assert triangular_pair_connected(adj) == connected


def test_origin_independence_on_generated_networks():
    rng = np.random.default_rng(11)
    for _ in range(100):
        parts = int(rng.integers(1, 4))
        cfg = GeneratorConfig(
            nodes=int(rng.integers(2 * parts, 51)),
            c_target=2,
            partitions=parts,
            seed=int(rng.integers(0, 2**32)),
            scatter_indices=True,
            allow_parallel=True,
        )
        dense, _ = compact_indices(generate_network(cfg))
        adj = build_adjacency(dense)
        answers = {direct_inspection_connected(adj, o) for o in range(dense.node_count)}
        assert answers == {parts == 1}


def test_brute_force_bridges():
    assert brute_force_bridges(3, [(0, 1), (1, 2)]) == [0, 1]
    assert brute_force_bridges(3, [(0, 1), (1, 2), (2, 0)]) == []
    assert brute_force_bridges(2, [(0, 1), (0, 1)]) == []
