from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dense_networks
from netconn.errors import (
    EmptyNetworkError,
    FormatError,
    InvariantError,
    MappingError,
    PreconditionError,
)
from netconn.generator import GeneratorConfig, generate_network
from netconn.model import (
    IndexMapping,
    Network,
    NodeClass,
    Partition,
    Topology,
    build_adjacency,
    classify_partition,
    compact_indices,
    compute_stats,
    format_mapping,
    format_network,
    parse_mapping,
    parse_network,
    parse_network_lines,
    restore_indices,
)
from netconn.oracle import brute_force_bridges, union_find_partitions


class TestParse:
    def test_two_lines(self):
        net = parse_network(b"1 2\n2 3\n")
        assert net.segment_count == 2
        assert net.node_count == 3
        assert net.node_ids.tolist() == [1, 2, 3]

    def test_self_loop_reports_line(self):
        with pytest.raises(FormatError, match="line 1") as info:
            parse_network(b"4 4\n")
        assert info.value.line == 1

    def test_comment_and_sparse_ids(self):
        net = parse_network(b"# comment\n5 9\n9 42\n")
        assert net.segment_count == 2
        assert net.node_ids.tolist() == [5, 9, 42]

    def test_line_numbers_count_comments_and_blanks(self):
        _, lines = parse_network_lines("# a\n\n0 1\n# b\n1 2\n")
        assert lines.tolist() == [3, 5]

    @pytest.mark.parametrize(
        "text, line",
        [("0 1\n1 x\n", 2), ("0 1 2\n", 1), ("0\n", 1), ("-1 2\n", 1), ("0 1\n\n3 3\n", 3)],
    )
    def test_bad_lines(self, text, line):
        with pytest.raises(FormatError) as info:
            parse_network(text)
        assert info.value.line == line

    @pytest.mark.parametrize("text", ["", "# only a comment\n", "\n\n"])
    def test_empty(self, text):
        with pytest.raises(EmptyNetworkError):
            parse_network(text)

    def test_parallel_segments_kept(self):
        net = parse_network("0 1\n1 0\n0 1\n")
        assert net.segment_count == 3
        assert net.node_count == 2

    def test_write_round_trip(self):
        text = "5 9\n9 42\n42 5\n"
        assert format_network(parse_network(text)) == text


class TestCompaction:
    def test_first_appearance_order(self):
        net = Network.from_pairs([(5, 9), (9, 42)])
        dense, mapping = compact_indices(net)
        assert dense.pairs() == [(0, 1), (1, 2)]
        assert mapping.original_of.tolist() == [5, 9, 42]

    def test_dense_input_is_identity(self):
        net = Network.from_pairs([(0, 1), (1, 2)])
        dense, mapping = compact_indices(net)
        assert dense == net
        assert mapping.is_identity()

    def test_first_appearance_not_sorted_order(self):
        dense, mapping = compact_indices(Network.from_pairs([(7, 3), (3, 1)]))
        assert dense.pairs() == [(0, 1), (1, 2)]
        assert mapping.original_of.tolist() == [7, 3, 1]

    def test_restore(self):
        mapping = IndexMapping(np.array([5, 9, 42]))
        net = restore_indices(Network.from_pairs([(0, 1), (1, 2)]), mapping)
        assert net.pairs() == [(5, 9), (9, 42)]

    def test_restore_identity(self):
        net = Network.from_pairs([(0, 1), (1, 2)])
        assert restore_indices(net, IndexMapping.identity(3)) == net

    def test_restore_out_of_domain(self):
        with pytest.raises(MappingError):
            restore_indices(Network.from_pairs([(0, 3)]), IndexMapping(np.array([5, 9, 42])))

    def test_compact_of_inverts_original_of(self):
        mapping = IndexMapping(np.array([42, 5, 9]))
        assert mapping.compact_of(np.array([5, 9, 42])).tolist() == [1, 2, 0]
        with pytest.raises(MappingError):
            mapping.compact_of(7)

    def test_mapping_serialisation(self):
        mapping = IndexMapping(np.array([5, 9, 42]))
        text = format_mapping(mapping)
        assert text == "0 5\n1 9\n2 42\n"
        assert parse_mapping(text) == mapping

    def test_random_sparse_round_trip(self):
        cfg = GeneratorConfig(nodes=50, c_target=3, partitions=2, seed=3, scatter_indices=True)
        net = generate_network(cfg)
        assert not net.is_dense
        dense, mapping = compact_indices(net)
        assert dense.is_dense and dense.node_count == 50
        assert format_network(restore_indices(dense, mapping)) == format_network(net)

    @settings(max_examples=1000, deadline=None)
    @given(
        pairs=st.lists(
            st.tuples(st.integers(0, 10**6), st.integers(0, 10**6)).filter(lambda t: t[0] != t[1]),
            min_size=1,
            max_size=40,
        )
    )
    def test_compact_restore_property(self, pairs):
        net = Network.from_pairs(pairs)
        dense, mapping = compact_indices(net)
        assert dense.is_dense
        restored = restore_indices(dense, mapping)
        assert format_network(restored) == format_network(net)
        # the other direction: restoring then compacting a dense net is identity
        again, mapping2 = compact_indices(restored)
        assert again == dense and mapping2 == mapping


class TestAdjacency:
    def test_triangle(self, triangle):
        adj = build_adjacency(triangle)
        assert [adj.neighbors(u) for u in range(3)] == [[1, 2], [0, 2], [1, 0]]
        assert adj.entry_count == 6

    def test_single_segment(self):
        adj = build_adjacency(Network.from_pairs([(0, 1)]))
        assert adj.neighbors(0) == [1] and adj.neighbors(1) == [0]

    def test_parallel(self):
        adj = build_adjacency(Network.from_pairs([(0, 1), (0, 1)]))
        assert adj.neighbors(0) == [1, 1]
        assert adj.degrees().tolist() == [2, 2]

    def test_requires_dense(self):
        with pytest.raises(PreconditionError):
            build_adjacency(Network.from_pairs([(0, 5)]))

    @settings(max_examples=200, deadline=None)
    @given(net=dense_networks())
    def test_symmetric_and_degree_sum(self, net):
        adj = build_adjacency(net)
        assert adj.entry_count == 2 * net.segment_count
        assert adj.degrees().sum() == 2 * net.segment_count
        assert np.array_equal(adj.degrees(), net.degrees())
        for u in range(adj.node_count):
            for v in set(adj.neighbors(u)):
                assert adj.neighbors(u).count(v) == adj.neighbors(v).count(u)


def _whole(net: Network) -> list[Partition]:
    return [Partition(np.arange(net.node_count), np.arange(net.segment_count))]


class TestStats:
    def test_triangle(self, triangle):
        stats = compute_stats(triangle, _whole(triangle))
        assert (stats.N, stats.M, stats.c_avg) == (3, 3, Fraction(2))
        assert stats.histogram == {NodeClass.BOUNDARY: 0, NodeClass.BRIDGE: 3, NodeClass.BIFURCATION: 0}
        assert stats.partition_classes == (Topology.CLOSED,)

    def test_path(self):
        path = Network.from_pairs([(0, 1), (1, 2)])
        stats = compute_stats(path, _whole(path))
        assert stats.c_avg == Fraction(4, 3)
        assert stats.histogram[NodeClass.BOUNDARY] == 2
        assert stats.histogram[NodeClass.BRIDGE] == 1

    def test_pendant(self):
        net = Network.from_pairs([(0, 1), (1, 2), (0, 2), (2, 3)])
        stats = compute_stats(net, _whole(net))
        assert stats.degree_histogram == {1: 1, 2: 2, 3: 1}
        assert stats.partition_classes == (Topology.SEMI_CLOSED,)

    def test_comp1_regime_average(self):
        net = generate_network(GeneratorConfig(nodes=20_000, c_target=5, seed=1))
        stats = compute_stats(net, union_find_partitions(net))
        assert abs(stats.c_avg - 5) <= Fraction(1, 20_000)

    def test_bad_cover(self, two_pieces):
        with pytest.raises(InvariantError):
            compute_stats(two_pieces, [Partition([0, 1], [0])])
        with pytest.raises(InvariantError):
            compute_stats(two_pieces, [Partition([0, 1], [1]), Partition([2, 3], [0])])

    @settings(max_examples=200, deadline=None)
    @given(net=dense_networks())
    def test_histogram_sums(self, net):
        stats = compute_stats(net, union_find_partitions(net))
        assert sum(stats.histogram.values()) == stats.N
        assert sum(c * k for c, k in stats.degree_histogram.items()) == 2 * stats.M
        assert stats.c_avg * stats.N == 2 * stats.M


class TestClassify:
    def test_path_open(self):
        net = Network.from_pairs([(0, 1), (1, 2)])
        assert classify_partition(net, _whole(net)[0]) is Topology.OPEN

    def test_triangle_closed(self, triangle):
        assert classify_partition(triangle, _whole(triangle)[0]) is Topology.CLOSED

    def test_pendant_semi_closed(self):
        pairs = [(0, 1), (1, 2), (0, 2), (2, 3)]
        assert brute_force_bridges(4, pairs) == [3]
        net = Network.from_pairs(pairs)
        assert classify_partition(net, _whole(net)[0]) is Topology.SEMI_CLOSED

    def test_parallel_pair_is_closed(self):
        net = Network.from_pairs([(0, 1), (1, 0)])
        assert classify_partition(net, _whole(net)[0]) is Topology.CLOSED

    def test_disconnected_rejected(self, two_pieces):
        with pytest.raises(PreconditionError):
            classify_partition(two_pieces, _whole(two_pieces)[0])

    def test_needs_segments(self, triangle):
        with pytest.raises(PreconditionError):
            classify_partition(triangle, Partition([0, 1, 2]))

    @settings(max_examples=300, deadline=None)
    @given(net=dense_networks(max_nodes=12, max_segments=20))
    def test_matches_brute_force(self, net):
        for part in union_find_partitions(net):
            topo = classify_partition(net, part)
            nodes = part.nodes.tolist()
            rank = {v: i for i, v in enumerate(nodes)}
            pairs = [(rank[a], rank[b]) for a, b in net.segments[part.segment_indices].tolist()]
            bridges = brute_force_bridges(len(nodes), pairs)
            if len(pairs) == len(nodes) - 1:
                assert topo is Topology.OPEN
            elif not bridges:
                assert topo is Topology.CLOSED
            else:
                assert topo is Topology.SEMI_CLOSED


def test_network_rejects_self_loop_and_empty():
    with pytest.raises(FormatError):
        Network.from_pairs([(0, 1), (2, 2)])
    with pytest.raises(EmptyNetworkError):
        Network.from_pairs([])


def test_node_class_boundaries():
    assert NodeClass.of(1) is NodeClass.BOUNDARY
    assert NodeClass.of(2) is NodeClass.BRIDGE
    assert NodeClass.of(7) is NodeClass.BIFURCATION
    with pytest.raises(InvariantError):
        NodeClass.of(0)
