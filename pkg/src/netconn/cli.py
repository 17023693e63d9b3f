"""``netconn`` command line: check, partitions, stats, generate, bench, compact.

Exit codes: 0 success / totally connected, 1 partitioned network (check
only), 2 input or format error, 3 infeasible configuration, 4 failed
``--verify`` cross-check.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence, TextIO

import numpy as np

from netconn import bench
from netconn.errors import FeasibilityError, InvariantError, NetworkError
from netconn.generator import GeneratorConfig, generate_network
from netconn.model import (
    IndexMapping,
    Network,
    Partition,
    build_adjacency,
    classify_partition,
    compact_indices,
    compute_stats,
    format_mapping,
    format_network,
    format_ratio,
    node_family,
    parse_network_lines,
)
from netconn.node_mapping import assign_segments, find_partitions_node_mapping
from netconn.oracle import direct_inspection_connected, union_find_partitions
from netconn.segment_mapping import RemovalVariant, find_partitions_segment_mapping

EXIT_OK = 0
EXIT_PARTITIONED = 1
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_VERIFY = 4


def _load(path: str) -> tuple[Network, Network, IndexMapping, np.ndarray]:
    data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    net, lines = parse_network_lines(data)
    dense, mapping = compact_indices(net)
    return net, dense, mapping, lines


def _partitions(dense: Network, algorithm: str) -> list[Partition]:
    if algorithm == "node":
        return assign_segments(dense, find_partitions_node_mapping(build_adjacency(dense)))
    return find_partitions_segment_mapping(dense)


def _verify(dense: Network, parts: Sequence[Partition], err: TextIO) -> bool:
    oracle = union_find_partitions(dense)
    connected = direct_inspection_connected(build_adjacency(dense), 0)
    ok = node_family(parts) == node_family(oracle) and connected == (len(parts) == 1)
    if not ok:
        print(
            f"VERIFY FAILED: algorithm found {len(parts)} partitions, "
            f"union-find {len(oracle)}, direct inspection connected={connected}",
            file=err,
        )
    return ok


def _open_out(path: str | None) -> TextIO:
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="\n")


def cmd_check(args: argparse.Namespace) -> int:
    _, dense, _, _ = _load(args.file)
    parts = _partitions(dense, args.algorithm)
    print(f"partitions: {len(parts)}")
    print(f"N: {dense.node_count}")
    print(f"M: {dense.segment_count}")
    print(f"c_avg: {format_ratio(Fraction(2 * dense.segment_count, dense.node_count))}")
    if args.verify:
        if not _verify(dense, parts, sys.stderr):
            return EXIT_VERIFY
        print("verify: ok")
    return EXIT_OK if len(parts) == 1 else EXIT_PARTITIONED


def format_manifest(
    dense: Network, parts: Sequence[Partition], mapping: IndexMapping, lines: np.ndarray
) -> str:
    blocks = []
    for k, p in enumerate(parts, start=1):
        nodes = np.sort(mapping.restore(p.nodes))
        seg_lines = np.sort(lines[p.segment_indices])
        blocks.append(
            f"partition {k}: nodes={p.node_count} segments={p.segment_count} "
            f"class={classify_partition(dense, p)}\n"
            f"nodes: {' '.join(map(str, nodes.tolist()))}\n"
            f"segments(lines): {' '.join(map(str, seg_lines.tolist()))}\n"
        )
    return "\n".join(blocks)


def cmd_partitions(args: argparse.Namespace) -> int:
    _, dense, mapping, lines = _load(args.file)
    parts = _partitions(dense, args.algorithm)
    if args.verify and not _verify(dense, parts, sys.stderr):
        return EXIT_VERIFY
    out = _open_out(args.out)
    try:
        out.write(format_manifest(dense, parts, mapping, lines))
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    _, dense, _, _ = _load(args.file)
    parts = _partitions(dense, args.algorithm)
    stats = compute_stats(dense, parts)
    print(f"N: {stats.N}")
    print(f"M: {stats.M}")
    print(f"c_avg: {stats.c_avg} ({format_ratio(stats.c_avg)})")
    for cls, count in stats.histogram.items():
        print(f"{cls.value}: {count}")
    for c, count in stats.degree_histogram.items():
        print(f"c={c}: {count}")
    print(f"partitions: {stats.partition_count}")
    for k, topo in enumerate(stats.partition_classes, start=1):
        print(f"partition {k}: {topo}")
    return EXIT_OK


def _generator_config(args: argparse.Namespace) -> GeneratorConfig:
    return GeneratorConfig(
        nodes=args.nodes,
        c_target=Fraction(args.cavg),
        partitions=args.partitions,
        seed=args.seed,
        scatter_indices=args.scatter,
        allow_parallel=args.allow_parallel,
    )


def cmd_generate(args: argparse.Namespace) -> int:
    net = generate_network(_generator_config(args), verify=args.verify)
    out = _open_out(args.out)
    try:
        out.write(format_network(net))
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _parse_values(text: str) -> tuple:
    vals = []
    for tok in text.split(","):
        frac = Fraction(tok.strip())
        vals.append(frac.numerator if frac.denominator == 1 else frac)
    return tuple(vals)


def cmd_bench(args: argparse.Namespace) -> int:
    variable = bench.SweepVariable.parse(args.sweep)
    values = _parse_values(args.values) if args.values else bench.default_values(variable)
    cfg = bench.SweepConfig(
        sweep_variable=variable,
        values=values,
        nodes=args.nodes,
        c_target=Fraction(args.cavg),
        partitions=args.partitions,
        repeats=args.repeats,
        seed=args.seed,
        include_prep=args.include_prep,
        variant=RemovalVariant(args.variant),
    )
    records = bench.run_sweep(cfg)
    bench.check_memory_columns(records, cfg.variant)
    fits = bench.fit_all(records)
    if args.out:
        bench.write_csv(records, fits, args.out)
    else:
        sys.stdout.write(bench.format_csv(records))
    for name, fit in fits.items():
        flag = " (degenerate)" if fit.degenerate else ""
        print(f"fit {name}: slope={fit.slope:.6g} intercept={fit.intercept:.6g} "
              f"r2={fit.r_squared:.4f}{flag}", file=sys.stderr)
    if variable is bench.SweepVariable.PARTITION_COUNT and len(values) >= 2:
        nm = bench.trend_ratio(records, "node_mapping")
        sm = bench.trend_ratio(records, "segment_mapping")
        print(f"trend t(last)/t(first): node_mapping={nm:.3f} segment_mapping={sm:.3f}",
              file=sys.stderr)
        if sm <= nm:
            print("WARNING: segment mapping did not degrade faster than node mapping "
                  "with partition count", file=sys.stderr)
    return EXIT_OK


def cmd_compact(args: argparse.Namespace) -> int:
    _, dense, mapping, _ = _load(args.file)
    out = _open_out(args.out)
    try:
        out.write(format_network(dense))
    finally:
        if out is not sys.stdout:
            out.close()
    if args.map_out:
        Path(args.map_out).write_text(format_mapping(mapping), encoding="utf-8")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netconn", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def algo(p: argparse.ArgumentParser, default: str = "segment") -> None:
        p.add_argument("--algorithm", choices=("node", "segment"), default=default)

    p = sub.add_parser("check", help="test total connectivity")
    p.add_argument("file")
    algo(p)
    p.add_argument("--verify", action="store_true", help="cross-check against oracles")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("partitions", help="write the partition manifest")
    p.add_argument("file")
    algo(p)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_partitions)

    p = sub.add_parser("stats", help="node classes, c_avg, partition topology")
    p.add_argument("file")
    algo(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("generate", help="random network")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--cavg", default="5")
    p.add_argument("--partitions", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scatter", action="store_true", help="sparse random node ids")
    p.add_argument("--allow-parallel", action="store_true")
    p.add_argument("--verify", action="store_true", help="recount partitions")
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="timing sweep to CSV")
    p.add_argument("--sweep", required=True,
                   choices=("nodes", "cavg", "partitions", "node_count",
                            "connectivity_index", "partition_count"))
    p.add_argument("--values", help="comma-separated sweep points")
    p.add_argument("--nodes", type=int, default=500_000)
    p.add_argument("--cavg", default="5")
    p.add_argument("--partitions", type=int, default=1)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--variant", choices=("direct", "lazy"), default="direct")
    p.add_argument("--include-prep", action="store_true",
                   help="time adjacency construction with node mapping")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("compact", help="re-index nodes densely")
    p.add_argument("file")
    p.add_argument("--out")
    p.add_argument("--map-out")
    p.set_defaults(func=cmd_compact)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except FeasibilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except InvariantError as exc:
        print(f"VERIFY FAILED: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (NetworkError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
