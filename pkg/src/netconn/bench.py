"""Timing sweeps over node count, connectivity index and partition count."""

from __future__ import annotations

import csv
import enum
import io
import logging
import statistics
import time
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from netconn.errors import FeasibilityError, InsufficientDataError, InvariantError
from netconn.generator import GeneratorConfig, generate_network
from netconn.model import (
    SlotCounter,
    build_adjacency,
    compact_indices,
    format_ratio,
    node_family,
)
from netconn.node_mapping import find_partitions_node_mapping, memory_estimate_node_mapping
from netconn.segment_mapping import (
    RemovalVariant,
    find_partitions_segment_mapping,
    memory_estimate_segment_mapping,
)

log = logging.getLogger(__name__)

ALGORITHMS = ("node_mapping", "segment_mapping")

CSV_COLUMNS = [
    "sweep_variable",
    "sweep_value",
    "algorithm",
    "N",
    "M",
    "P",
    "c_avg",
    "mean_seconds",
    "stddev_seconds",
    "bool_slots",
    "int_slots",
]


class SweepVariable(enum.Enum):
    NODE_COUNT = "node_count"
    CONNECTIVITY_INDEX = "connectivity_index"
    PARTITION_COUNT = "partition_count"

    @classmethod
    def parse(cls, text: str) -> SweepVariable:
        aliases = {"nodes": cls.NODE_COUNT, "cavg": cls.CONNECTIVITY_INDEX,
                   "connectivity": cls.CONNECTIVITY_INDEX, "partitions": cls.PARTITION_COUNT}
        if text in aliases:
            return aliases[text]
        return cls(text)


@dataclass(frozen=True)
class SweepConfig:
    sweep_variable: SweepVariable
    values: tuple
    nodes: int = 500_000
    c_target: Fraction = Fraction(5)
    partitions: int = 1
    repeats: int = 5
    seed: int = 0
    include_prep: bool = False
    variant: RemovalVariant = RemovalVariant.DIRECT

    def __post_init__(self) -> None:
        if self.repeats < 3:
            raise FeasibilityError("repeats must be >= 3")
        if not self.values:
            raise FeasibilityError("sweep needs at least one value")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise FeasibilityError("sweep values must be strictly increasing")

    def point_config(self, index: int) -> GeneratorConfig:
        value = self.values[index]
        cfg = GeneratorConfig(
            nodes=self.nodes,
            c_target=self.c_target,
            partitions=self.partitions,
            seed=self.seed + index,
        )
        if self.sweep_variable is SweepVariable.NODE_COUNT:
            cfg = replace(cfg, nodes=int(value))
        elif self.sweep_variable is SweepVariable.CONNECTIVITY_INDEX:
            cfg = replace(cfg, c_target=Fraction(value))
        else:
            cfg = replace(cfg, partitions=int(value))
        return cfg


@dataclass(frozen=True)
class BenchRecord:
    algorithm: str
    sweep_variable: str
    sweep_value: float
    mean_seconds: float
    stddev_seconds: float
    N: int
    M: int
    P: int
    bool_slots: int
    int_slots: int
    warnings: tuple[str, ...] = field(default=(), compare=False)

    @property
    def c_avg(self) -> Fraction:
        return Fraction(2 * self.M, self.N)


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    r_squared: float
    degenerate: bool = False


def time_call(fn: Callable[[], object], repeats: int) -> list[float]:
    """Wall-clock times of ``repeats`` calls after one discarded warm-up."""
    fn()
    out = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return out


def _bench_point(cfg: SweepConfig, index: int) -> list[BenchRecord]:
    gen_cfg = cfg.point_config(index)
    try:
        gen_cfg.check()
    except FeasibilityError as exc:
        raise FeasibilityError(f"sweep point {cfg.values[index]}: {exc}") from None
    net = generate_network(gen_cfg)
    if not net.is_dense:
        net = compact_indices(net)[0]
    adj = build_adjacency(net)
    n, m = net.node_count, net.segment_count

    # a benchmark on wrong output is void
    nm_counter, sm_counter = SlotCounter(), SlotCounter()
    nm_parts = find_partitions_node_mapping(adj, counter=nm_counter)
    sm_parts = find_partitions_segment_mapping(net, cfg.variant, counter=sm_counter)
    if node_family(nm_parts) != node_family(sm_parts):
        raise InvariantError(f"algorithms disagree at sweep point {cfg.values[index]}")
    if nm_counter.estimate() != memory_estimate_node_mapping(n, m):
        raise InvariantError("node mapping slot count differs from its estimate")
    if sm_counter.estimate() != memory_estimate_segment_mapping(n, m, cfg.variant):
        raise InvariantError("segment mapping slot count differs from its estimate")

    if cfg.include_prep:
        def run_nm() -> object:
            return find_partitions_node_mapping(build_adjacency(net))
    else:
        def run_nm() -> object:
            return find_partitions_node_mapping(adj)

    def run_sm() -> object:
        return find_partitions_segment_mapping(net, cfg.variant)

    resolution = time.get_clock_info("perf_counter").resolution
    records = []
    for name, fn, counter in (
        ("node_mapping", run_nm, nm_counter),
        ("segment_mapping", run_sm, sm_counter),
    ):
        times = time_call(fn, cfg.repeats)
        notes: tuple[str, ...] = ()
        if resolution > 0.01 * min(times):
            msg = f"{name} at {cfg.values[index]}: timer resolution {resolution:g}s coarse"
            warnings.warn(msg, RuntimeWarning, stacklevel=2)
            notes = (msg,)
        records.append(
            BenchRecord(
                algorithm=name,
                sweep_variable=cfg.sweep_variable.value,
                sweep_value=cfg.values[index],
                mean_seconds=statistics.fmean(times),
                stddev_seconds=statistics.stdev(times),
                N=n,
                M=m,
                P=len(nm_parts),
                bool_slots=counter.bool_slots,
                int_slots=counter.int_slots,
                warnings=notes,
            )
        )
    return records


def run_sweep(cfg: SweepConfig) -> list[BenchRecord]:
    for i in range(len(cfg.values)):
        try:
            cfg.point_config(i).check()
        except FeasibilityError as exc:
            raise FeasibilityError(f"sweep point {cfg.values[i]}: {exc}") from None
    records: list[BenchRecord] = []
    for i, value in enumerate(cfg.values):
        log.info("sweep %s = %s", cfg.sweep_variable.value, value)
        records.extend(_bench_point(cfg, i))
    return records


def linear_fit(records: Sequence[BenchRecord], algorithm: str) -> LinearFit:
    """Ordinary least squares of mean time against sweep value."""
    rows = [r for r in records if r.algorithm == algorithm]
    if len(rows) < 4:
        raise InsufficientDataError(f"{algorithm}: {len(rows)} points, need >= 4")
    x = np.array([float(r.sweep_value) for r in rows])
    y = np.array([r.mean_seconds for r in rows])
    sxx = float(((x - x.mean()) ** 2).sum())
    if sxx == 0:
        raise InsufficientDataError("all sweep values are equal")
    slope = float(((x - x.mean()) * (y - y.mean())).sum()) / sxx
    intercept = float(y.mean() - slope * x.mean())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    if ss_tot == 0:
        return LinearFit(slope, intercept, 0.0, degenerate=True)
    ss_res = float(((y - (slope * x + intercept)) ** 2).sum())
    r2 = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return LinearFit(slope, intercept, round(r2, 4))


def trend_ratio(records: Sequence[BenchRecord], algorithm: str) -> float:
    """Time at the last sweep point over time at the first."""
    rows = [r for r in records if r.algorithm == algorithm]
    return rows[-1].mean_seconds / rows[0].mean_seconds


def check_memory_columns(records: Sequence[BenchRecord], variant: RemovalVariant) -> None:
    for r in records:
        if r.algorithm == "node_mapping":
            est = memory_estimate_node_mapping(r.N, r.M)
        else:
            est = memory_estimate_segment_mapping(r.N, r.M, variant)
        if (r.bool_slots, r.int_slots) != (est.bool_slots, est.int_slots):
            raise InvariantError(f"memory columns disagree with estimate: {r}")


def _value_text(v: float) -> str:
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else str(v.numerator)
    if isinstance(v, float) and v.is_integer():
        return str(int(v))
    return str(v)


def format_csv(records: Sequence[BenchRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([
            r.sweep_variable,
            _value_text(r.sweep_value),
            r.algorithm,
            r.N,
            r.M,
            r.P,
            format_ratio(r.c_avg, 6),
            repr(r.mean_seconds),
            repr(r.stddev_seconds),
            r.bool_slots,
            r.int_slots,
        ])
    return buf.getvalue()


def write_csv(
    records: Sequence[BenchRecord],
    fits: dict[str, LinearFit] | None,
    path: str | Path,
) -> None:
    """Write records per CSV_COLUMNS; fits, if any, go to ``<stem>.fits.csv``."""
    path = Path(path)
    path.write_text(format_csv(records), encoding="utf-8", newline="")
    if fits:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["algorithm", "slope", "intercept", "r_squared", "degenerate"])
        for name, fit in fits.items():
            writer.writerow([name, repr(fit.slope), repr(fit.intercept),
                             f"{fit.r_squared:.4f}", int(fit.degenerate)])
        path.with_suffix(".fits.csv").write_text(buf.getvalue(), encoding="utf-8", newline="")


def fit_all(records: Sequence[BenchRecord]) -> dict[str, LinearFit]:
    present = [a for a in ALGORITHMS if sum(r.algorithm == a for r in records) >= 4]
    return {a: linear_fit(records, a) for a in present}


def default_values(variable: SweepVariable) -> tuple:
    if variable is SweepVariable.NODE_COUNT:
        return (100_000, 200_000, 400_000, 800_000, 1_600_000)
    if variable is SweepVariable.CONNECTIVITY_INDEX:
        return (3, 4, 5, 6, 7, 8)
    return (1, 2, 4, 8, 16, 32, 64)
