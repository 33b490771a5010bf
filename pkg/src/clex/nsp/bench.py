"""Batch runner: solve instances under several model configurations."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

from ..engine import Limits, Outcome, solve
from .instance import NspInstance
from .model import ModelConfig, build_model

CSV_HEADER = ["config", "instance", "outcome", "nodes", "backtracks", "ms"]


@dataclass
class RunResult:
    config: str
    instance: str
    outcome: Outcome
    nodes: int
    backtracks: int
    ms: float
    solution: list[list[int]] | None = None

    @property
    def solved(self) -> bool:
        return self.outcome is not Outcome.LIMIT


@dataclass
class SummaryRow:
    config: str
    solved: int
    total: int
    avg_ms: float
    avg_backtracks: float


def run_instance(inst: NspInstance, config: ModelConfig, name: str = "",
                 limits: Limits | None = None) -> RunResult:
    nm = build_model(inst, config)
    st = solve(nm.model, nm.order, limits or config.limits)
    sol = nm.schedule(st.solution) if st.solution is not None else None
    return RunResult(config.name, name, st.outcome, st.nodes, st.backtracks, st.ms, sol)


def _job(args):
    inst, config, name, limits = args
    return run_instance(inst, config, name, limits)


def run_benchmark(instances: Sequence[NspInstance] | Sequence[tuple[str, NspInstance]],
                  configs: Sequence[ModelConfig], budget: Limits | None = None,
                  jobs: int = 1) -> list[RunResult]:
    """Every config on every instance; a timeout is recorded, never fatal.

    Results come back grouped by config, instances in input order, whatever
    the number of worker processes.
    """
    named = [(item if isinstance(item, tuple) else (f"inst{k:03d}", item))
             for k, item in enumerate(instances)]
    tasks = [(inst, cfg, name, budget) for cfg in configs for name, inst in named]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_job, tasks))
    return [_job(t) for t in tasks]


def summarize(results: Sequence[RunResult]) -> list[SummaryRow]:
    groups: dict[str, list[RunResult]] = {}
    for r in results:
        groups.setdefault(r.config, []).append(r)
    rows = []
    for cfg, rs in groups.items():
        solved = [r for r in rs if r.solved]
        k = len(solved)
        rows.append(SummaryRow(
            cfg, k, len(rs),
            sum(r.ms for r in solved) / k if k else 0.0,
            sum(r.backtracks for r in solved) / k if k else 0.0))
    return rows


def results_csv(results: Sequence[RunResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in results:
        w.writerow([r.config, r.instance, r.outcome.value, r.nodes, r.backtracks, f"{r.ms:.1f}"])
    return buf.getvalue()


def summary_text(rows: Sequence[SummaryRow]) -> str:
    head = ("config", "solved", "avg ms", "avg bt")
    body = [(r.config, f"{r.solved}/{r.total}", f"{r.avg_ms:.1f}", f"{r.avg_backtracks:.1f}")
            for r in rows]
    widths = [max(len(x) for x in col) for col in zip(head, *body)]
    fmt = "  ".join([f"{{:<{widths[0]}}}"] + [f"{{:>{w}}}" for w in widths[1:]])
    return "\n".join(fmt.format(*row) for row in [head, *body]) + "\n"


def with_limits(config: ModelConfig, limits: Limits) -> ModelConfig:
    return replace(config, limits=limits)
