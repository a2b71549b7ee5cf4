"""Benchmark driver: heuristic-vs-exact gap studies over generated suites.

Generates seeded instance suites, solves each with the reverse
Cuthill-McKee heuristic and the exact branch-and-bound, and assembles
per-instance gap rows plus aggregate statistics.  Reports round-trip
through CSV byte-identically.
"""

from __future__ import annotations

import json
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .exact import STATUS_OPTIMAL, SolveConfig, branch_and_bound
from .instance import GenerationError, generate, interaction_matrix
from .metrics import rcm_gap, weighted_bandwidth
from .rcm import rcm_on_instance

CSV_HEADER = (
    "id",
    "n",
    "seed",
    "obj_rcm",
    "opt",
    "gap_percent",
    "status",
    "nodes_on",
    "nodes_off",
    "wall_time_s",
)

# spread replicate seeds far apart per size so suites never collide
_SEED_STRIDE = 1_000_003


@dataclass(frozen=True)
class GapRow:
    """One instance's heuristic-vs-optimal comparison.

    ``nodes_on`` counts branch-and-bound nodes with the anchor-position
    restriction active; ``nodes_off`` is the rerun without it (None when
    the A/B comparison was not requested).  ``opt`` is the best objective
    found; ``status`` says whether it is proven optimal.
    """

    id: str
    n: int
    seed: int
    obj_rcm: float
    opt: float
    gap_percent: float
    status: str
    nodes_on: int
    nodes_off: int | None
    wall_time_s: float


@dataclass(frozen=True)
class GapReport:
    """Ordered collection of gap rows, stable by (n, replicate)."""

    rows: tuple[GapRow, ...]


def _solve_one(
    n: int, replicate: int, seed0: int, cfg: SolveConfig, ab_compare: bool
) -> GapRow:
    seed = seed0 + _SEED_STRIDE * n + replicate
    try:
        inst = generate(n, seed)
    except GenerationError as exc:
        raise GenerationError(f"instance n={n} seed={seed}: {exc}") from exc
    U = interaction_matrix(inst)
    heuristic = rcm_on_instance(inst)
    obj_rcm = weighted_bandwidth(U, heuristic).value
    result = branch_and_bound(U, cfg, warm_start=heuristic)
    nodes_off = None
    if ab_compare:
        off_cfg = replace(cfg, use_symmetry_breaking=False)
        nodes_off = branch_and_bound(U, off_cfg, warm_start=heuristic).nodes_explored
    return GapRow(
        id=inst.id,
        n=n,
        seed=seed,
        obj_rcm=obj_rcm,
        opt=result.objective,
        gap_percent=rcm_gap(obj_rcm, result.objective),
        status=result.status,
        nodes_on=result.nodes_explored,
        nodes_off=nodes_off,
        wall_time_s=result.wall_time,
    )


def run_suite(
    sizes: list[int],
    per_size: int,
    seed0: int,
    cfg: SolveConfig | None = None,
    ab_compare: bool = False,
    jobs: int = 1,
) -> GapReport:
    """Generate and solve a suite, one row per (size, replicate).

    Each instance gets seed ``seed0 + 1000003*n + replicate``.  Timeouts
    are recorded in the row's status, never dropped; generation failures
    abort the suite with the failing instance identified.  With
    ``ab_compare`` every instance is solved twice to fill ``nodes_off``.
    Rows come back sorted by (n, replicate) regardless of job order.

    Args:
        sizes: instance sizes to cover, at least one.
        per_size: replicates per size, at least 1.
        seed0: base seed for the whole suite.
        cfg: solver configuration (default: SolveConfig()).
        ab_compare: also solve with the anchor restriction off.
        jobs: instances solved concurrently when > 1.
    """
    if not sizes:
        raise ValueError("sizes must be non-empty")
    if per_size < 1:
        raise ValueError(f"per_size must be at least 1, got {per_size}")
    if jobs < 1:
        raise ValueError(f"jobs must be at least 1, got {jobs}")
    if cfg is None:
        cfg = SolveConfig()
    tasks = [(n, r) for n in sizes for r in range(per_size)]
    if jobs == 1:
        rows = [_solve_one(n, r, seed0, cfg, ab_compare) for n, r in tasks]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(
                pool.map(lambda t: _solve_one(t[0], t[1], seed0, cfg, ab_compare), tasks)
            )
    rows.sort(key=lambda row: (row.n, row.seed))
    return GapReport(rows=tuple(rows))


def _aggregate(rows: list[GapRow]) -> dict:
    gaps = [r.gap_percent for r in rows]
    reductions = [
        (r.nodes_off - r.nodes_on) / r.nodes_off * 100.0
        for r in rows
        if r.nodes_off is not None and r.nodes_off > 0
    ]
    return {
        "count": len(rows),
        "optimal": sum(1 for r in rows if r.status == STATUS_OPTIMAL),
        "mean_gap_percent": statistics.fmean(gaps),
        "median_gap_percent": statistics.median(gaps),
        "mean_node_reduction_percent": (
            statistics.fmean(reductions) if reductions else None
        ),
        "mean_wall_time_s": statistics.fmean(r.wall_time_s for r in rows),
    }


def summarize(report: GapReport) -> dict:
    """Per-size and overall aggregates of a gap report.

    Node reduction is (nodes_off - nodes_on)/nodes_off * 100, averaged
    over rows where the A/B comparison ran.
    """
    if not report.rows:
        raise ValueError("cannot summarize an empty report")
    rows = list(report.rows)
    per_size = {}
    for n in sorted({r.n for r in rows}):
        per_size[str(n)] = _aggregate([r for r in rows if r.n == n])
    return {"per_size": per_size, "overall": _aggregate(rows)}


def _fmt(value: float | int | str | None) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return "%.12g" % value
    return str(value)


def report_to_csv(report: GapReport) -> str:
    lines = [",".join(CSV_HEADER)]
    for r in report.rows:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    r.id,
                    r.n,
                    r.seed,
                    r.obj_rcm,
                    r.opt,
                    r.gap_percent,
                    r.status,
                    r.nodes_on,
                    r.nodes_off,
                    r.wall_time_s,
                )
            )
        )
    return "\n".join(lines) + "\n"


def report_from_csv(text: str) -> GapReport:
    lines = [line for line in text.split("\n") if line]
    if not lines or lines[0] != ",".join(CSV_HEADER):
        raise ValueError(f"expected CSV header {','.join(CSV_HEADER)!r}")
    rows = []
    for line in lines[1:]:
        fields = line.split(",")
        if len(fields) != len(CSV_HEADER):
            raise ValueError(f"row has {len(fields)} fields, expected {len(CSV_HEADER)}")
        rows.append(
            GapRow(
                id=fields[0],
                n=int(fields[1]),
                seed=int(fields[2]),
                obj_rcm=float(fields[3]),
                opt=float(fields[4]),
                gap_percent=float(fields[5]),
                status=fields[6],
                nodes_on=int(fields[7]),
                nodes_off=None if fields[8] == "" else int(fields[8]),
                wall_time_s=float(fields[9]),
            )
        )
    return GapReport(rows=tuple(rows))


def save_report(report: GapReport, path: str | Path) -> None:
    Path(path).write_text(report_to_csv(report), encoding="utf-8")


def load_report(path: str | Path) -> GapReport:
    return report_from_csv(Path(path).read_text(encoding="utf-8"))


def save_summary(summary: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
