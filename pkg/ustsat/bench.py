"""
Gain of UST over AST on a grid of random skewed 3-SAT instances

Every (p, r) cell generates count_per_cell instances from independent
derived seeds, solves each in measure mode and aggregates the gain
G = N_A / N_U and the remainder R (percent of clauses still active at UST).
Cells are processed in grid order and instances in index order, so the
output does not depend on the worker count.
"""
import csv
import io
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

from tqdm import tqdm

from .gen import derive_instance_seed, generate
from .schemas import BenchRow, GenParams, GridSpec, InstanceRecord, StepCount, TerminationMode, Verdict
from .solver import solve

log = logging.getLogger(__name__)

TABLE1_P = [0.5, 0.4, 0.3, 0.2, 0.1, 0.05]
# last ratio of each row is the phase-transition threshold for that p
TABLE1_R = [
    [2.00, 2.25, 2.50, 2.75, 3.00, 3.25, 3.50, 3.75, 4.00, 4.26],
    [2.00, 2.30, 2.60, 2.90, 3.20, 3.50, 3.80, 4.10, 4.40, 4.70],
    [2.00, 2.50, 3.00, 3.50, 4.00, 4.50, 5.00, 5.50, 6.00, 6.40],
    [2.00, 3.00, 4.00, 5.00, 6.00, 7.00, 8.00, 9.00, 10.0, 11.5],
    [2.00, 3.00, 5.00, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 41.0],
    [2.00, 10.0, 30.0, 50.0, 70.0, 90.0, 110.0, 130.0, 150.0, 165.0],
]

CSV_COLUMNS = ["p", "r", "mean_gain", "mean_remainder_pct", "sat", "unsat", "indet", "init_unipolar", "count", "n", "seed"]
EXTENDED_COLUMNS = ["mean_gain_ratio", "sum_n_u", "sum_n_a", "mean_remainder_pct_precise"]


class InstanceTask(NamedTuple):
    p_index: int
    r_index: int
    instance_index: int
    p: float
    r: float
    n: int
    k: int
    master_seed: int
    budget: int


def table1_spec(
    n: int = 100,
    count_per_cell: int = 200,
    master_seed: int = 0,
    budget: int = 1_000_000,
    steps: StepCount = StepCount.ASSIGNMENTS,
) -> GridSpec:
    return GridSpec(
        n=n,
        count_per_cell=count_per_cell,
        p_list=list(TABLE1_P),
        r_lists=[list(row) for row in TABLE1_R],
        master_seed=master_seed,
        budget=budget,
        steps=steps,
    )


def run_instance(task: InstanceTask) -> InstanceRecord:
    seed = derive_instance_seed(task.master_seed, task.p_index, task.r_index, task.instance_index)
    formula = generate(GenParams(n=task.n, r=task.r, k=task.k, p=task.p, seed=seed))
    stats = solve(formula, TerminationMode.MEASURE, task.budget)
    return InstanceRecord(
        p=task.p,
        r=task.r,
        p_index=task.p_index,
        r_index=task.r_index,
        instance_index=task.instance_index,
        seed=seed,
        verdict=stats.result,
        n_u=stats.n_u,
        n_a=stats.n_a,
        trail_u=stats.trail_u,
        trail_a=stats.trail_a,
        remainder_pct=stats.remainder_pct,
        conflicts=stats.conflicts,
        assignments=stats.assignments,
    )


def aggregate_cell(p: float, r: float, records: Sequence[InstanceRecord], spec: GridSpec) -> BenchRow:
    """Means over satisfiable instances

    G is the ratio of step sums, so instances unipolar at step 0 still add
    their N_A; the mean of per-instance ratios skips them.
    """
    sat = [rec for rec in records if rec.verdict is Verdict.SAT]
    unsat = sum(1 for rec in records if rec.verdict is Verdict.UNSAT)
    indet = sum(1 for rec in records if rec.verdict is Verdict.INDETERMINATE)
    steps = [pair for pair in (rec.steps(spec.steps) for rec in sat) if None not in pair]
    ratios = [n_a / n_u for n_u, n_a in steps if n_u >= 1]

    sum_n_u = sum(n_u for n_u, _ in steps)
    sum_n_a = sum(n_a for _, n_a in steps)
    remainders = [rec.remainder_pct for rec in sat if rec.remainder_pct is not None]

    return BenchRow(
        p=p,
        r=r,
        mean_gain=sum_n_a / sum_n_u if sum_n_u else None,
        mean_gain_ratio=math.fsum(ratios) / len(ratios) if ratios else None,
        mean_remainder_pct=math.fsum(remainders) / len(remainders) if remainders else None,
        sat=len(sat),
        unsat=unsat,
        indet=indet,
        init_unipolar=sum(1 for rec in sat if rec.n_u == 0),
        count=len(records),
        n=spec.n,
        seed=spec.master_seed,
        sum_n_u=sum_n_u,
        sum_n_a=sum_n_a,
    )


def run_grid(
    spec: GridSpec,
    workers: int = 1,
    progress: bool = False,
) -> Tuple[List[BenchRow], List[InstanceRecord]]:
    """Solve every instance of the grid; rows and records come back in grid order"""
    rows: List[BenchRow] = []
    records: List[InstanceRecord] = []
    cells = spec.cells()
    bar = tqdm(total=len(cells) * spec.count_per_cell, disable=not progress, unit="inst")
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None

    try:
        for p_index, r_index, p, r in cells:
            start_time = time.time()
            tasks = [
                InstanceTask(p_index, r_index, i, p, r, spec.n, spec.k, spec.master_seed, spec.budget)
                for i in range(spec.count_per_cell)
            ]
            if pool is None:
                results: Iterable[InstanceRecord] = map(run_instance, tasks)
            else:
                results = pool.map(run_instance, tasks, chunksize=max(1, len(tasks) // (4 * workers)))

            cell_records = []
            for record in results:
                cell_records.append(record)
                bar.update(1)

            row = aggregate_cell(p, r, cell_records, spec)
            rows.append(row)
            records.extend(cell_records)
            log.info(
                "cell p=%g r=%g: G=%s R=%s sat=%d unsat=%d indet=%d (%.3fs)",
                p, r, _fmt(row.mean_gain, 2), _fmt(row.mean_remainder_pct, 0),
                row.sat, row.unsat, row.indet, time.time() - start_time,
            )
    finally:
        bar.close()
        if pool is not None:
            pool.shutdown()

    return rows, records


# ==================== Output ====================

def _fmt(value: Optional[float], decimals: int) -> str:
    return "" if value is None else f"{value:.{decimals}f}"


def emit_table(rows: Sequence[BenchRow], fmt: Optional[str] = "csv", extended: bool = False) -> str:
    """Render rows as CSV (default) or as a markdown grid with G and R sub-rows per p"""
    fmt = fmt or "csv"
    if fmt == "markdown":
        return _emit_markdown(rows)
    if fmt != "csv":
        raise ValueError(f"unknown table format {fmt!r}")

    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS + (EXTENDED_COLUMNS if extended else []))
    for row in rows:
        line = [
            f"{row.p:g}", f"{row.r:g}", _fmt(row.mean_gain, 2), _fmt(row.mean_remainder_pct, 0),
            row.sat, row.unsat, row.indet, row.init_unipolar, row.count, row.n, row.seed,
        ]
        if extended:
            line += [_fmt(row.mean_gain_ratio, 4), row.sum_n_u, row.sum_n_a, _fmt(row.mean_remainder_pct, 2)]
        writer.writerow(line)
    return out.getvalue()


def _emit_markdown(rows: Sequence[BenchRow]) -> str:
    blocks: List[Tuple[float, List[BenchRow]]] = []
    for row in rows:
        if blocks and blocks[-1][0] == row.p:
            blocks[-1][1].append(row)
        else:
            blocks.append((row.p, [row]))
    width = max(len(block) for _, block in blocks)

    def line(cells: List[str]) -> str:
        return "| " + " | ".join(cells + [""] * (width + 2 - len(cells))) + " |"

    lines = [line(["p", ""] + [str(i + 1) for i in range(width)]), line(["---"] * (width + 2))]
    for p, block in blocks:
        lines.append(line([f"{p:g}", "r"] + [f"{row.r:.2f}" for row in block]))
        lines.append(line(["", "G"] + [_fmt(row.mean_gain, 2) or "-" for row in block]))
        lines.append(line(["", "R%"] + [_fmt(row.mean_remainder_pct, 0) or "-" for row in block]))
    return "\n".join(lines) + "\n"


def check_monotonicity(rows: Sequence[BenchRow], slack: float = 0.05, r_column: float = 2.0) -> List[str]:
    """Violations of the expected gain shape

    Within a p row G must not grow with r by more than slack, and at
    r = r_column G must grow strictly as p falls.
    """
    violations = []
    by_p: dict = {}
    for row in rows:
        by_p.setdefault(row.p, []).append(row)

    for p, block in by_p.items():
        gains = [(row.r, row.mean_gain) for row in sorted(block, key=lambda row: row.r) if row.mean_gain is not None]
        for (r1, g1), (r2, g2) in zip(gains, gains[1:]):
            if g2 > g1 + slack:
                violations.append(f"p={p:g}: G rises from {g1:.3f} at r={r1:g} to {g2:.3f} at r={r2:g}")

    column = sorted(
        ((row.p, row.mean_gain) for row in rows if row.r == r_column and row.mean_gain is not None),
        reverse=True,
    )
    for (p1, g1), (p2, g2) in zip(column, column[1:]):
        if not g2 > g1:
            violations.append(f"r={r_column:g}: G does not grow from p={p1:g} ({g1:.3f}) to p={p2:g} ({g2:.3f})")
    return violations
