"""
Command line entry point: solve, analyze, generate and bench

Exit codes: 0 success, 1 usage or input error, and for `solve`
10 SAT, 20 UNSAT, 30 indeterminate (assignment budget exhausted).
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .analysis import (
    TABLE_HEADER,
    Inverter,
    Model,
    apply_inverter,
    format_table_row,
    skewness,
    ust_advised,
    verify_model,
)
from .bench import check_monotonicity, emit_table, run_grid, table1_spec
from .cnf import load_formula, save_formula
from .config import settings
from .database import open_store, sqlite_url
from .errors import SolverInvariantError, UstError
from .gen import write_instances
from .schemas import CliConfig, Counting, GenParams, GridSpec, StepCount, TerminationMode, Verdict
from .solver import solve
from .store import record_run

log = logging.getLogger("ustsat")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CODES = {Verdict.SAT: 10, Verdict.UNSAT: 20, Verdict.INDETERMINATE: 30}
SOLUTION_LINES = {Verdict.SAT: "SATISFIABLE", Verdict.UNSAT: "UNSATISFIABLE", Verdict.INDETERMINATE: "UNKNOWN"}


class UsageError(UstError):
    """Bad command line"""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="[%(asctime)s] %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


# ==================== solve ====================

def cmd_solve(args: argparse.Namespace) -> int:
    formula = load_formula(args.file)
    stats = solve(formula, TerminationMode(args.mode), args.budget, reveal=args.reveal, debug=args.debug)

    if stats.model is not None:
        check = verify_model(formula, Model.from_literals(stats.model, formula.num_vars))
        if not check:
            raise SolverInvariantError(f"model violates clause {check.clause_index}")

    if args.json:
        record = stats.record()
        if stats.model is not None:
            record["model"] = stats.model
        print(json.dumps(record))
    else:
        print(f"s {SOLUTION_LINES[stats.result]}")
        gain = "-" if stats.gain is None else f"{stats.gain:.2f}"
        remainder = "-" if stats.remainder_pct is None else f"{stats.remainder_pct:.1f}"
        print(
            f"c mode={stats.mode.value} n_u={_dash(stats.n_u)} n_a={_dash(stats.n_a)} gain={gain} "
            f"remainder_pct={remainder} conflicts={stats.conflicts} assignments={stats.assignments} "
            f"trail_length={stats.trail_length}"
        )
        if stats.model is not None:
            print("v " + " ".join(str(lit) for lit in stats.model + [0]))
    return EXIT_CODES[stats.result]


def _dash(value) -> str:
    return "-" if value is None else str(value)


# ==================== analyze ====================

def cmd_analyze(args: argparse.Namespace) -> int:
    if args.write_inverted and len(args.files) > 1:
        raise UsageError("--write-inverted takes a single input file")

    counting = Counting(args.counting)
    decimals = settings.skew_decimals
    reports = []
    if not args.json:
        print(TABLE_HEADER)

    for path in args.files:
        formula = load_formula(path)
        report = skewness(formula, counting)
        reports.append(report)
        advised = ust_advised(report, settings.ust_advice_threshold)

        if args.json:
            record = report.record(decimals)
            record.update(
                file=str(path),
                counting=counting.value,
                unipolar_after_rho=report.unipolar_after_rho,
                ust_advised=advised,
                empty=report.empty,
            )
            print(json.dumps(record))
        else:
            print(format_table_row(Path(path).name, report, decimals))
            rho = "{" + ", ".join(f"v{v}" for v in report.rho) + "}" if report.rho_size <= 20 else f"<{report.rho_size} variables>"
            print(
                f"  poslit={report.poslit} neglit={report.neglit} p={report.p:.{decimals}f} "
                f"rho={rho} |rho|={report.rho_size} hp={report.hp:.{decimals}f} "
                f"initially_unipolar={str(report.initially_unipolar).lower()} "
                f"unipolar_after_rho={str(report.unipolar_after_rho).lower()} "
                f"ust_advised={str(advised).lower()}"
            )

        if args.write_inverted:
            inverted = apply_inverter(formula, Inverter.of(report.rho))
            # raw counting reads repeated literals and tautologies, so they are written back
            save_formula(
                inverted,
                args.write_inverted,
                [f"rho-inverted {Path(path).name}, |rho|={report.rho_size}"],
                raw=counting is Counting.RAW,
            )
            log.info("wrote inverted set to %s", args.write_inverted)

    if len(reports) > 1 and not args.json:
        ps = [report.p for report in reports]
        hps = [report.hp for report in reports]
        print(
            f"files={len(reports)} p={min(ps):.{decimals}f}-{max(ps):.{decimals}f} "
            f"hp={min(hps):.{decimals}f}-{max(hps):.{decimals}f} "
            f"initially_unipolar={sum(report.initially_unipolar for report in reports)}"
        )
    return EXIT_OK


# ==================== generate ====================

def cmd_generate(args: argparse.Namespace) -> int:
    try:
        params = GenParams(n=args.n, r=args.r, m=args.m, k=args.k, p=args.p, seed=args.seed)
    except ValueError as exc:
        raise UsageError(f"invalid generator parameters: {exc}") from None
    paths = write_instances(params, args.count, args.out)
    for path in paths:
        print(path)
    return EXIT_OK


# ==================== bench ====================

def cmd_bench(args: argparse.Namespace) -> int:
    try:
        if args.p is not None:
            spec = GridSpec(
                n=args.n, count_per_cell=args.count, p_list=[args.p], r_lists=[args.r or [2.0]],
                master_seed=args.seed, budget=args.budget, steps=args.steps,
            )
        else:
            spec = table1_spec(args.n, args.count, args.seed, args.budget, StepCount(args.steps))
    except ValueError as exc:
        raise UsageError(f"invalid grid: {exc}") from None

    rows, records = run_grid(spec, workers=args.workers, progress=not args.quiet)
    table = emit_table(rows, args.format, extended=args.extended)
    if args.out:
        Path(args.out).write_text(table, encoding="utf-8")
        log.info("wrote %d rows to %s", len(rows), args.out)
    else:
        sys.stdout.write(table)

    store_url = sqlite_url(args.per_instance) if args.per_instance else settings.per_instance_url
    if store_url:
        run_id = record_run(open_store(store_url), spec, records)
        log.info("per-instance log: run %d in %s", run_id, store_url)

    if args.check:
        for violation in check_monotonicity(rows):
            log.warning("shape check: %s", violation)
    return EXIT_OK


# ==================== parser ====================

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ustsat", description="Unipolar-set termination toolkit for DPLL")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=settings.log_level, help="DEBUG, INFO, WARNING, ERROR")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    p_solve = sub.add_parser("solve", help="solve a DIMACS CNF file")
    p_solve.add_argument("file")
    p_solve.add_argument("--mode", choices=[mode.value for mode in TerminationMode], default="ust")
    p_solve.add_argument("--budget", type=int, default=settings.default_budget, help="assignment limit")
    p_solve.add_argument("--reveal", action="store_true", help="search the rho-inverted set")
    p_solve.add_argument("--debug", action="store_true", default=settings.debug_recount, help="recount counters after every step")
    p_solve.add_argument("--json", action="store_true")
    p_solve.set_defaults(func=cmd_solve)

    p_analyze = sub.add_parser("analyze", help="skewness and hidden skewness of DIMACS files")
    p_analyze.add_argument("files", nargs="+")
    p_analyze.add_argument("--counting", choices=[c.value for c in Counting], default=Counting.RAW.value)
    p_analyze.add_argument("--write-inverted", metavar="OUT")
    p_analyze.add_argument("--json", action="store_true")
    p_analyze.set_defaults(func=cmd_analyze)

    p_gen = sub.add_parser("generate", help="write random skewed k-SAT instances")
    p_gen.add_argument("--n", type=int, required=True)
    size = p_gen.add_mutually_exclusive_group(required=True)
    size.add_argument("--r", type=float)
    size.add_argument("--m", type=int)
    p_gen.add_argument("--k", type=int, default=3)
    p_gen.add_argument("--p", type=float, required=True)
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--count", type=int, default=1)
    p_gen.add_argument("--out", required=True, metavar="DIR")
    p_gen.set_defaults(func=cmd_generate)

    p_bench = sub.add_parser("bench", help="measure UST gain over a (p, r) grid")
    p_bench.add_argument("--table1", action="store_true", help="the default grid; kept for explicitness")
    p_bench.add_argument("--p", type=float, help="single-row grid probability")
    p_bench.add_argument("--r", type=float, nargs="+", help="single-row grid ratios")
    p_bench.add_argument("--n", type=int, default=settings.bench_n)
    p_bench.add_argument("--count", type=int, default=settings.bench_count)
    p_bench.add_argument("--seed", type=int, default=settings.bench_seed)
    p_bench.add_argument("--budget", type=int, default=settings.bench_budget)
    p_bench.add_argument(
        "--steps", choices=[s.value for s in StepCount], default=settings.bench_steps,
        help="count every assignment or only the trail depth in N_U and N_A",
    )
    p_bench.add_argument("--workers", type=int, default=settings.workers)
    p_bench.add_argument("--format", choices=["csv", "markdown"], default="csv")
    p_bench.add_argument("--extended", action="store_true", help="add mean-of-ratios and step sums")
    p_bench.add_argument("--out", metavar="CSV")
    p_bench.add_argument("--per-instance", metavar="LOG", help="SQLite file for per-instance records")
    p_bench.add_argument("--check", action="store_true", help="warn when the gain grid breaks its expected shape")
    p_bench.add_argument("--quiet", action="store_true", help="no progress bar")
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.subcommand == "bench" and args.table1 and args.p is not None:
            parser.error("--table1 and --p are exclusive")
        if args.subcommand == "bench" and args.r is not None and args.p is None:
            parser.error("--r needs --p")
    except UsageError as exc:
        print(f"error: {exc.detail}", file=sys.stderr)
        return EXIT_ERROR

    configure_logging(args.log_level)
    options = {key: value for key, value in vars(args).items() if key not in ("func", "subcommand")}
    config = CliConfig(subcommand=args.subcommand, options=options)
    log.info("configuration: %s", config.model_dump_json())

    try:
        return args.func(args)
    except UstError as exc:
        print(f"error: {exc.detail}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        detail = f"{exc.filename}: {exc.strerror}" if exc.filename else str(exc)
        print(f"error: {detail}", file=sys.stderr)
        return EXIT_ERROR
    except Exception:
        log.exception("unhandled error")
        return EXIT_ERROR


def run(argv: Optional[List[str]] = None) -> None:
    sys.exit(main(argv))
