"""
conflictlens command line.

Subcommands:
    analyze  SCENARIO   detection only            exit 0 no conflict, 2 conflict
    resolve  SCENARIO   staged resolution         exit 0 / 1 resolved / 2 unresolved
    explain  SCENARIO   resolution + justification tree
    solve    FILE.cnf   raw SAT solver            exit 10 SAT, 20 UNSAT
    schema              JSON schema of the report
    fixtures            list bundled scenarios

Policy:
- Reports go to stdout, logs and FATAL lines to stderr
- Every ConflictLensError or OSError exits 3, bad configuration included; Ctrl+C exits 130
- SCENARIO is a path, or the name of a bundled fixture
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from loguru import logger
from rich.console import Console

from .config import RunConfig, load_config_or_exit
from .conflict import (
    NO_CONFLICT,
    RESOLVED,
    ConflictReport,
    ResolutionLevel,
    analyze,
    explain,
    find_strategy,
    justification_tree,
    render,
    report_schema,
    summary_tree,
    to_json,
    trace_table,
)
from .errors import ConflictLensError, InputError
from .sat import load_dimacs, solve
from .scenario import Scenario, build, list_fixtures, load_fixture, parse, validate
from .telemetry import configure_logging, log_fields
from .utils.shutdown import SearchInterrupted, install_signal_handlers, reset

EXIT_NO_CONFLICT = 0
EXIT_RESOLVED = 1
EXIT_UNRESOLVED = 2
EXIT_ERROR = 3
EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_INTERRUPTED = 130

class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit 3 like every other input error."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"FATAL: {message}\n")


def _add_analysis_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("scenario", help="scenario file or bundled fixture name")
    p.add_argument("--horizon", type=int, help="override the scenario's HORIZON")
    p.add_argument("--max-level", dest="max_level", choices=[lv.value for lv in ResolutionLevel])
    p.add_argument("--output", choices=("text", "json"))
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--strategy-bound", dest="strategy_bound", type=int, help="bound on game search nodes")
    p.add_argument("--evidence-bound", dest="evidence_bound", type=int)
    p.add_argument("--class-bound", dest="class_bound", type=int, help="bound on history prefixes per group")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="conflictlens",
        description="Detect and resolve believed conflicts between two agents.",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    _add_analysis_flags(sub.add_parser("analyze", help="detect believed conflicts"))
    _add_analysis_flags(sub.add_parser("resolve", help="resolve conflicts level by level"))
    _add_analysis_flags(sub.add_parser("explain", help="resolve and print the justification chain"))
    solve_p = sub.add_parser("solve", help="solve a DIMACS CNF file")
    solve_p.add_argument("cnf", help="DIMACS file")
    solve_p.add_argument("--assume", type=int, nargs="*", default=[], help="assumption literals")
    solve_p.add_argument("--seed", type=int)
    sub.add_parser("schema", help="print the JSON schema of reports")
    sub.add_parser("fixtures", help="list bundled scenarios")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    keys = ("horizon", "max_level", "output", "seed", "jobs", "strategy_bound",
            "evidence_bound", "class_bound")
    values = {k: getattr(args, k, None) for k in keys}
    values["mode"] = args.mode
    return values


def load_scenario(ref: str) -> Scenario:
    """Parse ``ref`` as a file path, falling back to a bundled fixture name."""
    path = Path(ref)
    if path.is_file():
        return parse(path.read_text(encoding="utf-8"))
    if path.parent == Path(".") and (ref in list_fixtures() or f"{ref}.cfl" in list_fixtures()):
        return load_fixture(ref)
    raise InputError(f"no such scenario file or fixture: {ref}")


def _exit_code(mode: str, report: ConflictReport) -> int:
    if report.verdict == NO_CONFLICT:
        return EXIT_NO_CONFLICT
    if report.verdict == RESOLVED and mode != "analyze":
        return EXIT_RESOLVED
    return EXIT_UNRESOLVED


def _print_summary(report: ConflictReport, console: Console) -> None:
    doc = explain(report)
    if doc.verdict in (NO_CONFLICT, RESOLVED):
        console.print(summary_tree(doc))
    else:
        console.print(justification_tree(doc))
    if doc.trace:
        console.print(trace_table(doc))


def run_scenario(config: RunConfig, ref: str, out: Optional[Console] = None) -> int:
    console = out or Console()
    scenario = load_scenario(ref)
    for diag in validate(scenario, config.horizon):
        if not diag.is_error:
            logger.warning(f"SCENARIO_WARNING | {diag}")
    built = build(scenario, config.horizon)
    logger.info(log_fields(
        "RUN_START", mode=config.mode, scenario=ref, horizon=built.model.horizon,
        max_level=config.max_level, seed=config.seed,
    ))
    if config.mode == "analyze":
        report = analyze(built.evidence, built.problem, config.limits())
    else:
        report = find_strategy(
            built.evidence, built.problem, ResolutionLevel.parse(config.max_level), config.limits()
        )
    if config.output == "json":
        console.out(to_json(report), highlight=False)
    elif config.mode == "explain":
        render(report, console)
    else:
        _print_summary(report, console)
    return _exit_code(config.mode, report)


def run_solve(path: str, assumptions: Sequence[int], seed: int, out: Optional[Console] = None) -> int:
    console = out or Console()
    result = solve(load_dimacs(path), assumptions, seed)
    logger.info(result.to_log_line())
    if result.satisfiable:
        console.out("s SATISFIABLE", highlight=False)
        console.out("v " + " ".join(str(lit) for lit in result.model) + " 0", highlight=False)
        return EXIT_SAT
    console.out("s UNSATISFIABLE", highlight=False)
    console.out("c core " + " ".join(str(lit) for lit in result.core), highlight=False)
    return EXIT_UNSAT


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    reset()
    console = Console()
    try:
        if args.mode == "schema":
            console.out(json.dumps(report_schema(), indent=2, sort_keys=True), highlight=False)
            return 0
        if args.mode == "fixtures":
            for name in list_fixtures():
                console.out(name, highlight=False)
            return 0
        config = load_config_or_exit(_overrides(args))
        configure_logging(config.log_level)
        install_signal_handlers()
        if args.mode == "solve":
            return run_solve(args.cnf, args.assume, config.seed, console)
        return run_scenario(config, args.scenario, console)
    except (SearchInterrupted, KeyboardInterrupt):
        print("FATAL: interrupted", file=sys.stderr)
        return EXIT_INTERRUPTED
    except (ConflictLensError, OSError) as exc:
        print(f"FATAL: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
