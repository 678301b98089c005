# commands/reproduce.py
import argparse
import logging

from controllers import command_controller
from controllers.command_controller import EXIT_INFEASIBLE, EXIT_SUCCESS, CommandResult
from controllers.reproduction import SECTIONS, normalize_section, run_reproduction, summary_frame

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "reproduce-paper",
        parents=[command_controller.common_options()],
        help="run the reproduction checks and print PASS/FAIL per value",
    )
    parser.add_argument("--section", action="append", default=None,
                        help=f"{', '.join(SECTIONS)} (aliases 4, 5, A); repeatable, default all")
    parser.add_argument("--full", action="store_true", help="include exhaustive tripartite sweeps")
    parser.add_argument("--csv", default=None, help="also write the summary table as CSV")
    parser.set_defaults(handler=run_command)


def run_command(args: argparse.Namespace) -> CommandResult:
    sections = [normalize_section(s) for s in args.section] if args.section else None
    checks = run_reproduction(sections, full=args.full, jobs=command_controller.jobs_arg(args))
    frame = summary_frame(checks)
    logger.info("\n" + frame[["section", "name", "status", "expected", "actual"]].to_string(index=False))
    if args.csv:
        frame.to_csv(args.csv, index=False)
    failed = int((frame["status"] == "FAIL").sum()) if len(frame) else 0
    results = {
        "passed": len(checks) - failed,
        "failed": failed,
        "checks": [c.to_json() for c in checks],
    }
    return CommandResult(results, EXIT_SUCCESS if failed == 0 else EXIT_INFEASIBLE, "mixed")
