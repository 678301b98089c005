# commands/census.py
import argparse
import logging

from common.errors import InvalidInputError
from config import CHUNK_SIZE
from controllers import command_controller
from controllers.causality import classify_scenario
from controllers.command_controller import CommandResult

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "census",
        parents=[command_controller.common_options()],
        help="classify every vertex of a scenario by signalling class and causality",
    )
    parser.add_argument("--scenario", required=True, help="N,M,D or M1.M2/D1.D2")
    parser.add_argument("--chunk", type=int, default=CHUNK_SIZE, help="vertex codes per worker chunk")
    parser.add_argument("--csv", default=None, help="also write the class table as CSV")
    parser.set_defaults(handler=run_command)


def run_command(args: argparse.Namespace) -> CommandResult:
    s = command_controller.scenario_from_arg(args.scenario)
    jobs = command_controller.jobs_arg(args)
    if args.chunk < 1:
        raise InvalidInputError("--chunk must be >= 1.")
    census = classify_scenario(s, jobs=jobs, chunk=args.chunk)
    if args.csv:
        census.to_frame().to_csv(args.csv, index=False)
        logger.info(f"📄 Census table written to {args.csv}")
    rows = census.rows()
    return CommandResult(census.to_json(), census_rows=rows, scenario_key=s.key)
