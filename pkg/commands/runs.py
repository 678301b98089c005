# commands/runs.py
import argparse
import logging

from common.errors import InvalidInputError
from controllers import command_controller
from controllers.command_controller import CommandResult
from controllers.report_controller import ReportController

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "runs",
        parents=[command_controller.common_options()],
        help="list stored runs from the results store",
    )
    parser.add_argument("--limit", type=int, default=20)
    parser.add_argument("--command", dest="filter_command", default=None, help="only runs of this command")
    parser.add_argument("--show", type=int, default=None, help="print the stored results of one run id")
    parser.set_defaults(handler=run_command, no_store=True)


def run_command(args: argparse.Namespace) -> CommandResult:
    args.no_store = True
    with ReportController() as controller:
        if args.show is not None:
            results = controller.get_run_results(args.show)
            if results is None:
                raise InvalidInputError(f"No stored run with id {args.show}.")
            census = controller.census_counts(args.show)
            doc = {"run_id": args.show, "results": results}
            if len(census):
                doc["census_counts"] = census.to_dict(orient="records")
            return CommandResult(doc)
        frame = controller.list_runs(limit=args.limit, command=args.filter_command)
    if len(frame):
        logger.info("\n" + frame.to_string(index=False))
    return CommandResult({"runs": frame.to_dict(orient="records")})
