# commands/robustness.py
import argparse
import logging

from controllers import command_controller
from controllers.antinomy import robustness_of_antinomy, robustness_pool
from controllers.command_controller import CommandResult
from controllers.validation_controller import ValidationController

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "robustness",
        parents=[command_controller.common_options()],
        help="minimum weight on antinomic vertices over all decompositions",
    )
    parser.add_argument("--input", required=True, help="correlation JSON")
    parser.add_argument("--pool", default="full", help="full | file:<path> (JSON list of codes or vertex tables)")
    parser.set_defaults(handler=run_command)


def run_command(args: argparse.Namespace) -> CommandResult:
    mode = command_controller.numeric_mode(args)
    jobs = command_controller.jobs_arg(args)
    command_controller.require(ValidationController.validate_pool_arg(args.pool))
    p = command_controller.load_correlation(args.input, mode)
    codes = None if args.pool == "full" else command_controller.pool_codes(args.pool, p.scenario)
    result = robustness_of_antinomy(p, robustness_pool(p.scenario, codes, jobs=jobs), jobs=jobs)
    results = result.to_json()
    results["antinomic_support"] = [list(v.f) for v in result.antinomic_support]
    return CommandResult(results, numeric_mode=result.mode.value)
