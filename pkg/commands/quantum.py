# commands/quantum.py
import argparse
import logging

from common.errors import InvalidInputError
from common.numeric import parse_number
from controllers import command_controller
from controllers.classical_process import LocalIntervention
from controllers.command_controller import EXIT_INFEASIBLE, EXIT_SUCCESS, CommandResult
from controllers.quantum_process import (
    ProcessMatrix, diagonal_instruments, gyni_instruments, is_valid_process_matrix, pm_correlation,
    qform_valid_range, w_of_q,
)
from controllers.validation_controller import ValidationController

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "quantum-corr",
        parents=[command_controller.common_options()],
        help="correlation of a process matrix with local instruments",
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--q", help="parameter of the W(q) family (e.g. 0.853553 or 7/10)")
    source.add_argument("--process", help="process matrix JSON")
    source.add_argument("--classical", help="stochastic process JSON, embedded diagonally")
    parser.add_argument("--instruments", default="gyni",
                        help="gyni | pass-through | file:<path> with local classical interventions")
    parser.set_defaults(handler=run_command)


def _instruments(args: argparse.Namespace, w: ProcessMatrix):
    if args.instruments == "gyni":
        if (w.input_dims, w.output_dims) != ((2, 2), (2, 2)):
            raise InvalidInputError("gyni instruments act on bipartite qubit processes.")
        return gyni_instruments()
    if args.instruments == "pass-through":
        interventions = [LocalIntervention.pass_through(o, i) for i, o in zip(w.input_dims, w.output_dims)]
        return diagonal_instruments(interventions)
    if args.instruments.startswith("file:"):
        return diagonal_instruments(command_controller.load_interventions(args.instruments[5:], w.parties))
    raise InvalidInputError(f"Unknown instruments '{args.instruments}'.")


def run_command(args: argparse.Namespace) -> CommandResult:
    if args.q is not None:
        command_controller.require(ValidationController.validate_q(args.q))
        w = w_of_q(float(parse_number(args.q)))
    elif args.process:
        valid, error, doc = ValidationController.load_json_file(args.process)
        if not valid:
            raise InvalidInputError(error)
        w = ProcessMatrix.from_json(doc)
    else:
        p = command_controller.load_process(args.classical)
        w = ProcessMatrix.from_stochastic_process(p)
        if args.instruments == "gyni":
            args.instruments = "pass-through"
    report = is_valid_process_matrix(w)
    correlation = pm_correlation(w, _instruments(args, w))
    low, high = qform_valid_range()
    results = {
        "validity": report.to_json(),
        "correlation": correlation.to_json(),
        "q_valid_range": [low, high],
    }
    return CommandResult(results, EXIT_SUCCESS if report.valid else EXIT_INFEASIBLE, "double")
