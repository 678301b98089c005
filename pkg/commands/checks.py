# commands/checks.py
"""check-causal, check-procfn, check-consistent y dc-verdict."""
import argparse
import logging
from typing import Callable, Dict

from common.errors import InvalidInputError
from controllers import command_controller
from controllers.antinomy import dc_membership, is_dc_vertex
from controllers.causality import causal_membership, is_causal_vertex
from controllers.classical_process import (
    QuasiProcessFunction, StochasticProcess, afbw_process, bfw_process, causal_structure, cyclic_loop,
    is_logically_consistent, is_process_function,
)
from controllers.command_controller import EXIT_INFEASIBLE, EXIT_SUCCESS, CommandResult
from controllers.digraph import has_siblings_on_cycles, signalling_class
from controllers.scenario_core import signalling_graph

logger = logging.getLogger(__name__)

PROCESS_FUNCTIONS: Dict[str, Callable[[], QuasiProcessFunction]] = {
    "afbw": afbw_process,
    "loop": lambda: cyclic_loop(False),
    "negated-loop": lambda: cyclic_loop(True),
}
PROCESSES: Dict[str, Callable[[], StochasticProcess]] = {
    "bfw": bfw_process,
    "afbw": lambda: afbw_process().to_stochastic(),
    "loop": lambda: cyclic_loop(False).to_stochastic(),
    "negated-loop": lambda: cyclic_loop(True).to_stochastic(),
}


def register(subparsers) -> None:
    common = command_controller.common_options()

    parser = subparsers.add_parser("check-causal", parents=[common], help="causal polytope membership")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", help="correlation JSON")
    source.add_argument("--vertex", help="vertex JSON")
    parser.set_defaults(handler=run_check_causal)

    parser = subparsers.add_parser("check-procfn", parents=[common], help="unique fixed point test")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", help="process function JSON")
    source.add_argument("--name", choices=sorted(PROCESS_FUNCTIONS))
    parser.set_defaults(handler=run_check_procfn)

    parser = subparsers.add_parser("check-consistent", parents=[common], help="logical consistency of a process")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", help="stochastic process JSON")
    source.add_argument("--name", choices=sorted(PROCESSES))
    parser.set_defaults(handler=run_check_consistent)

    parser = subparsers.add_parser("dc-verdict", parents=[common], help="deterministic consistency verdict")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", help="correlation JSON (hull membership)")
    source.add_argument("--vertex", help="vertex JSON (faithful realization test)")
    parser.add_argument("--no-fast-path", action="store_true", help="always run the fixed-point test")
    parser.set_defaults(handler=run_dc_verdict)


def run_check_causal(args: argparse.Namespace) -> CommandResult:
    if args.vertex:
        v = command_controller.load_vertex(args.vertex)
        causal = is_causal_vertex(v)
        cls = signalling_class(signalling_graph(v))
        results = {"causal": causal, "code": v.code, "signalling_class": {"key": cls.key, "label": cls.label}}
        return CommandResult(results, EXIT_SUCCESS if causal else EXIT_INFEASIBLE)
    p = command_controller.load_correlation(args.input, command_controller.numeric_mode(args))
    certificate = causal_membership(p, jobs=command_controller.jobs_arg(args))
    results = certificate.to_json()
    results["verified"] = certificate.verify(p)
    return CommandResult(results, EXIT_SUCCESS if certificate.member else EXIT_INFEASIBLE, p.mode.value)


def run_check_procfn(args: argparse.Namespace) -> CommandResult:
    w = PROCESS_FUNCTIONS[args.name]() if args.name else command_controller.load_process_function(args.input)
    check = is_process_function(w)
    structure = causal_structure(w)
    results = check.to_json()
    results.update({
        "omega": list(w.omega),
        "causal_structure": structure.to_json(),
        "siblings_on_cycles": has_siblings_on_cycles(structure),
    })
    return CommandResult(results, EXIT_SUCCESS if check.valid else EXIT_INFEASIBLE)


def run_check_consistent(args: argparse.Namespace) -> CommandResult:
    p = PROCESSES[args.name]() if args.name else command_controller.load_process(args.input)
    check = is_logically_consistent(p)
    return CommandResult(check.to_json(), EXIT_SUCCESS if check.consistent else EXIT_INFEASIBLE, p.mode.value)


def run_dc_verdict(args: argparse.Namespace) -> CommandResult:
    if args.vertex:
        v = command_controller.load_vertex(args.vertex)
        verdict = is_dc_vertex(v, fast_path=not args.no_fast_path)
        results = verdict.to_json()
        results["verified"] = verdict.verify(v)
        return CommandResult(results, EXIT_SUCCESS if verdict.classical else EXIT_INFEASIBLE)
    if args.no_fast_path:
        raise InvalidInputError("--no-fast-path only applies to --vertex")
    p = command_controller.load_correlation(args.input, command_controller.numeric_mode(args))
    membership = dc_membership(p, jobs=command_controller.jobs_arg(args))
    return CommandResult(membership.to_json(), EXIT_SUCCESS if membership.member else EXIT_INFEASIBLE, p.mode.value)
