# commands/witness.py
"""witness eval | max | violators."""
import argparse
import logging

from common.errors import InvalidInputError
from common.numeric import format_number
from controllers import command_controller
from controllers.antinomy import classical_pool
from controllers.causality import causal_codes
from controllers.classical_process import afbw_family
from controllers.command_controller import CommandResult
from controllers.polytope import CodePool
from controllers.validation_controller import ValidationController
from controllers.witnesses import Witness, evaluate, max_over, maximal_violators, witness_by_name

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "witness",
        parents=[command_controller.common_options()],
        help="evaluate or maximize GYNI / LGYNI / AF/BW / GYNIN witnesses",
    )
    parser.add_argument("action", choices=["eval", "max", "violators"])
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--name", help="gyni, lgyni, gynin, afbw, gyni-XXXX, lgyni-XXXX")
    source.add_argument("--witness", help="witness JSON")
    parser.add_argument("--input", help="correlation JSON (eval)")
    parser.add_argument("--pool", default="all", help="all | causal | classical | afbw-family | file:<path> (max)")
    parser.set_defaults(handler=run_command)


def _load_witness(args: argparse.Namespace) -> Witness:
    if args.name:
        return witness_by_name(args.name)
    return Witness.from_json(command_controller.load_document(args.witness, ValidationController.validate_witness_doc))


def run_command(args: argparse.Namespace) -> CommandResult:
    w = _load_witness(args)
    jobs = command_controller.jobs_arg(args)
    results = {"witness": w.name, "scenario": w.scenario.to_json(), "bounds": w.to_json().get("bounds", {})}
    if args.action == "eval":
        if not args.input:
            raise InvalidInputError("witness eval needs --input.")
        p = command_controller.load_correlation(args.input, command_controller.numeric_mode(args))
        value = evaluate(w, p)
        results.update({"value": format_number(value), "value_float": float(value)})
        return CommandResult(results, numeric_mode=p.mode.value)
    if args.action == "violators":
        vertices = maximal_violators(w)
        results.update({"count": len(vertices), "violators": [list(v.f) for v in vertices]})
        return CommandResult(results)
    s = w.scenario
    if args.pool == "all":
        pool = CodePool.full(s.space)
    elif args.pool == "causal":
        pool = CodePool(s.space, codes=causal_codes(s, jobs=jobs))
    elif args.pool == "classical":
        pool = classical_pool(s, jobs=jobs)
    elif args.pool == "afbw-family":
        pool = afbw_family()
    else:
        pool = CodePool(s.space, codes=command_controller.pool_codes(args.pool, s))
    best = max_over(w, pool, jobs=jobs)
    results.update({"pool": args.pool, **best.to_json()})
    return CommandResult(results)
