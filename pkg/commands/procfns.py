# commands/procfns.py
import argparse
import logging

import numpy as np

from controllers import command_controller
from controllers.classical_process import (
    ProcessDims, afbw_family, noncausal_process_functions, process_function_codes,
)
from controllers.command_controller import CommandResult
from controllers.digraph import Digraph, has_siblings_on_cycles
from controllers.scenario_core import signalling_edge_masks

logger = logging.getLogger(__name__)

LISTING_LIMIT = 4096


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "enumerate-procfns",
        parents=[command_controller.common_options()],
        help="enumerate all process functions of given dimensions",
    )
    parser.add_argument("--dims", default="3,2,2", help="N,I,O (parties, inputs, outputs) or I1.I2/O1.O2")
    parser.add_argument("--noncausal", action="store_true", help="keep only those producing noncausal vertices")
    parser.set_defaults(handler=run_command)


def run_command(args: argparse.Namespace) -> CommandResult:
    parsed = command_controller.scenario_from_arg(args.dims)
    dims = ProcessDims(parsed.settings, parsed.outcomes)
    jobs = command_controller.jobs_arg(args)
    codes = noncausal_process_functions(dims, jobs=jobs) if args.noncausal else process_function_codes(dims, jobs=jobs)
    # estructura causal = grafo de dependencia de ω; una comprobación por máscara distinta
    masks = np.unique(signalling_edge_masks(dims.space, dims.space.decode_codes(codes))) if len(codes) else []
    structures = [Digraph.from_mask(dims.parties, int(m)) for m in masks]
    results = {
        "dims": dims.to_json(),
        "count": int(len(codes)),
        "causal_structures": len(structures),
        "siblings_on_cycles": all(has_siblings_on_cycles(g) for g in structures),
    }
    if len(codes) <= LISTING_LIMIT:
        results["codes"] = [int(c) for c in codes]
    if args.noncausal and dims == ProcessDims.uniform(3, 2, 2):
        results["matches_afbw_family"] = sorted(int(c) for c in codes) == sorted(w.code for w in afbw_family())
    return CommandResult(results)
