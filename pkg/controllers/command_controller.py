# controllers/command_controller.py
"""
Controlador de comandos de la CLI: opciones comunes, carga validada de
entradas, ejecución con medición de tiempos y almacenamiento del informe.
"""
import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

from common.errors import AntinomyError, CapExceededError, InvalidInputError
from common.numeric import NumericMode
from common.utils import read_json, write_json
from controllers.classical_process import LocalIntervention, QuasiProcessFunction, StochasticProcess
from controllers.report_controller import ReportController, RunReport
from controllers.scenario_core import Correlation, Scenario, Vertex
from controllers.validation_controller import ValidationController
from models import RunStatus

logger = logging.getLogger(__name__)

EXIT_SUCCESS = 0
EXIT_INFEASIBLE = 1
EXIT_BAD_INPUT = 2


@dataclass
class CommandResult:
    """Resultado de un comando: documento JSON y código de salida."""
    results: Dict[str, Any]
    exit_code: int = EXIT_SUCCESS
    numeric_mode: str = NumericMode.RATIONAL.value
    census_rows: Optional[List[Dict[str, Any]]] = None
    scenario_key: str = ""
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def status(self) -> RunStatus:
        if self.exit_code == EXIT_SUCCESS:
            return RunStatus.SUCCESS
        if self.exit_code == EXIT_INFEASIBLE:
            return RunStatus.INFEASIBLE
        return RunStatus.FAILED


def common_options() -> argparse.ArgumentParser:
    """Opciones compartidas por todos los subcomandos (parser padre)."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--mode", default=NumericMode.RATIONAL.value, help="rational | double")
    parent.add_argument("--jobs", type=int, default=None, help="worker processes (1 runs inline)")
    parent.add_argument("--out", default=None, help="write the report JSON to this path")
    parent.add_argument("--no-store", action="store_true", help="do not record the run in the results store")
    return parent


# Validación y carga de entradas

def require(check: Tuple[bool, str]) -> None:
    valid, error = check
    if not valid:
        raise InvalidInputError(error)


def numeric_mode(args: argparse.Namespace) -> NumericMode:
    require(ValidationController.validate_mode(args.mode))
    return NumericMode(args.mode)


def jobs_arg(args: argparse.Namespace) -> Optional[int]:
    require(ValidationController.validate_jobs(args.jobs))
    return args.jobs


def scenario_from_arg(text: str) -> Scenario:
    require(ValidationController.validate_scenario_arg(text))
    settings, outcomes = ValidationController.parse_scenario_arg(text)
    return Scenario(settings, outcomes)


def load_document(path: str, validator: Callable[[Any], Tuple[bool, str]]) -> Dict[str, Any]:
    valid, error, doc = ValidationController.load_json_file(path)
    if not valid:
        raise InvalidInputError(error)
    require(validator(doc))
    return doc


def load_correlation(path: str, mode: Optional[NumericMode] = None) -> Correlation:
    p = Correlation.from_json(load_document(path, ValidationController.validate_correlation_doc))
    return p.as_mode(mode) if mode is not None else p


def load_vertex(path: str) -> Vertex:
    return Vertex.from_json(load_document(path, ValidationController.validate_vertex_doc))


def load_process_function(path: str) -> QuasiProcessFunction:
    return QuasiProcessFunction.from_json(load_document(path, ValidationController.validate_process_function_doc))


def load_process(path: str) -> StochasticProcess:
    return StochasticProcess.from_json(load_document(path, ValidationController.validate_process_doc))


def load_interventions(path: str, parties: int) -> List[LocalIntervention]:
    valid, error, doc = ValidationController.load_json_file(path)
    if not valid:
        raise InvalidInputError(error)
    require(ValidationController.validate_interventions_doc(doc, parties))
    return [LocalIntervention.from_json(item) for item in doc]


# Ejecución

def execute(command: str, args: argparse.Namespace, handler: Callable[[argparse.Namespace], CommandResult]) -> int:
    """
    Ejecuta el manejador y convierte su resultado o su error en código de salida.

    Returns:
        int: 0 éxito, 1 análisis infactible, 2 entrada inválida
    """
    inputs = {k: v for k, v in sorted(vars(args).items()) if k not in ("handler", "out", "no_store")}
    start = time.perf_counter()
    try:
        numeric_mode(args)
        result = handler(args)
    except (InvalidInputError, CapExceededError, ValueError, FileNotFoundError) as e:
        logger.error(f"❌ {command}: {e}")
        result = CommandResult({"error": str(e), "error_type": type(e).__name__}, EXIT_BAD_INPUT)
    except AntinomyError as e:
        logger.error(f"❌ {command}: {e}")
        result = CommandResult({"error": str(e), "error_type": type(e).__name__}, EXIT_INFEASIBLE)
    except RuntimeError as e:
        # tope de iteraciones del simplex o generación de columnas sin converger
        logger.error(f"❌ {command}: {e}")
        result = CommandResult({"error": str(e), "error_type": type(e).__name__}, EXIT_INFEASIBLE)
    result.timings.setdefault("total", round(time.perf_counter() - start, 6))

    report = RunReport(
        command=command,
        inputs=inputs,
        results=result.results,
        timings=result.timings,
        numeric_mode=result.numeric_mode,
        status=result.status,
        exit_code=result.exit_code,
    )
    doc = report.to_json()
    if not getattr(args, "no_store", False):
        try:
            with ReportController() as controller:
                doc["run_id"] = controller.save_run(report, result.census_rows, result.scenario_key)
        except Exception as e:
            logger.warning(f"⚠️ Could not store the run: {e}")
    if getattr(args, "out", None):
        write_json(args.out, doc)
        logger.info(f"📝 Report written to {args.out}")
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n")
    return result.exit_code


def pool_codes(arg: str, s: Scenario) -> List[int]:
    """Códigos de vértice de un fichero 'file:<ruta>': enteros o tablas f."""
    require(ValidationController.validate_pool_arg(arg))
    entries = read_json(arg[len("file:"):])
    if not isinstance(entries, list) or not entries:
        raise InvalidInputError("The pool file must hold a non-empty JSON list.")
    codes = []
    for entry in entries:
        if isinstance(entry, int) and 0 <= entry < s.n_vertices:
            codes.append(entry)
        elif isinstance(entry, list) and len(entry) == s.n_settings and all(
            isinstance(x, int) and 0 <= x < s.n_outcomes for x in entry
        ):
            codes.append(s.space.encode(entry))
        else:
            raise InvalidInputError(f"Invalid pool entry {entry!r} for scenario {s.key}.")
    return codes
