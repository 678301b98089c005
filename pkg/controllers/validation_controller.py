# controllers/validation_controller.py
"""
Controlador central de validaciones de entrada (flags de la CLI y documentos
JSON). Cada validador devuelve (is_valid, error_message).
"""
import os
import re
from typing import Any, Dict, List, Optional, Tuple

from common.numeric import NumericMode, parse_number
from common.utils import product_size, read_json

SCENARIO_PATTERN = re.compile(r"^\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*$")
CUSTOM_SCENARIO_PATTERN = re.compile(r"^\s*([\d.]+)\s*/\s*([\d.]+)\s*$")


class ValidationController:
    """
    Validaciones de la CLI y de los documentos de entrada.
    Las validaciones no lanzan excepciones: devuelven el mensaje de error.
    """

    # Validaciones de flags

    @staticmethod
    def validate_scenario_arg(text: str) -> Tuple[bool, str]:
        """
        Acepta 'N,M,D' (uniforme) o 'M1.M2.../D1.D2...' (por parte).
        """
        if not text or not text.strip():
            return False, "The scenario is required (N,M,D)."
        match = SCENARIO_PATTERN.match(text)
        if match:
            parties, settings, outcomes = (int(g) for g in match.groups())
            if parties < 1 or settings < 1 or outcomes < 1:
                return False, "Scenario cardinalities must be >= 1."
            return True, ""
        match = CUSTOM_SCENARIO_PATTERN.match(text)
        if match:
            settings = [s for s in match.group(1).split(".") if s]
            outcomes = [s for s in match.group(2).split(".") if s]
            if not settings or len(settings) != len(outcomes):
                return False, "Per-party scenarios need the same number of settings and outcomes entries."
            if any(int(v) < 1 for v in settings + outcomes):
                return False, "Scenario cardinalities must be >= 1."
            return True, ""
        return False, f"Invalid scenario '{text}'. Use N,M,D or M1.M2/D1.D2."

    @staticmethod
    def parse_scenario_arg(text: str) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """(settings, outcomes) de un texto ya validado."""
        match = SCENARIO_PATTERN.match(text)
        if match:
            parties, settings, outcomes = (int(g) for g in match.groups())
            return (settings,) * parties, (outcomes,) * parties
        match = CUSTOM_SCENARIO_PATTERN.match(text)
        settings = tuple(int(s) for s in match.group(1).split(".") if s)
        outcomes = tuple(int(s) for s in match.group(2).split(".") if s)
        return settings, outcomes

    @staticmethod
    def validate_mode(mode: str) -> Tuple[bool, str]:
        if mode not in {m.value for m in NumericMode}:
            return False, f"Invalid numeric mode '{mode}'. Use rational or double."
        return True, ""

    @staticmethod
    def validate_jobs(jobs: Optional[int]) -> Tuple[bool, str]:
        if jobs is not None and jobs < 1:
            return False, "--jobs must be >= 1."
        return True, ""

    @staticmethod
    def validate_pool_arg(text: str) -> Tuple[bool, str]:
        """'full' o 'file:<ruta>' con una lista JSON de códigos o tablas."""
        if text == "full":
            return True, ""
        if text.startswith("file:"):
            path = text[len("file:"):]
            if not path:
                return False, "The pool file path is empty."
            if not os.path.isfile(path):
                return False, f"Pool file not found: {path}"
            return True, ""
        return False, f"Invalid pool '{text}'. Use full or file:<path>."

    @staticmethod
    def validate_q(q: str) -> Tuple[bool, str]:
        try:
            value = parse_number(q)
        except (ValueError, ZeroDivisionError):
            return False, f"Invalid number '{q}'."
        if not 0 <= value <= 1:
            return False, "q must lie in [0, 1]."
        return True, ""

    # Validaciones de documentos

    @staticmethod
    def load_json_file(path: str) -> Tuple[bool, str, Any]:
        """Lee un fichero JSON; devuelve (is_valid, error_message, documento)."""
        if not path:
            return False, "An input file is required.", None
        if not os.path.isfile(path):
            return False, f"Input file not found: {path}", None
        try:
            return True, "", read_json(path)
        except (OSError, ValueError) as e:
            return False, f"Could not read JSON from {path}: {e}", None

    @staticmethod
    def _require_keys(doc: Any, keys: List[str], kind: str) -> Tuple[bool, str]:
        if not isinstance(doc, dict):
            return False, f"A {kind} document must be a JSON object."
        missing = [k for k in keys if k not in doc]
        if missing:
            return False, f"The {kind} document is missing: {', '.join(missing)}."
        return True, ""

    @staticmethod
    def _validate_cardinalities(doc: Dict[str, Any], first: str, second: str, kind: str) -> Tuple[bool, str]:
        a, b = doc.get(first), doc.get(second)
        if not isinstance(a, list) or not isinstance(b, list) or not a or len(a) != len(b):
            return False, f"The {kind} needs non-empty '{first}' and '{second}' lists of equal length."
        if not all(isinstance(v, int) and v >= 1 for v in a + b):
            return False, f"The {kind} cardinalities must be positive integers."
        return True, ""

    @staticmethod
    def _validate_table(table: Any, rows: int, columns: int, kind: str) -> Tuple[bool, str]:
        if not isinstance(table, list) or len(table) != rows:
            return False, f"The {kind} table needs {rows} rows."
        for row in table:
            if not isinstance(row, list) or len(row) != columns:
                return False, f"Every {kind} table row needs {columns} entries."
            for value in row:
                if isinstance(value, bool) or not isinstance(value, (int, float, str)):
                    return False, f"Invalid {kind} entry {value!r}."
                if isinstance(value, str):
                    try:
                        parse_number(value)
                    except (ValueError, ZeroDivisionError):
                        return False, f"Invalid {kind} entry '{value}'."
        return True, ""

    @staticmethod
    def validate_correlation_doc(doc: Any) -> Tuple[bool, str]:
        valid, error = ValidationController._require_keys(doc, ["scenario", "table"], "correlation")
        if not valid:
            return valid, error
        valid, error = ValidationController._validate_cardinalities(doc["scenario"], "settings", "outcomes", "scenario")
        if not valid:
            return valid, error
        n_out = product_size(doc["scenario"]["outcomes"])
        n_set = product_size(doc["scenario"]["settings"])
        valid, error = ValidationController._validate_table(doc["table"], n_out, n_set, "correlation")
        if not valid:
            return valid, error
        if "numeric" in doc:
            return ValidationController.validate_mode(doc["numeric"])
        return True, ""

    @staticmethod
    def validate_vertex_doc(doc: Any) -> Tuple[bool, str]:
        valid, error = ValidationController._require_keys(doc, ["scenario", "f"], "vertex")
        if not valid:
            return valid, error
        valid, error = ValidationController._validate_cardinalities(doc["scenario"], "settings", "outcomes", "scenario")
        if not valid:
            return valid, error
        n_set = product_size(doc["scenario"]["settings"])
        n_out = product_size(doc["scenario"]["outcomes"])
        f = doc["f"]
        if not isinstance(f, list) or len(f) != n_set:
            return False, f"The vertex table needs {n_set} entries."
        if not all(isinstance(x, int) and 0 <= x < n_out for x in f):
            return False, f"Vertex entries must be outcome indices in [0, {n_out})."
        return True, ""

    @staticmethod
    def validate_process_function_doc(doc: Any) -> Tuple[bool, str]:
        valid, error = ValidationController._require_keys(doc, ["dims", "omega"], "process function")
        if not valid:
            return valid, error
        valid, error = ValidationController._validate_cardinalities(doc["dims"], "inputs", "outputs", "process")
        if not valid:
            return valid, error
        n_out = product_size(doc["dims"]["outputs"])
        n_in = product_size(doc["dims"]["inputs"])
        omega = doc["omega"]
        if not isinstance(omega, list) or len(omega) != n_out:
            return False, f"omega needs {n_out} entries."
        if not all(isinstance(i, int) and 0 <= i < n_in for i in omega):
            return False, f"omega entries must be input indices in [0, {n_in})."
        return True, ""

    @staticmethod
    def validate_process_doc(doc: Any) -> Tuple[bool, str]:
        valid, error = ValidationController._require_keys(doc, ["dims", "table"], "process")
        if not valid:
            return valid, error
        valid, error = ValidationController._validate_cardinalities(doc["dims"], "inputs", "outputs", "process")
        if not valid:
            return valid, error
        n_in = product_size(doc["dims"]["inputs"])
        n_out = product_size(doc["dims"]["outputs"])
        return ValidationController._validate_table(doc["table"], n_in, n_out, "process")

    @staticmethod
    def validate_witness_doc(doc: Any) -> Tuple[bool, str]:
        valid, error = ValidationController._require_keys(doc, ["scenario", "coefficients"], "witness")
        if not valid:
            return valid, error
        valid, error = ValidationController._validate_cardinalities(doc["scenario"], "settings", "outcomes", "scenario")
        if not valid:
            return valid, error
        n_out = product_size(doc["scenario"]["outcomes"])
        n_set = product_size(doc["scenario"]["settings"])
        return ValidationController._validate_table(doc["coefficients"], n_out, n_set, "witness")

    @staticmethod
    def validate_interventions_doc(doc: Any, parties: int) -> Tuple[bool, str]:
        """Lista de intervenciones locales {"table": [a][i][x][o]}, una por parte."""
        if not isinstance(doc, list) or len(doc) != parties:
            return False, f"Exactly {parties} local interventions are required."
        for k, item in enumerate(doc):
            if not isinstance(item, dict) or "table" not in item:
                return False, f"Intervention {k + 1} needs a 'table'."
        return True, ""
