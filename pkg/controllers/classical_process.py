# controllers/classical_process.py
"""
Procesos clásicos: funciones cuasi-proceso ω: O⃗ → I⃗, procesos estocásticos
P(i⃗|o⃗), intervenciones locales y consistencia lógica.

Convención: las salidas o⃗ hacen de dominio y las entradas i⃗ de codominio, de
modo que una función de proceso comparte codificación con los vértices de un
escenario con settings = |O_k| y outcomes = |I_k|.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from common.errors import CapExceededError, DimensionMismatchError, InvalidCorrelationError
from common.numeric import (
    Number, NumericMode, approx_equal, as_number, format_number, is_negative,
    promote, to_array, zeros,
)
from common.utils import mixed_radix_strides, product_size
from config import CHUNK_SIZE, ENUMERATION_CAP, INTERVENTION_CAP, NUMERIC_EPSILON
from controllers import census_coordinator, flag_cache
from controllers.causality import causal_mask
from controllers.digraph import Digraph
from controllers.polytope import CodePool, HullResult, hull_membership, verify_separation
from controllers.scenario_core import Correlation, FunctionSpace, Scenario, signalling_edge_masks

logger = logging.getLogger(__name__)


# =============================================================================
# DIMENSIONES Y FUNCIONES CUASI-PROCESO
# =============================================================================

@dataclass(frozen=True)
class ProcessDims:
    """Cardinalidades |I_k| (entradas) y |O_k| (salidas) por parte."""
    inputs: Tuple[int, ...]
    outputs: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(int(d) for d in self.inputs))
        object.__setattr__(self, "outputs", tuple(int(d) for d in self.outputs))
        if len(self.inputs) != len(self.outputs) or not self.inputs:
            raise DimensionMismatchError("inputs and outputs need one entry per party")
        if any(d < 1 for d in self.inputs + self.outputs):
            raise DimensionMismatchError("all cardinalities must be >= 1")

    @classmethod
    def uniform(cls, parties: int, inputs: int, outputs: int) -> "ProcessDims":
        return cls((inputs,) * parties, (outputs,) * parties)

    @property
    def parties(self) -> int:
        return len(self.inputs)

    @cached_property
    def space(self) -> FunctionSpace:
        return FunctionSpace(self.outputs, self.inputs)

    @property
    def n_inputs(self) -> int:
        return product_size(self.inputs)

    @property
    def n_outputs(self) -> int:
        return product_size(self.outputs)

    @property
    def n_interventions(self) -> int:
        return product_size([o ** i for i, o in zip(self.inputs, self.outputs)])

    def as_scenario(self) -> Scenario:
        """Escenario de paso directo: settings = salidas, outcomes = entradas."""
        return Scenario(self.outputs, self.inputs)

    def to_json(self) -> Dict[str, Any]:
        return {"inputs": list(self.inputs), "outputs": list(self.outputs)}

    @classmethod
    def from_json(cls, doc: Dict[str, Any]) -> "ProcessDims":
        return cls(tuple(doc["inputs"]), tuple(doc["outputs"]))


BINARY_BIPARTITE = ProcessDims.uniform(2, 2, 2)
BINARY_TRIPARTITE = ProcessDims.uniform(3, 2, 2)


@dataclass(frozen=True)
class QuasiProcessFunction:
    """ω: índice de o⃗ → índice de i⃗."""
    dims: ProcessDims
    omega: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "omega", tuple(int(i) for i in self.omega))
        if len(self.omega) != self.dims.n_outputs:
            raise DimensionMismatchError(f"omega needs {self.dims.n_outputs} entries, got {len(self.omega)}")
        if any(i < 0 or i >= self.dims.n_inputs for i in self.omega):
            raise DimensionMismatchError("omega entry outside the input range")

    @classmethod
    def from_callable(cls, dims: ProcessDims, fn: Callable[[Tuple[int, ...]], Sequence[int]]) -> "QuasiProcessFunction":
        space = dims.space
        return cls(dims, tuple(space.codomain_index(fn(o)) for o in space.domain_tuples))

    @classmethod
    def from_code(cls, dims: ProcessDims, code: int) -> "QuasiProcessFunction":
        return cls(dims, dims.space.decode(int(code)))

    @cached_property
    def code(self) -> int:
        return self.dims.space.encode(self.omega)

    def __call__(self, outputs: Sequence[int]) -> Tuple[int, ...]:
        space = self.dims.space
        return space.codomain_tuples[self.omega[space.domain_index(outputs)]]

    def to_stochastic(self) -> "StochasticProcess":
        table = zeros((self.dims.n_inputs, self.dims.n_outputs), NumericMode.RATIONAL)
        for o, i in enumerate(self.omega):
            table[i, o] = Fraction(1)
        return StochasticProcess(self.dims, table)

    def to_json(self) -> Dict[str, Any]:
        return {"dims": self.dims.to_json(), "omega": list(self.omega)}

    @classmethod
    def from_json(cls, doc: Dict[str, Any]) -> "QuasiProcessFunction":
        return cls(ProcessDims.from_json(doc["dims"]), tuple(doc["omega"]))


def relabel(
    w: QuasiProcessFunction,
    input_perms: Sequence[Sequence[int]],
    output_perms: Sequence[Sequence[int]],
) -> QuasiProcessFunction:
    """ω′(o⃗) = π_I(ω(π_O(o⃗))) con permutaciones locales por parte."""
    def mapped(o: Tuple[int, ...]) -> Tuple[int, ...]:
        inner = tuple(output_perms[k][v] for k, v in enumerate(o))
        return tuple(input_perms[k][v] for k, v in enumerate(w(inner)))
    return QuasiProcessFunction.from_callable(w.dims, mapped)


# =============================================================================
# PROCESOS ESTOCÁSTICOS
# =============================================================================

@dataclass(frozen=True, eq=False)
class StochasticProcess:
    """Tabla P(i⃗|o⃗): filas i⃗, columnas o⃗, estocástica por columnas."""
    dims: ProcessDims
    table: np.ndarray
    mode: NumericMode = NumericMode.RATIONAL
    epsilon: float = NUMERIC_EPSILON

    def __post_init__(self):
        table = to_array(np.asarray(self.table).tolist(), self.mode)
        expected = (self.dims.n_inputs, self.dims.n_outputs)
        if table.shape != expected:
            raise DimensionMismatchError(f"process table shape {table.shape} != {expected}")
        for value in table.reshape(-1):
            if is_negative(value, self.mode, self.epsilon):
                raise InvalidCorrelationError(f"negative process entry {value}")
        for o, total in enumerate(table.sum(axis=0)):
            if not approx_equal(total, 1, self.mode, self.epsilon):
                raise InvalidCorrelationError(f"process column {o} sums to {total}, not 1")
        table.flags.writeable = False
        object.__setattr__(self, "table", table)

    @classmethod
    def mixture(cls, items: Sequence[Tuple[Number, "StochasticProcess"]]) -> "StochasticProcess":
        if not items:
            raise InvalidCorrelationError("empty mixture")
        dims = items[0][1].dims
        if any(p.dims != dims for _, p in items):
            raise DimensionMismatchError("cannot mix processes with different dims")
        mode = promote(*[p.mode for _, p in items], *[NumericMode.DOUBLE for w, _ in items if isinstance(w, float)])
        table = zeros((dims.n_inputs, dims.n_outputs), mode)
        for w, p in items:
            table = table + as_number(w, mode) * to_array(p.table.tolist(), mode)
        return cls(dims, table, mode)

    def as_correlation(self) -> Correlation:
        """Misma tabla vista como correlación del escenario de paso directo."""
        return Correlation(self.dims.as_scenario(), self.table, self.mode, self.epsilon)

    def to_json(self) -> Dict[str, Any]:
        return {
            "dims": self.dims.to_json(),
            "numeric": self.mode.value,
            "axes": {"rows": "i", "columns": "o"},
            "table": [[format_number(v) for v in row] for row in self.table.tolist()],
        }

    @classmethod
    def from_json(cls, doc: Dict[str, Any]) -> "StochasticProcess":
        mode = NumericMode(doc.get("numeric", "rational"))
        return cls(ProcessDims.from_json(doc["dims"]), to_array(doc["table"], mode), mode)


# =============================================================================
# INTERVENCIONES DETERMINISTAS (TEOREMA DEL PUNTO FIJO)
# =============================================================================

@dataclass(frozen=True)
class InterventionTable:
    """Todas las tuplas h = (h_k: I_k → O_k) y el índice de o⃗ = h(i⃗)."""
    per_party: Tuple[np.ndarray, ...]
    selectors: Tuple[np.ndarray, ...]
    o_index: np.ndarray

    def intervention(self, h: int) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(int(v) for v in self.per_party[k][self.selectors[k][h]]) for k in range(len(self.per_party)))


@lru_cache(maxsize=32)
def intervention_table(dims: ProcessDims, cap: int = INTERVENTION_CAP) -> InterventionTable:
    total = dims.n_interventions
    if total > cap:
        raise CapExceededError(f"{total:,} deterministic interventions exceed the cap {cap:,}")
    per_party = tuple(
        np.array(list(itertools.product(range(o), repeat=i)), dtype=np.int64).reshape(o ** i, i)
        for i, o in zip(dims.inputs, dims.outputs)
    )
    grids = np.meshgrid(*[np.arange(len(pp)) for pp in per_party], indexing="ij")
    selectors = tuple(g.reshape(-1) for g in grids)
    i_tuples = np.array(dims.space.codomain_tuples, dtype=np.int64).reshape(dims.n_inputs, dims.parties)
    strides = mixed_radix_strides(dims.outputs)
    o_index = np.zeros((total, dims.n_inputs), dtype=np.int64)
    for k in range(dims.parties):
        o_index += per_party[k][selectors[k]][:, i_tuples[:, k]] * strides[k]
    return InterventionTable(per_party, selectors, o_index)


def _intervention_o_index(dims: ProcessDims, h: Sequence[Sequence[int]]) -> np.ndarray:
    i_tuples = dims.space.codomain_tuples
    strides = mixed_radix_strides(dims.outputs)
    return np.array([sum(h[k][i[k]] * strides[k] for k in range(dims.parties)) for i in i_tuples], dtype=np.int64)


@dataclass(frozen=True)
class ProcessFunctionCheck:
    """Resultado del test de punto fijo único; en fallo, la h que lo rompe."""
    valid: bool
    intervention: Optional[Tuple[Tuple[int, ...], ...]] = None
    fixed_points: Optional[int] = None

    def to_json(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {"process_function": self.valid}
        if not self.valid:
            doc["intervention"] = [list(h) for h in self.intervention]
            doc["fixed_points"] = self.fixed_points
        return doc


def fixed_point_count(w: QuasiProcessFunction, h: Sequence[Sequence[int]]) -> int:
    """Número de i⃗ con ω(h(i⃗)) = i⃗."""
    o_index = _intervention_o_index(w.dims, h)
    omega = np.array(w.omega, dtype=np.int64)
    return int(np.count_nonzero(omega[o_index] == np.arange(w.dims.n_inputs)))


def is_process_function(w: QuasiProcessFunction, cap: int = INTERVENTION_CAP) -> ProcessFunctionCheck:
    """ω es función de proceso si ω∘h tiene exactamente un punto fijo para toda h."""
    table = intervention_table(w.dims, cap)
    omega = np.array(w.omega, dtype=np.int64)
    counts = (omega[table.o_index] == np.arange(w.dims.n_inputs)).sum(axis=1)
    bad = np.nonzero(counts != 1)[0]
    if len(bad) == 0:
        return ProcessFunctionCheck(True)
    h = int(bad[0])
    return ProcessFunctionCheck(False, table.intervention(h), int(counts[h]))


def process_function_mask(dims: ProcessDims, codes: np.ndarray, cap: int = INTERVENTION_CAP) -> np.ndarray:
    """Versión vectorizada sobre un lote de códigos ω."""
    table = intervention_table(dims, cap)
    digits = dims.space.decode_codes(codes)
    if dims.n_inputs < 128:
        digits = digits.astype(np.int8)
    target = np.arange(dims.n_inputs, dtype=digits.dtype)
    alive = np.arange(len(codes))
    for row in table.o_index:
        if len(alive) == 0:
            break
        counts = (digits[alive][:, row] == target).sum(axis=1)
        alive = alive[counts == 1]
    mask = np.zeros(len(codes), dtype=bool)
    mask[alive] = True
    return mask


@dataclass(frozen=True)
class ConsistencyCheck:
    consistent: bool
    intervention: Optional[Tuple[Tuple[int, ...], ...]] = None
    total: Optional[Number] = None

    def to_json(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {"consistent": self.consistent}
        if not self.consistent:
            doc["intervention"] = [list(h) for h in self.intervention]
            doc["total"] = format_number(self.total)
        return doc


def intervention_totals(p: StochasticProcess, cap: int = INTERVENTION_CAP) -> np.ndarray:
    """Probabilidad total Σ_i⃗ P(i⃗|h(i⃗)) para cada h determinista."""
    table = intervention_table(p.dims, cap)
    rows = np.arange(p.dims.n_inputs)[None, :]
    return p.table[rows, table.o_index].sum(axis=1)


def is_logically_consistent(p: StochasticProcess, cap: int = INTERVENTION_CAP) -> ConsistencyCheck:
    """
    Consistencia lógica: la probabilidad total es 1 para toda intervención
    determinista (basta por multilinealidad).
    """
    totals = intervention_totals(p, cap)
    for h, total in enumerate(totals):
        if not approx_equal(total, 1, p.mode, p.epsilon):
            table = intervention_table(p.dims, cap)
            return ConsistencyCheck(False, table.intervention(h), total)
    return ConsistencyCheck(True)


def causal_structure(w: QuasiProcessFunction) -> Digraph:
    """Arista k→l si ω_l depende de o_k."""
    mask = signalling_edge_masks(w.dims.space, np.array([w.omega], dtype=np.int64))[0]
    return Digraph.from_mask(w.dims.parties, int(mask))


# =============================================================================
# INTERVENCIONES LOCALES Y CORRELACIONES
# =============================================================================

@dataclass(frozen=True, eq=False)
class LocalIntervention:
    """p(x_k, o_k | a_k, i_k) guardado con forma (A_k, I_k, X_k, O_k)."""
    table: np.ndarray
    mode: NumericMode = NumericMode.RATIONAL
    epsilon: float = NUMERIC_EPSILON

    def __post_init__(self):
        table = to_array(np.asarray(self.table).tolist(), self.mode)
        if table.ndim != 4:
            raise DimensionMismatchError("intervention table needs shape (A, I, X, O)")
        for a in range(table.shape[0]):
            for i in range(table.shape[1]):
                block = table[a, i]
                if any(is_negative(v, self.mode, self.epsilon) for v in block.reshape(-1)):
                    raise InvalidCorrelationError("negative intervention entry")
                if not approx_equal(block.sum(), 1, self.mode, self.epsilon):
                    raise InvalidCorrelationError(f"intervention block (a={a}, i={i}) is not normalized")
        table.flags.writeable = False
        object.__setattr__(self, "table", table)

    @property
    def settings(self) -> int:
        return self.table.shape[0]

    @property
    def inputs(self) -> int:
        return self.table.shape[1]

    @property
    def outcomes(self) -> int:
        return self.table.shape[2]

    @property
    def outputs(self) -> int:
        return self.table.shape[3]

    @classmethod
    def deterministic(cls, phi: Sequence[Sequence[int]], psi: Sequence[Sequence[int]],
                      outcomes: int, outputs: int) -> "LocalIntervention":
        """(x, o) = (φ(a, i), ψ(a, i))."""
        settings, inputs = len(phi), len(phi[0])
        table = zeros((settings, inputs, outcomes, outputs), NumericMode.RATIONAL)
        for a in range(settings):
            for i in range(inputs):
                table[a, i, phi[a][i], psi[a][i]] = Fraction(1)
        return cls(table)

    @classmethod
    def pass_through(cls, settings: int, inputs: int) -> "LocalIntervention":
        """x_k = i_k y o_k = a_k."""
        phi = [[i for i in range(inputs)] for _ in range(settings)]
        psi = [[a for _ in range(inputs)] for a in range(settings)]
        return cls.deterministic(phi, psi, inputs, settings)

    def to_json(self) -> Dict[str, Any]:
        return {
            "numeric": self.mode.value,
            "axes": ["a", "i", "x", "o"],
            "table": [[[[format_number(v) for v in o_row] for o_row in x_block] for x_block in i_block]
                      for i_block in self.table.tolist()],
        }

    @classmethod
    def from_json(cls, doc: Dict[str, Any]) -> "LocalIntervention":
        mode = NumericMode(doc.get("numeric", "rational"))
        return cls(to_array(doc["table"], mode), mode)

    def kernel(self, mode: NumericMode) -> np.ndarray:
        """Matriz [(a, x), (i, o)] para el producto de Kronecker."""
        table = self.table if mode is self.mode else to_array(self.table.tolist(), mode)
        a, i, x, o = table.shape
        return table.transpose(0, 2, 1, 3).reshape(a * x, i * o)


def pass_through_interventions(dims: ProcessDims) -> List[LocalIntervention]:
    return [LocalIntervention.pass_through(o, i) for i, o in zip(dims.inputs, dims.outputs)]


@dataclass(frozen=True, eq=False)
class ProcessCorrelation:
    """Tabla cruda p(x⃗|a⃗) con informe de normalización."""
    scenario: Scenario
    table: np.ndarray
    column_sums: Tuple[Number, ...]
    normalized: bool
    mode: NumericMode
    epsilon: float = NUMERIC_EPSILON

    def to_correlation(self) -> Correlation:
        if not self.normalized:
            raise InvalidCorrelationError(
                f"process output is not normalized (column sums {[format_number(s) for s in self.column_sums]})"
            )
        return Correlation(self.scenario, self.table, self.mode, self.epsilon)

    def to_json(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario.to_json(),
            "numeric": self.mode.value,
            "normalized": self.normalized,
            "column_sums": [format_number(s) for s in self.column_sums],
            "table": [[format_number(v) for v in row] for row in self.table.tolist()],
        }


def correlation_from_process(p: StochasticProcess, interventions: Sequence[LocalIntervention]) -> ProcessCorrelation:
    """p(x⃗|a⃗) = Σ_{i⃗,o⃗} ∏_k p(x_k,o_k|a_k,i_k) · P(i⃗|o⃗)."""
    dims = p.dims
    if len(interventions) != dims.parties:
        raise DimensionMismatchError(f"{dims.parties} interventions needed, got {len(interventions)}")
    for k, iv in enumerate(interventions):
        if iv.inputs != dims.inputs[k] or iv.outputs != dims.outputs[k]:
            raise DimensionMismatchError(
                f"party {k + 1}: intervention acts on (I={iv.inputs}, O={iv.outputs}), "
                f"process has (I={dims.inputs[k]}, O={dims.outputs[k]})"
            )
    mode = promote(p.mode, *[iv.mode for iv in interventions])
    eps = max([p.epsilon] + [iv.epsilon for iv in interventions])
    kernel = interventions[0].kernel(mode)
    for iv in interventions[1:]:
        kernel = np.kron(kernel, iv.kernel(mode))
    n = dims.parties
    process = to_array(p.table.tolist(), mode).reshape(tuple(dims.inputs) + tuple(dims.outputs))
    # orden (i_1, o_1, i_2, o_2, ...)
    interleaved = [axis for k in range(n) for axis in (k, n + k)]
    vector = process.transpose(interleaved).reshape(-1)
    result = kernel.dot(vector)
    settings = tuple(iv.settings for iv in interventions)
    outcomes = tuple(iv.outcomes for iv in interventions)
    shaped = result.reshape(tuple(d for k in range(n) for d in (settings[k], outcomes[k])))
    order = [2 * k + 1 for k in range(n)] + [2 * k for k in range(n)]
    scenario = Scenario(settings, outcomes)
    table = shaped.transpose(order).reshape(scenario.n_outcomes, scenario.n_settings)
    sums = tuple(table.sum(axis=0).tolist())
    normalized = all(approx_equal(s, 1, mode, eps) for s in sums)
    if not normalized:
        logger.warning("⚠️ Process output is not normalized: the quasi-process is logically inconsistent")
    return ProcessCorrelation(scenario, table, sums, normalized, mode, eps)


def quasi_realize(p: Correlation) -> Tuple[StochasticProcess, List[LocalIntervention]]:
    """Codificación canónica P(i⃗|o⃗) = p(x⃗=i⃗|a⃗=o⃗) con intervenciones de paso directo."""
    dims = ProcessDims(p.scenario.outcomes, p.scenario.settings)
    process = StochasticProcess(dims, p.table, p.mode, p.epsilon)
    return process, pass_through_interventions(dims)


# =============================================================================
# AF/BW Y BFW
# =============================================================================

def afbw_process() -> QuasiProcessFunction:
    """i1 = ō2·o3, i2 = ō3·o1, i3 = ō1·o2."""
    return QuasiProcessFunction.from_callable(
        BINARY_TRIPARTITE,
        lambda o: ((1 - o[1]) & o[2], (1 - o[2]) & o[0], (1 - o[0]) & o[1]),
    )


def _flip(bit: int) -> Tuple[int, int]:
    return (1, 0) if bit else (0, 1)


def afbw_family() -> List[QuasiProcessFunction]:
    """Los 64 conjugados de AF/BW por inversiones locales de entradas y salidas."""
    base = afbw_process()
    family: Dict[int, QuasiProcessFunction] = {}
    for input_bits in itertools.product((0, 1), repeat=3):
        for output_bits in itertools.product((0, 1), repeat=3):
            w = relabel(base, [_flip(b) for b in input_bits], [_flip(b) for b in output_bits])
            family.setdefault(w.code, w)
    return [family[code] for code in sorted(family)]


def cyclic_loop(negate: bool) -> QuasiProcessFunction:
    """Bucle causal ω(o⃗) = (o3, o1, o2), o con todas las entradas negadas."""
    t = 1 if negate else 0
    return QuasiProcessFunction.from_callable(BINARY_TRIPARTITE, lambda o: (o[2] ^ t, o[0] ^ t, o[1] ^ t))


def bfw_process(weight: Number = Fraction(1, 2)) -> StochasticProcess:
    """Mezcla de los dos bucles causales; consistente solo con pesos ½ / ½."""
    rest = 1 - weight
    return StochasticProcess.mixture([
        (weight, cyclic_loop(False).to_stochastic()),
        (rest, cyclic_loop(True).to_stochastic()),
    ])


# =============================================================================
# ENUMERACIÓN Y PERTENENCIA AL POLITOPO DE EXTREMOS DETERMINISTAS
# =============================================================================

def _procfn_chunk(inputs: Tuple[int, ...], outputs: Tuple[int, ...], lo: int, hi: int) -> np.ndarray:
    dims = ProcessDims(inputs, outputs)
    codes = np.arange(lo, hi, dtype=np.int64)
    return codes[process_function_mask(dims, codes)]


@lru_cache(maxsize=8)
def _process_function_codes(dims: ProcessDims, cap: int, jobs: Optional[int]) -> np.ndarray:
    space = dims.space
    if space.n_functions > cap:
        raise CapExceededError(f"{space.n_functions:,} candidate functions exceed the cap {cap:,}")
    intervention_table(dims)

    def compute() -> np.ndarray:
        parts = census_coordinator.map_chunks(
            _procfn_chunk, (dims.inputs, dims.outputs), space.n_functions, jobs, CHUNK_SIZE, "process functions"
        )
        flags = np.zeros(space.n_functions, dtype=bool)
        for part in parts:
            flags[part] = True
        return flags

    flags = flag_cache.cached_flags("procfn", space, compute, use_cache=space.n_functions > 1 << 16)
    codes = np.nonzero(flags)[0].astype(np.int64)
    codes.flags.writeable = False
    logger.info(f"🔁 {len(codes):,} process functions among {space.n_functions:,} candidates")
    return codes


def process_function_codes(dims: ProcessDims, cap: int = ENUMERATION_CAP, jobs: Optional[int] = None) -> np.ndarray:
    """Códigos ω de todas las funciones de proceso, en orden creciente."""
    return _process_function_codes(dims, cap, jobs)


def enumerate_process_functions(dims: ProcessDims, cap: int = ENUMERATION_CAP,
                                jobs: Optional[int] = None) -> List[QuasiProcessFunction]:
    return [QuasiProcessFunction.from_code(dims, int(c)) for c in process_function_codes(dims, cap, jobs)]


def noncausal_process_functions(dims: ProcessDims, cap: int = ENUMERATION_CAP,
                                jobs: Optional[int] = None) -> np.ndarray:
    """Funciones de proceso cuya correlación con paso directo es un vértice no causal."""
    codes = process_function_codes(dims, cap, jobs)
    return codes[~causal_mask(dims.space, codes)]


@dataclass(frozen=True)
class DEPDecomposition:
    """Mezcla de funciones de proceso, o certificado de separación."""
    member: bool
    weights: Tuple[Tuple[Number, QuasiProcessFunction], ...] = ()
    farkas: Optional[List[List[Number]]] = None
    hull: Optional[HullResult] = None

    def verify(self, p: StochasticProcess, cap: int = ENUMERATION_CAP) -> bool:
        if self.member:
            if not all(is_process_function(w).valid for _, w in self.weights):
                return False
            rebuilt = StochasticProcess.mixture([(weight, w.to_stochastic()) for weight, w in self.weights])
            diff = to_array(rebuilt.table.tolist(), p.mode) - p.table
            return all(abs(float(d)) <= p.epsilon * 10 for d in diff.reshape(-1))
        pool = CodePool(p.dims.space, codes=process_function_codes(p.dims, cap))
        return verify_separation(p.as_correlation(), self.hull, pool)

    def to_json(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {"member": self.member}
        if self.member:
            doc["decomposition"] = [{"weight": format_number(wt), "omega": list(w.omega)} for wt, w in self.weights]
        else:
            doc["farkas"] = [[format_number(v) for v in row] for row in self.farkas]
        return doc


def dep_membership(p: StochasticProcess, cap: int = ENUMERATION_CAP, jobs: Optional[int] = None) -> DEPDecomposition:
    """LP de pertenencia a la envoltura convexa de las funciones de proceso."""
    pool = CodePool(p.dims.space, codes=process_function_codes(p.dims, cap, jobs))
    result = hull_membership(p.as_correlation(), pool)
    if result.member:
        weights = tuple((w, QuasiProcessFunction.from_code(p.dims, code)) for w, code in result.weights)
        return DEPDecomposition(True, weights, hull=result)
    return DEPDecomposition(False, farkas=result.farkas_matrix(p.dims.space), hull=result)
