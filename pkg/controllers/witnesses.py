# controllers/witnesses.py
"""
Testigos lineales sobre correlaciones: GYNI, LGYNI, AF/BW y GYNIN.

Un testigo guarda una tabla de coeficientes c(x⃗, a⃗) y pesos de entrada π(a⃗);
su valor es Σ π(a⃗) Σ c(x⃗, a⃗) p(x⃗|a⃗). Coeficientes y pesos son racionales,
de modo que los máximos sobre vértices se calculan con enteros.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from common.errors import ScenarioMismatchError, UnsupportedWitnessError
from common.numeric import Number, NumericMode, format_number, parse_number
from common.utils import digest_payload
from config import CHUNK_SIZE, ENUMERATION_CAP
from controllers import census_coordinator
from controllers.antinomy import classical_pool
from controllers.causality import causal_codes
from controllers.classical_process import QuasiProcessFunction
from controllers.polytope import CodePool
from controllers.scenario_core import (
    BIPARTITE_BINARY, TRIPARTITE_BINARY, Correlation, FunctionSpace, Scenario, Vertex,
)

logger = logging.getLogger(__name__)

Pool = Union[CodePool, Sequence[Vertex], Sequence[QuasiProcessFunction]]


def _exact(value) -> Fraction:
    if isinstance(value, str):
        value = parse_number(value)
    if isinstance(value, float):
        return Fraction(str(float(value)))
    return Fraction(value)


@dataclass(frozen=True, eq=False)
class Witness:
    """
    Funcional afín sobre correlaciones del escenario.

    `coefficients` tiene forma (n_outcomes, n_settings) con entradas en [0, 1];
    `weights` tiene una entrada por a⃗ y suma 1. `bounds` guarda cotas conocidas
    ("causal", "classical", "algebraic").
    """
    scenario: Scenario
    coefficients: np.ndarray
    weights: Tuple[Fraction, ...]
    name: str = "custom"
    family: Optional[str] = None
    params: Optional[Tuple[int, ...]] = None
    bounds: Dict[str, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        s = self.scenario
        table = np.array([[_exact(v) for v in row] for row in np.asarray(self.coefficients, dtype=object)], dtype=object)
        if table.shape != (s.n_outcomes, s.n_settings):
            raise ScenarioMismatchError(f"coefficient table shape {table.shape} != {(s.n_outcomes, s.n_settings)}")
        if any(v < 0 or v > 1 for v in table.reshape(-1)):
            raise ValueError("witness coefficients must lie in [0, 1]")
        weights = tuple(_exact(w) for w in self.weights)
        if len(weights) != s.n_settings:
            raise ScenarioMismatchError(f"{s.n_settings} input weights needed, got {len(weights)}")
        if any(w < 0 for w in weights) or sum(weights) != 1:
            raise ValueError("input weights must be a probability distribution")
        table.flags.writeable = False
        object.__setattr__(self, "coefficients", table)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "bounds", {k: _exact(v) for k, v in self.bounds.items()})

    @classmethod
    def from_predicate(
        cls,
        scenario: Scenario,
        wins: Callable[[Tuple[int, ...], Tuple[int, ...]], bool],
        name: str = "custom",
        weights: Optional[Sequence[Number]] = None,
        **kwargs,
    ) -> "Witness":
        """Coeficiente 1 donde wins(x⃗, a⃗) y 0 en el resto; pesos uniformes por defecto."""
        space = scenario.space
        table = np.array(
            [[Fraction(1 if wins(x, a) else 0) for a in space.domain_tuples] for x in space.codomain_tuples],
            dtype=object,
        )
        if weights is None:
            weights = [Fraction(1, scenario.n_settings)] * scenario.n_settings
        return cls(scenario, table, tuple(weights), name=name, **kwargs)

    @cached_property
    def weighted(self) -> np.ndarray:
        """π(a⃗)·c(x⃗, a⃗)."""
        return self.coefficients * np.array(self.weights, dtype=object)[None, :]

    @cached_property
    def denominator(self) -> int:
        return math.lcm(*[v.denominator for v in self.weighted.reshape(-1)])

    @cached_property
    def integer_weights(self) -> np.ndarray:
        """π·c escalado por `denominator` a enteros int64."""
        d = self.denominator
        return np.array([[int(v * d) for v in row] for row in self.weighted], dtype=np.int64)

    def value_on_vertex(self, v: Vertex) -> Fraction:
        _check_scenario(self, v.scenario)
        weighted = self.weighted
        return sum((weighted[x, a] for a, x in enumerate(v.f)), Fraction(0))

    def values_on_codes(self, codes: np.ndarray) -> np.ndarray:
        """Valores (float) sobre un lote de códigos de vértice."""
        return self.scores_on_codes(codes) / self.denominator

    def scores_on_codes(self, codes: np.ndarray) -> np.ndarray:
        tables = self.scenario.space.decode_codes(np.asarray(codes, dtype=np.int64))
        return self.integer_weights[tables, np.arange(self.scenario.n_settings)].sum(axis=1)

    def to_json(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {
            "name": self.name,
            "scenario": self.scenario.to_json(),
            "coefficients": [[format_number(v) for v in row] for row in self.coefficients],
            "weights": [format_number(w) for w in self.weights],
        }
        if self.family:
            doc["family"] = self.family
            doc["params"] = list(self.params or ())
        if self.bounds:
            doc["bounds"] = {k: format_number(v) for k, v in self.bounds.items()}
        return doc

    @classmethod
    def from_json(cls, doc: Dict[str, Any]) -> "Witness":
        scenario = Scenario.from_json(doc["scenario"])
        weights = doc.get("weights") or [Fraction(1, scenario.n_settings)] * scenario.n_settings
        params = doc.get("params")
        return cls(
            scenario,
            np.array(doc["coefficients"], dtype=object),
            tuple(weights),
            name=doc.get("name", "custom"),
            family=doc.get("family"),
            params=tuple(params) if params is not None else None,
            bounds=dict(doc.get("bounds", {})),
        )


def _check_scenario(w: Witness, s: Scenario) -> None:
    if s != w.scenario:
        raise ScenarioMismatchError(f"witness {w.name} is defined on {w.scenario.key}, got {s.key}")


def evaluate(w: Witness, p: Correlation) -> Number:
    """Valor exacto en modo racional; float en modo doble."""
    _check_scenario(w, p.scenario)
    if p.mode is NumericMode.RATIONAL:
        return sum((w.weighted[x, a] * p.table[x, a]
                    for x in range(p.scenario.n_outcomes) for a in range(p.scenario.n_settings)), Fraction(0))
    weighted = np.array(w.weighted.tolist(), dtype=float)
    return float((weighted * p.table).sum())


# =============================================================================
# FAMILIAS GYNI / LGYNI
# =============================================================================

def _bits(values: Sequence[int], name: str) -> Tuple[int, int, int, int]:
    values = tuple(int(v) for v in values)
    if len(values) != 4 or any(v not in (0, 1) for v in values):
        raise ValueError(f"{name} needs four bits")
    return values


@dataclass(frozen=True)
class GyniParams:
    """(α0, α1, β0, β1): gana si x1 = a2 ⊕ α1·a1 ⊕ α0 y x2 = a1 ⊕ β1·a2 ⊕ β0."""
    alpha0: int = 0
    alpha1: int = 0
    beta0: int = 0
    beta1: int = 0

    def __post_init__(self):
        _bits(self.as_tuple(), "GyniParams")

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.alpha0, self.alpha1, self.beta0, self.beta1)

    @classmethod
    def all(cls) -> List["GyniParams"]:
        return [cls(*bits) for bits in itertools.product((0, 1), repeat=4)]


@dataclass(frozen=True)
class LgyniParams:
    """(α′0, α′1, β′0, β′1): gana si (a1 ⊕ α′1)·(x1 ⊕ α′0 ⊕ a2) = 0 y (a2 ⊕ β′1)·(x2 ⊕ β′0 ⊕ a1) = 0."""
    alpha0: int = 0
    alpha1: int = 0
    beta0: int = 0
    beta1: int = 0

    def __post_init__(self):
        _bits(self.as_tuple(), "LgyniParams")

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.alpha0, self.alpha1, self.beta0, self.beta1)

    @classmethod
    def all(cls) -> List["LgyniParams"]:
        return [cls(*bits) for bits in itertools.product((0, 1), repeat=4)]


def gyni_target(params: GyniParams, a: Tuple[int, ...]) -> Tuple[int, int]:
    a1, a2 = a
    return (a2 ^ (params.alpha1 & a1) ^ params.alpha0, a1 ^ (params.beta1 & a2) ^ params.beta0)


def gyni_vertex(params: GyniParams = GyniParams()) -> Vertex:
    """Único vértice que gana el juego GYNI en todos los ajustes."""
    return Vertex.from_callable(BIPARTITE_BINARY, lambda a: gyni_target(params, a))


def gyni(params: GyniParams = GyniParams()) -> Witness:
    return Witness.from_predicate(
        BIPARTITE_BINARY,
        lambda x, a: x == gyni_target(params, a),
        name="gyni" if params == GyniParams() else "gyni-{}{}{}{}".format(*params.as_tuple()),
        family="gyni",
        params=params.as_tuple(),
        bounds={"causal": Fraction(1, 2), "classical": Fraction(1, 2), "algebraic": 1},
    )


def _lgyni_wins(params: LgyniParams, x: Tuple[int, ...], a: Tuple[int, ...]) -> bool:
    (x1, x2), (a1, a2) = x, a
    first = (a1 ^ params.alpha1) & (x1 ^ params.alpha0 ^ a2)
    second = (a2 ^ params.beta1) & (x2 ^ params.beta0 ^ a1)
    return first == 0 and second == 0


def lgyni(params: LgyniParams = LgyniParams()) -> Witness:
    return Witness.from_predicate(
        BIPARTITE_BINARY,
        lambda x, a: _lgyni_wins(params, x, a),
        name="lgyni" if params == LgyniParams() else "lgyni-{}{}{}{}".format(*params.as_tuple()),
        family="lgyni",
        params=params.as_tuple(),
        bounds={"causal": Fraction(3, 4), "classical": Fraction(3, 4), "algebraic": 1},
    )


# =============================================================================
# TESTIGOS TRIPARTITOS
# =============================================================================

def gynin() -> Witness:
    """Gana si x⃗ = (a3, a1, a2) o x⃗ = (ā3, ā1, ā2)."""
    def wins(x, a):
        shifted = (a[2], a[0], a[1])
        return x == shifted or x == tuple(1 - b for b in shifted)

    return Witness.from_predicate(
        TRIPARTITE_BINARY, wins, name="gynin",
        bounds={"causal": Fraction(1, 2), "classical": Fraction(5, 8), "algebraic": 1},
    )


def afbw_inequality() -> Witness:
    """
    Juego de voto mayoritario: con maj(a⃗) = 0 gana x⃗ = (a3, a1, a2); con
    maj(a⃗) = 1 gana x⃗ = (ā2, ā3, ā1). Pesos uniformes sobre los 8 ajustes.
    """
    def wins(x, a):
        if sum(a) < 2:
            return x == (a[2], a[0], a[1])
        return x == (1 - a[1], 1 - a[2], 1 - a[0])

    return Witness.from_predicate(
        TRIPARTITE_BINARY, wins, name="afbw",
        bounds={"causal": Fraction(3, 4), "classical": 1, "algebraic": 1},
    )


NAMED_WITNESSES: Dict[str, Callable[[], Witness]] = {
    "gyni": gyni,
    "lgyni": lgyni,
    "gynin": gynin,
    "afbw": afbw_inequality,
}


def witness_by_name(name: str) -> Witness:
    """'gyni', 'lgyni-0110', 'gynin', 'afbw'..."""
    name = name.strip().lower()
    if name in NAMED_WITNESSES:
        return NAMED_WITNESSES[name]()
    family, _, bits = name.partition("-")
    if family in ("gyni", "lgyni") and len(bits) == 4 and set(bits) <= {"0", "1"}:
        values = [int(b) for b in bits]
        return gyni(GyniParams(*values)) if family == "gyni" else lgyni(LgyniParams(*values))
    raise UnsupportedWitnessError(f"unknown witness {name!r}; known: {', '.join(NAMED_WITNESSES)}, gyni-XXXX, lgyni-XXXX")


# =============================================================================
# MAXIMIZACIÓN
# =============================================================================

@dataclass(frozen=True)
class MaxResult:
    value: Fraction
    code: int
    vertex: Vertex
    pool_size: int
    process: Optional[QuasiProcessFunction] = None

    def to_json(self) -> Dict[str, Any]:
        doc = {
            "value": format_number(self.value),
            "value_float": float(self.value),
            "argmax": list(self.vertex.f),
            "code": self.code,
            "pool_size": self.pool_size,
        }
        if self.process is not None:
            doc["process"] = list(self.process.omega)
        return doc


def _pool_codes(w: Witness, pool: Pool) -> Tuple[Optional[CodePool], np.ndarray, Dict[int, QuasiProcessFunction]]:
    """Normaliza el pool a códigos de vértice del escenario del testigo."""
    if isinstance(pool, CodePool):
        if pool.space != w.scenario.space:
            raise ScenarioMismatchError(f"pool space does not match witness {w.name}")
        return pool, np.zeros(0, dtype=np.int64), {}
    items = list(pool)
    processes: Dict[int, QuasiProcessFunction] = {}
    codes = []
    for item in items:
        if isinstance(item, Vertex):
            _check_scenario(w, item.scenario)
            codes.append(item.code)
        elif isinstance(item, QuasiProcessFunction):
            # bajo intervenciones de paso x⃗ = ω(a⃗): el código del vértice es el de ω
            _check_scenario(w, item.dims.as_scenario())
            codes.append(item.code)
            processes.setdefault(item.code, item)
        else:
            raise TypeError(f"unsupported pool element {type(item).__name__}")
    return None, np.asarray(codes, dtype=np.int64), processes


def _chunk_max(settings: Tuple[int, ...], outcomes: Tuple[int, ...], weights: Tuple[Tuple[int, ...], ...],
               lo: int, hi: int) -> Tuple[int, int, int]:
    space = FunctionSpace(settings, outcomes)
    codes = np.arange(lo, hi, dtype=np.int64)
    scores = np.array(weights, dtype=np.int64)[space.decode_codes(codes), np.arange(space.n_domain)].sum(axis=1)
    top = scores.max()
    return int(top), int(codes[scores == top].min()), len(codes)


def _blocks_max(w: Witness, blocks: Iterable[np.ndarray]) -> List[Tuple[int, int, int]]:
    out = []
    for block in blocks:
        if len(block) == 0:
            continue
        scores = w.scores_on_codes(block)
        top = scores.max()
        out.append((int(top), int(block[scores == top].min()), len(block)))
    return out


def max_over(w: Witness, pool: Pool, jobs: Optional[int] = 1, chunk: int = CHUNK_SIZE) -> MaxResult:
    """
    Máximo exacto; en empates gana el código de vértice más bajo.

    Un pool completo sin filtro se reparte entre `jobs` procesos.
    """
    code_pool, codes, processes = _pool_codes(w, pool)
    s = w.scenario
    if code_pool is not None and code_pool.codes is None and code_pool.allowed is None:
        weights = tuple(tuple(int(v) for v in row) for row in w.integer_weights)
        partials = census_coordinator.map_chunks(
            _chunk_max, (s.settings, s.outcomes, weights), s.n_vertices, jobs, chunk, f"max {w.name}"
        )
    elif code_pool is not None:
        partials = _blocks_max(w, (block for block, _ in code_pool.chunks(chunk)))
    else:
        partials = _blocks_max(w, (codes[i:i + chunk] for i in range(0, len(codes), chunk)))
    if not partials:
        raise ValueError("cannot maximize a witness over an empty pool")
    best_score = max(score for score, _, _ in partials)
    best_code = min(code for score, code, _ in partials if score == best_score)
    size = sum(n for _, _, n in partials)
    value = Fraction(best_score, w.denominator)
    logger.debug(f"max of {w.name} over {size:,} elements: {value} at code {best_code}")
    return MaxResult(value, best_code, Vertex.from_code(s, best_code), size, processes.get(best_code))


def maximal_violators(w: Witness) -> List[Vertex]:
    """Vértices bipartitos que alcanzan el valor 1 de un testigo GYNI/LGYNI."""
    if w.family not in ("gyni", "lgyni") or w.scenario != BIPARTITE_BINARY:
        raise UnsupportedWitnessError(f"maximal violators are only tabulated for bipartite GYNI/LGYNI, got {w.name}")
    codes = np.arange(w.scenario.n_vertices, dtype=np.int64)
    hits = codes[w.scores_on_codes(codes) == w.denominator]
    return [Vertex.from_code(w.scenario, int(c)) for c in hits]


def gyni_lgyni_correspondence(params: GyniParams) -> List[LgyniParams]:
    """Testigos LGYNI que el vértice GYNI de `params` viola al máximo."""
    v = gyni_vertex(params)
    return [lp for lp in LgyniParams.all() if lgyni(lp).value_on_vertex(v) == 1]


_bounds_cache: Dict[str, Dict[str, Fraction]] = {}


def witness_bounds(w: Witness, cap: int = ENUMERATION_CAP, jobs: Optional[int] = None) -> Dict[str, Fraction]:
    """Cotas causal, clásica y algebraica calculadas por maximización (memoizadas por contenido)."""
    doc = w.to_json()
    doc.pop("bounds", None)
    doc.pop("name", None)
    key = digest_payload(doc)
    if key not in _bounds_cache:
        s = w.scenario
        _bounds_cache[key] = {
            "causal": max_over(w, CodePool(s.space, codes=causal_codes(s, cap, jobs))).value,
            "classical": max_over(w, classical_pool(s, cap, jobs)).value,
            "algebraic": max_over(w, CodePool.full(s.space), jobs=jobs).value,
        }
        logger.info(f"📐 Bounds of {w.name}: " + ", ".join(f"{k}={v}" for k, v in _bounds_cache[key].items()))
    return dict(_bounds_cache[key])
