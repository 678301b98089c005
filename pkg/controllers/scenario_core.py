# controllers/scenario_core.py
"""
Escenarios, correlaciones, vértices deterministas y grafos de señalización.

Convención de índices: las tuplas (de settings o de outcomes) se ordenan
lexicográficamente con la parte 1 como la más significativa. Las filas de una
tabla de correlación son tuplas de outcomes y las columnas tuplas de settings.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from common.errors import InvalidCorrelationError, ScenarioMismatchError
from common.numeric import (
    Number, NumericMode, approx_equal, as_number, format_number, is_negative,
    promote, to_array, zeros,
)
from common.utils import mixed_radix_strides, product_size
from config import NUMERIC_EPSILON
from controllers.digraph import Digraph

logger = logging.getLogger(__name__)


# =============================================================================
# ESPACIOS DE FUNCIONES (codificación compartida vértices / funciones de proceso)
# =============================================================================

@dataclass(frozen=True)
class FunctionSpace:
    """
    Funciones totales entre productos finitos, parte a parte.

    `domain[k]` y `codomain[k]` son las cardinalidades de la parte k. Una
    función se guarda como tabla f[s] = índice de la tupla imagen de la tupla
    s del dominio, y se empaqueta como código entero Σ_s f[s]·K^s con
    K = ∏ codomain.
    """
    domain: Tuple[int, ...]
    codomain: Tuple[int, ...]

    def __post_init__(self):
        if len(self.domain) != len(self.codomain) or not self.domain:
            raise ValueError("domain and codomain need one entry per party (N >= 1)")
        if any(d < 1 for d in self.domain + self.codomain):
            raise ValueError("all cardinalities must be >= 1")

    @property
    def parties(self) -> int:
        return len(self.domain)

    @cached_property
    def n_domain(self) -> int:
        return product_size(self.domain)

    @cached_property
    def n_codomain(self) -> int:
        return product_size(self.codomain)

    @cached_property
    def n_functions(self) -> int:
        return self.n_codomain ** self.n_domain

    @cached_property
    def domain_tuples(self) -> List[Tuple[int, ...]]:
        return list(itertools.product(*[range(d) for d in self.domain]))

    @cached_property
    def codomain_tuples(self) -> List[Tuple[int, ...]]:
        return list(itertools.product(*[range(d) for d in self.codomain]))

    @cached_property
    def codomain_digits(self) -> np.ndarray:
        """Matriz (n_codomain, N): componente k de cada tupla imagen."""
        return np.array(self.codomain_tuples, dtype=np.int64).reshape(self.n_codomain, self.parties)

    def domain_index(self, values: Sequence[int]) -> int:
        return sum(v * s for v, s in zip(values, mixed_radix_strides(self.domain)))

    def codomain_index(self, values: Sequence[int]) -> int:
        return sum(v * s for v, s in zip(values, mixed_radix_strides(self.codomain)))

    def encode(self, table: Sequence[int]) -> int:
        code = 0
        for s in range(self.n_domain - 1, -1, -1):
            code = code * self.n_codomain + int(table[s])
        return code

    def decode(self, code: int) -> Tuple[int, ...]:
        table = []
        for _ in range(self.n_domain):
            code, digit = divmod(code, self.n_codomain)
            table.append(digit)
        return tuple(table)

    def decode_codes(self, codes: np.ndarray) -> np.ndarray:
        """Códigos (B,) → tablas (B, n_domain) de índices imagen."""
        codes = np.asarray(codes, dtype=np.int64)
        digits = np.empty((codes.shape[0], self.n_domain), dtype=np.int64)
        rest = codes.copy()
        for s in range(self.n_domain):
            digits[:, s] = rest % self.n_codomain
            rest //= self.n_codomain
        return digits

    def encode_tables(self, tables: np.ndarray) -> np.ndarray:
        tables = np.asarray(tables, dtype=np.int64)
        codes = np.zeros(tables.shape[0], dtype=np.int64)
        for s in range(self.n_domain - 1, -1, -1):
            codes = codes * self.n_codomain + tables[:, s]
        return codes

    def party_arrays(self, tables: np.ndarray) -> List[np.ndarray]:
        """
        Tablas (B, n_domain) → lista por parte l de arrays (B, *domain) con la
        componente l de la imagen; el eje 1+k corresponde a la entrada de la parte k.
        """
        components = self.codomain_digits[tables]
        shape = (tables.shape[0],) + tuple(self.domain)
        return [components[:, :, l].reshape(shape) for l in range(self.parties)]


def dependence_mask(array: np.ndarray, axis: int) -> np.ndarray:
    """(B, ...) → (B,) bool: el array varía a lo largo de `axis`."""
    reference = np.take(array, [0], axis=axis)
    return (array != reference).reshape(array.shape[0], -1).any(axis=1)


def signalling_edge_masks(space: FunctionSpace, tables: np.ndarray) -> np.ndarray:
    """Máscara de aristas (bit k*N + l para k→l) de cada tabla del lote."""
    arrays = space.party_arrays(tables)
    n = space.parties
    masks = np.zeros(tables.shape[0], dtype=np.int64)
    for k in range(n):
        for l in range(n):
            if k == l:
                continue
            masks |= dependence_mask(arrays[l], 1 + k).astype(np.int64) << (k * n + l)
    return masks


# =============================================================================
# ESCENARIO
# =============================================================================

@dataclass(frozen=True)
class Scenario:
    """Escenario correlacional (N, M_k, D_k)."""
    settings: Tuple[int, ...]
    outcomes: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "settings", tuple(int(m) for m in self.settings))
        object.__setattr__(self, "outcomes", tuple(int(d) for d in self.outcomes))
        if len(self.settings) != len(self.outcomes) or not self.settings:
            raise ValueError("settings and outcomes need one entry per party (N >= 1)")
        if any(c < 1 for c in self.settings + self.outcomes):
            raise ValueError("all cardinalities must be >= 1")

    @classmethod
    def uniform(cls, parties: int, settings: int, outcomes: int) -> "Scenario":
        return cls((settings,) * parties, (outcomes,) * parties)

    @property
    def parties(self) -> int:
        return len(self.settings)

    @cached_property
    def space(self) -> FunctionSpace:
        return FunctionSpace(self.settings, self.outcomes)

    @property
    def n_settings(self) -> int:
        return self.space.n_domain

    @property
    def n_outcomes(self) -> int:
        return self.space.n_codomain

    @property
    def n_vertices(self) -> int:
        return self.space.n_functions

    @property
    def key(self) -> str:
        if len(set(self.settings)) == 1 and len(set(self.outcomes)) == 1:
            return f"{self.parties}-{self.settings[0]}-{self.outcomes[0]}"
        return "M{}_D{}".format(".".join(map(str, self.settings)), ".".join(map(str, self.outcomes)))

    def to_json(self) -> Dict[str, Any]:
        return {"settings": list(self.settings), "outcomes": list(self.outcomes)}

    @classmethod
    def from_json(cls, doc: Dict[str, Any]) -> "Scenario":
        return cls(tuple(doc["settings"]), tuple(doc["outcomes"]))


# =============================================================================
# CORRELACIONES
# =============================================================================

@dataclass(frozen=True, eq=False)
class Correlation:
    """Tabla estocástica por columnas p(x⃗|a⃗); inmutable tras construirse."""
    scenario: Scenario
    table: np.ndarray
    mode: NumericMode = NumericMode.RATIONAL
    epsilon: float = NUMERIC_EPSILON

    def __post_init__(self):
        table = to_array(self.table, self.mode) if not _matches_mode(self.table, self.mode) else self.table.copy()
        expected = (self.scenario.n_outcomes, self.scenario.n_settings)
        if table.shape != expected:
            raise InvalidCorrelationError(f"table shape {table.shape} != {expected}")
        for value in table.reshape(-1):
            if is_negative(value, self.mode, self.epsilon):
                raise InvalidCorrelationError(f"negative entry {value}")
        for a, total in enumerate(table.sum(axis=0)):
            if not approx_equal(total, Fraction(1) if self.mode is NumericMode.RATIONAL else 1.0, self.mode, self.epsilon):
                raise InvalidCorrelationError(f"column {a} sums to {total}, not 1")
        table.flags.writeable = False
        object.__setattr__(self, "table", table)

    def entry(self, outcome: Sequence[int], setting: Sequence[int]) -> Number:
        space = self.scenario.space
        return self.table[space.codomain_index(outcome), space.domain_index(setting)]

    def vector(self) -> List[Number]:
        """Entradas en orden fila-mayor (x⃗, a⃗) → x*n_settings + a."""
        return list(self.table.reshape(-1))

    def as_mode(self, mode: NumericMode) -> "Correlation":
        if mode is self.mode:
            return self
        return Correlation(self.scenario, to_array(self.table.tolist(), mode), mode, self.epsilon)

    def to_json(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario.to_json(),
            "numeric": self.mode.value,
            "table": [[format_number(v) for v in row] for row in self.table.tolist()],
        }

    @classmethod
    def from_json(cls, doc: Dict[str, Any]) -> "Correlation":
        mode = NumericMode(doc.get("numeric", "rational"))
        scenario = Scenario.from_json(doc["scenario"])
        return cls(scenario, to_array(doc["table"], mode), mode)


def _matches_mode(table, mode: NumericMode) -> bool:
    if not isinstance(table, np.ndarray):
        return False
    if mode is NumericMode.DOUBLE:
        return table.dtype == np.float64
    return table.dtype == object and all(isinstance(v, Fraction) for v in table.reshape(-1))


# =============================================================================
# VÉRTICES
# =============================================================================

@dataclass(frozen=True)
class Vertex:
    """Vértice determinista guardado como tabla f: índice de a⃗ → índice de x⃗."""
    scenario: Scenario
    f: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(int(x) for x in self.f))
        if len(self.f) != self.scenario.n_settings:
            raise ValueError(f"function table needs {self.scenario.n_settings} entries, got {len(self.f)}")
        if any(x < 0 or x >= self.scenario.n_outcomes for x in self.f):
            raise ValueError("function table entry outside the outcome range")

    @classmethod
    def from_code(cls, scenario: Scenario, code: int) -> "Vertex":
        return cls(scenario, scenario.space.decode(int(code)))

    @classmethod
    def from_callable(cls, scenario: Scenario, fn: Callable[[Tuple[int, ...]], Sequence[int]]) -> "Vertex":
        space = scenario.space
        return cls(scenario, tuple(space.codomain_index(fn(a)) for a in space.domain_tuples))

    @cached_property
    def code(self) -> int:
        return self.scenario.space.encode(self.f)

    def outcome(self, setting: Sequence[int]) -> Tuple[int, ...]:
        space = self.scenario.space
        return space.codomain_tuples[self.f[space.domain_index(setting)]]

    def component(self, party: int, setting: Sequence[int]) -> int:
        return self.outcome(setting)[party]

    def party_arrays(self) -> List[np.ndarray]:
        """Por parte l, array con forma (M_1..M_N) de f_l."""
        arrays = self.scenario.space.party_arrays(np.array([self.f], dtype=np.int64))
        return [arr[0] for arr in arrays]

    def to_json(self) -> Dict[str, Any]:
        return {"scenario": self.scenario.to_json(), "f": list(self.f)}

    @classmethod
    def from_json(cls, doc: Dict[str, Any]) -> "Vertex":
        return cls(Scenario.from_json(doc["scenario"]), tuple(doc["f"]))


def vertex_to_correlation(v: Vertex) -> Correlation:
    """Entrada (x⃗,a⃗) = 1 si y solo si x⃗ = f(a⃗)."""
    table = zeros((v.scenario.n_outcomes, v.scenario.n_settings), NumericMode.RATIONAL)
    for a, x in enumerate(v.f):
        table[x, a] = Fraction(1)
    return Correlation(v.scenario, table, NumericMode.RATIONAL)


def correlation_to_vertex(p: Correlation) -> Optional[Vertex]:
    """Inversa de vertex_to_correlation; None si la tabla no es {0,1}."""
    f = []
    for a in range(p.scenario.n_settings):
        column = p.table[:, a]
        ones = [x for x, value in enumerate(column) if approx_equal(value, 1, p.mode, p.epsilon)]
        if len(ones) != 1:
            return None
        f.append(ones[0])
    return Vertex(p.scenario, tuple(f))


def signalling_graph(v: Vertex) -> Digraph:
    """Arista k→l si cambiar solo a_k puede cambiar f_l."""
    arrays = v.party_arrays()
    n = v.scenario.parties
    edges = set()
    for k in range(n):
        for l in range(n):
            if k != l and bool((arrays[l] != np.take(arrays[l], [0], axis=k)).any()):
                edges.add((k, l))
    return Digraph(n, frozenset(edges))


# =============================================================================
# MEZCLAS Y MARGINALES
# =============================================================================

def mix(items: Sequence[Tuple[Number, Correlation]]) -> Correlation:
    """Combinación convexa entrada a entrada."""
    if not items:
        raise InvalidCorrelationError("empty mixture")
    scenario = items[0][1].scenario
    for _, p in items:
        if p.scenario != scenario:
            raise ScenarioMismatchError(f"cannot mix {p.scenario} with {scenario}")
    modes = [p.mode for _, p in items]
    modes += [NumericMode.DOUBLE for w, _ in items if isinstance(w, float)]
    mode = promote(*modes)
    weights = [as_number(w, mode) for w, _ in items]
    eps = max(p.epsilon for _, p in items)
    if any(is_negative(w, mode, eps) for w in weights):
        raise InvalidCorrelationError("mixture weights must be non-negative")
    total = sum(weights, Fraction(0) if mode is NumericMode.RATIONAL else 0.0)
    if not approx_equal(total, 1, mode, eps):
        raise InvalidCorrelationError(f"mixture weights sum to {total}, not 1")
    table = zeros((scenario.n_outcomes, scenario.n_settings), mode)
    for w, (_, p) in zip(weights, items):
        table = table + w * p.as_mode(mode).table
    return Correlation(scenario, table, mode, eps)


def marginal(p: Correlation, party: int) -> np.ndarray:
    """Tabla p(x_k|a⃗) con forma (D_k, n_settings)."""
    s = p.scenario
    if not 0 <= party < s.parties:
        raise IndexError(f"party {party} outside 0..{s.parties - 1}")
    shaped = p.table.reshape(tuple(s.outcomes) + (s.n_settings,))
    others = tuple(k for k in range(s.parties) if k != party)
    return shaped.sum(axis=others) if others else shaped


def is_non_signalling(p: Correlation) -> bool:
    """Cada marginal p(x_k|a⃗) depende solo de a_k."""
    s = p.scenario
    for k in range(s.parties):
        shaped = marginal(p, k).reshape((s.outcomes[k],) + tuple(s.settings))
        for j in range(s.parties):
            if j == k:
                continue
            reference = np.take(shaped, [0], axis=1 + j)
            diff = shaped - reference
            if any(not approx_equal(d, 0, p.mode, p.epsilon) for d in diff.reshape(-1)):
                return False
    return True


# =============================================================================
# CORRELACIONES DE REFERENCIA
# =============================================================================

BIPARTITE_BINARY = Scenario.uniform(2, 2, 2)
TRIPARTITE_BINARY = Scenario.uniform(3, 2, 2)


def pr_box() -> Correlation:
    """Caja PR: x1 ⊕ x2 = a1·a2 con probabilidad 1/2 por resultado."""
    s = BIPARTITE_BINARY
    table = zeros((4, 4), NumericMode.RATIONAL)
    for a1, a2 in s.space.domain_tuples:
        for x1, x2 in s.space.codomain_tuples:
            if (x1 ^ x2) == (a1 & a2):
                table[s.space.codomain_index((x1, x2)), s.space.domain_index((a1, a2))] = Fraction(1, 2)
    return Correlation(s, table)


def qform_correlation(q: Number) -> Correlation:
    """Familia de un parámetro del juego GYNI (filas x⃗ = 00..11, columnas a⃗ = 00..11)."""
    mode = NumericMode.DOUBLE if isinstance(q, float) else NumericMode.RATIONAL
    q = as_number(q, mode)
    one = as_number(1, mode)
    half = one / 2
    rows = [
        [0, 0, 0, q * half],
        [0, 0, q, (one - q) * half],
        [0, q, 0, (one - q) * half],
        [one, one - q, one - q, q * half],
    ]
    return Correlation(BIPARTITE_BINARY, to_array(rows, mode), mode)


def quantile_decomposition(p: Correlation) -> List[Tuple[Number, Vertex]]:
    """
    Descomposición factible de cualquier tabla estocástica en vértices.

    Para cada umbral t ∈ [0,1), f(a⃗) es el primer x⃗ cuya acumulada supera t;
    los puntos de corte son las acumuladas de todas las columnas.
    """
    mode = p.mode
    n_out, n_set = p.table.shape
    cumulative = [list(itertools.accumulate(p.table[:, a].tolist())) for a in range(n_set)]
    zero, one = as_number(0, mode), as_number(1, mode)
    cuts = sorted({zero, one} | {c for col in cumulative for c in col if zero < c < one})
    if mode is NumericMode.DOUBLE:
        merged: List[float] = []
        for c in cuts:
            if not merged or c - merged[-1] > p.epsilon:
                merged.append(c)
        merged[-1] = 1.0
        cuts = merged
    pieces: Dict[Tuple[int, ...], Number] = {}
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        f = []
        for a in range(n_set):
            chosen = next((x for x, c in enumerate(cumulative[a]) if c > lo + (p.epsilon if mode is NumericMode.DOUBLE else 0)), None)
            if chosen is None:
                chosen = max(x for x in range(n_out) if p.table[x, a] > 0)
            f.append(chosen)
        key = tuple(f)
        pieces[key] = pieces.get(key, zero) + (hi - lo)
    return [(w, Vertex(p.scenario, key)) for key, w in pieces.items()]
