# controllers/antinomy.py
"""
Consistencia determinista de vértices, pertenencia al politopo DC y
robustez de la antinomia.

Un vértice f es clásico si y solo si su realización fiel canónica
g_k(a⃗∖k) = clase de discriminabilidad de a⃗∖k es una función de proceso.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from common.errors import CapExceededError
from common.numeric import Number, NumericMode, format_number
from config import CHUNK_SIZE, ENUMERATION_CAP, INTERVENTION_CAP
from controllers import census_coordinator, flag_cache
from controllers.causality import causal_mask
from controllers.classical_process import (
    ProcessDims, ProcessFunctionCheck, QuasiProcessFunction, afbw_family,
    fixed_point_count, is_process_function,
)
from controllers.digraph import has_siblings_on_cycles
from controllers.polytope import (
    CodePool, HullResult, MinCostResult, hull_membership, min_cost_decomposition,
)
from controllers.scenario_core import (
    Correlation, FunctionSpace, Scenario, Vertex, mix, signalling_graph, vertex_to_correlation,
)

logger = logging.getLogger(__name__)


# =============================================================================
# REALIZACIÓN FIEL
# =============================================================================

def _remote_tuples(settings: Sequence[int], party: int) -> List[Tuple[int, ...]]:
    return list(itertools.product(*[range(m) for j, m in enumerate(settings) if j != party]))


def _with_party(remote: Sequence[int], party: int, value: int) -> Tuple[int, ...]:
    return tuple(remote[:party]) + (value,) + tuple(remote[party:])


@dataclass(frozen=True)
class FaithfulRealization:
    """
    g_k: a⃗∖k → B_k (clases de discriminabilidad) y f′_k: A_k × B_k → X_k.

    `classes[k][b]` lista los a⃗∖k indistinguibles de la clase b;
    `g[k][r]` es la clase del índice r de a⃗∖k; `f_prime[k][a_k][b]` el outcome.
    """
    scenario: Scenario
    g: Tuple[Tuple[int, ...], ...]
    sizes: Tuple[int, ...]
    f_prime: Tuple[Tuple[Tuple[int, ...], ...], ...]
    classes: Tuple[Tuple[Tuple[int, ...], ...], ...]

    def environment(self, settings: Sequence[int]) -> Tuple[int, ...]:
        """b⃗ = g(a⃗)."""
        s = self.scenario
        out = []
        for k in range(s.parties):
            remote = tuple(v for j, v in enumerate(settings) if j != k)
            out.append(self.g[k][_remote_index(s.settings, k, remote)])
        return tuple(out)

    def as_process_function(self) -> QuasiProcessFunction:
        """ω: o⃗ = a⃗ ↦ i⃗ = g(a⃗), con |I_k| = |B_k| y |O_k| = M_k."""
        dims = ProcessDims(self.sizes, self.scenario.settings)
        return QuasiProcessFunction.from_callable(dims, self.environment)

    def reproduces(self, v: Vertex) -> bool:
        s = self.scenario
        for a in s.space.domain_tuples:
            b = self.environment(a)
            x = v.outcome(a)
            if any(self.f_prime[k][a[k]][b[k]] != x[k] for k in range(s.parties)):
                return False
        return True

    def to_json(self) -> Dict[str, Any]:
        return {
            "sizes": list(self.sizes),
            "g": [list(gk) for gk in self.g],
            "f_prime": [[list(row) for row in fk] for fk in self.f_prime],
            "classes": [[list(map(list, block)) for block in ck] for ck in self.classes],
        }


def _remote_index(settings: Sequence[int], party: int, remote: Sequence[int]) -> int:
    dims = [m for j, m in enumerate(settings) if j != party]
    index = 0
    for value, d in zip(remote, dims):
        index = index * d + value
    return index


def faithful_candidate(v: Vertex) -> FaithfulRealization:
    """Particiones de discriminabilidad: a⃗∖k ~ a⃗′∖k si f_k coincide para todo a_k."""
    s = v.scenario
    g, sizes, f_prime, classes = [], [], [], []
    for k in range(s.parties):
        remotes = _remote_tuples(s.settings, k)
        labels: Dict[Tuple[int, ...], int] = {}
        assignment, blocks, representatives = [], [], []
        for r in remotes:
            column = tuple(v.component(k, _with_party(r, k, a_k)) for a_k in range(s.settings[k]))
            if column not in labels:
                labels[column] = len(labels)
                blocks.append([])
                representatives.append(column)
            assignment.append(labels[column])
            blocks[labels[column]].append(r)
        g.append(tuple(assignment))
        sizes.append(len(labels))
        f_prime.append(tuple(tuple(col[a_k] for col in representatives) for a_k in range(s.settings[k])))
        classes.append(tuple(tuple(block) for block in blocks))
    return FaithfulRealization(s, tuple(g), tuple(sizes), tuple(f_prime), tuple(classes))


# =============================================================================
# VEREDICTOS
# =============================================================================

REASON_FIXED_POINT = "fixed-point"
REASON_SIBLINGS = "siblings-on-cycles"


@dataclass(frozen=True)
class AntinomyVerdict:
    """CLASSICAL con realización certificada, o ANTINOMIC con h que falla."""
    classical: bool
    realization: FaithfulRealization
    check: Optional[ProcessFunctionCheck] = None
    reason: str = REASON_FIXED_POINT

    @property
    def label(self) -> str:
        return "CLASSICAL" if self.classical else "ANTINOMIC"

    def verify(self, v: Vertex) -> bool:
        """Recomprueba el certificado desde el vértice."""
        if not self.realization.reproduces(v):
            return False
        if self.classical:
            return is_process_function(self.realization.as_process_function()).valid
        if self.reason == REASON_SIBLINGS:
            return not has_siblings_on_cycles(signalling_graph(v))
        g = self.realization.as_process_function()
        return fixed_point_count(g, self.check.intervention) == self.check.fixed_points != 1

    def to_json(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {"verdict": self.label, "reason": self.reason, "realization": self.realization.to_json()}
        if self.check is not None and not self.check.valid:
            doc["intervention"] = [list(h) for h in self.check.intervention]
            doc["fixed_points"] = self.check.fixed_points
        return doc


def is_dc_vertex(v: Vertex, fast_path: bool = True, cap: int = INTERVENTION_CAP) -> AntinomyVerdict:
    """Veredicto de consistencia determinista de un vértice."""
    realization = faithful_candidate(v)
    if fast_path and not has_siblings_on_cycles(signalling_graph(v)):
        return AntinomyVerdict(False, realization, reason=REASON_SIBLINGS)
    check = is_process_function(realization.as_process_function(), cap)
    return AntinomyVerdict(check.valid, realization, check)


# =============================================================================
# VEREDICTOS VECTORIZADOS (FIRMA DE PARTICIONES)
# =============================================================================

def _party_partitions(space: FunctionSpace, tables: np.ndarray) -> List[np.ndarray]:
    """
    Por parte k, etiqueta de crecimiento restringido de la partición de a⃗∖k
    inducida por f_k, empaquetada como entero.
    """
    arrays = space.party_arrays(tables)
    batch = tables.shape[0]
    n = space.parties
    out = []
    for k in range(n):
        moved = np.moveaxis(arrays[k], 1 + k, -1)
        columns = moved.reshape(batch, -1, space.domain[k])
        n_remote = columns.shape[1]
        weights = space.codomain[k] ** np.arange(space.domain[k], dtype=np.int64)
        column_codes = (columns.astype(np.int64) * weights).sum(axis=2)
        labels = np.zeros((batch, n_remote), dtype=np.int64)
        next_label = np.ones(batch, dtype=np.int64)
        for j in range(1, n_remote):
            found = np.zeros(batch, dtype=bool)
            label = np.zeros(batch, dtype=np.int64)
            for prev in range(j):
                match = (column_codes[:, prev] == column_codes[:, j]) & ~found
                label[match] = labels[match, prev]
                found |= match
            label[~found] = next_label[~found]
            next_label[~found] += 1
            labels[:, j] = label
        packed = np.zeros(batch, dtype=np.int64)
        for j in range(n_remote):
            packed = packed * n_remote + labels[:, j]
        out.append(packed)
    return out


def _unpack_partition(packed: int, n_remote: int) -> Tuple[int, ...]:
    labels = []
    for _ in range(n_remote):
        packed, label = divmod(packed, n_remote)
        labels.append(label)
    return tuple(reversed(labels))


@lru_cache(maxsize=1 << 16)
def _partition_verdict(settings: Tuple[int, ...], partitions: Tuple[Tuple[int, ...], ...]) -> bool:
    """True si la g definida por las particiones es función de proceso."""
    sizes = tuple(max(p) + 1 for p in partitions)
    dims = ProcessDims(sizes, settings)

    def environment(a: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(
            partitions[k][_remote_index(settings, k, tuple(v for j, v in enumerate(a) if j != k))]
            for k in range(len(settings))
        )

    return is_process_function(QuasiProcessFunction.from_callable(dims, environment)).valid


def antinomic_mask(space: FunctionSpace, codes: np.ndarray) -> np.ndarray:
    """Máscara de vértices antinómicos; el veredicto solo depende de las particiones."""
    if len(codes) == 0:
        return np.zeros(0, dtype=bool)
    tables = space.decode_codes(codes)
    packed = np.stack(_party_partitions(space, tables), axis=1)
    unique, inverse = np.unique(packed, axis=0, return_inverse=True)
    settings = tuple(space.domain)
    remote_counts = [space.n_domain // m for m in settings]
    verdicts = np.array([
        not _partition_verdict(
            settings, tuple(_unpack_partition(int(row[k]), remote_counts[k]) for k in range(space.parties))
        )
        for row in unique
    ], dtype=bool)
    return verdicts[np.asarray(inverse).reshape(-1)]


def _antinomic_chunk(settings: Tuple[int, ...], outcomes: Tuple[int, ...], lo: int, hi: int) -> np.ndarray:
    space = FunctionSpace(settings, outcomes)
    return antinomic_mask(space, np.arange(lo, hi, dtype=np.int64))


def antinomic_flags(s: Scenario, cap: int = ENUMERATION_CAP, jobs: Optional[int] = None,
                    use_cache: bool = True) -> np.ndarray:
    """Máscara antinómica sobre todos los códigos del escenario (persistida)."""
    if s.n_vertices > cap:
        raise CapExceededError(f"scenario {s.key} has {s.n_vertices:,} vertices, above the cap {cap:,}")

    def compute() -> np.ndarray:
        parts = census_coordinator.map_chunks(
            _antinomic_chunk, (s.settings, s.outcomes), s.n_vertices, jobs, CHUNK_SIZE, f"antinomic flags {s.key}"
        )
        return np.concatenate(parts)

    return flag_cache.cached_flags("antinomic", s.space, compute, use_cache=use_cache and s.n_vertices > 1 << 16)


# =============================================================================
# PERTENENCIA AL POLITOPO DC
# =============================================================================

@dataclass(frozen=True)
class DCMembership:
    member: bool
    decomposition: Tuple[Tuple[Number, Vertex], ...] = ()
    separating: Optional[List[List[Number]]] = None
    hull: Optional[HullResult] = None

    def to_json(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {"member": self.member}
        if self.member:
            doc["decomposition"] = [{"weight": format_number(w), "f": list(v.f)} for w, v in self.decomposition]
        else:
            doc["separating"] = [[format_number(x) for x in row] for row in self.separating]
        return doc


def classical_pool(s: Scenario, cap: int = ENUMERATION_CAP, jobs: Optional[int] = None) -> CodePool:
    flags = antinomic_flags(s, cap, jobs)
    return CodePool(s.space, allowed=~flags)


def dc_membership(p: Correlation, cap: int = ENUMERATION_CAP, jobs: Optional[int] = None) -> DCMembership:
    """Pertenencia a la envoltura de los vértices clásicos."""
    s = p.scenario
    result = hull_membership(p, classical_pool(s, cap, jobs))
    if result.member:
        return DCMembership(True, tuple((w, Vertex.from_code(s, c)) for w, c in result.weights), hull=result)
    return DCMembership(False, separating=result.farkas_matrix(s.space), hull=result)


# =============================================================================
# ROBUSTEZ DE LA ANTINOMIA
# =============================================================================

@dataclass(frozen=True)
class RobustnessResult:
    """r_a mínimo, descomposición óptima con marcas antinómicas y duales."""
    value: Number
    decomposition: Tuple[Tuple[Number, Vertex, bool], ...]
    duals: Tuple[Number, ...]
    mode: NumericMode
    certified: bool
    pool_size: int
    rounds: int

    @property
    def antinomic_support(self) -> List[Vertex]:
        return [v for _, v, flagged in self.decomposition if flagged]

    def reproduces(self, p: Correlation, tolerance: float) -> bool:
        rebuilt = mix([(w, vertex_to_correlation(v).as_mode(self.mode)) for w, v, _ in self.decomposition])
        return all(abs(float(a) - float(b)) <= tolerance for a, b in zip(rebuilt.vector(), p.vector()))

    def to_json(self) -> Dict[str, Any]:
        return {
            "value": format_number(self.value),
            "value_float": float(self.value),
            "numeric": self.mode.value,
            "certified": self.certified,
            "pool_size": self.pool_size,
            "rounds": self.rounds,
            "decomposition": [
                {"weight": format_number(w), "f": list(v.f), "antinomic": flagged}
                for w, v, flagged in self.decomposition
            ],
            "duals": [format_number(y) for y in self.duals],
        }


def robustness_pool(s: Scenario, codes: Optional[Sequence[int]] = None,
                    cap: int = ENUMERATION_CAP, jobs: Optional[int] = None) -> CodePool:
    """Pool completo con marcas antinómicas, o restringido a códigos dados."""
    if codes is None:
        return CodePool.full(s.space, flagged=antinomic_flags(s, cap, jobs))
    codes = np.unique(np.asarray(list(codes), dtype=np.int64))
    return CodePool(s.space, codes=codes, flagged=antinomic_mask(s.space, codes))


def robustness_of_antinomy(p: Correlation, pool: Optional[CodePool] = None,
                           cap: int = ENUMERATION_CAP, jobs: Optional[int] = None) -> RobustnessResult:
    """min Σ_{v antinómico} q_v sujeto a Σ q_v v = p, q ≥ 0."""
    s = p.scenario
    pool = pool if pool is not None else robustness_pool(s, cap=cap, jobs=jobs)
    result: MinCostResult = min_cost_decomposition(p, pool)
    decomposition = tuple((w, Vertex.from_code(s, code), flagged) for w, code, flagged in result.weights)
    logger.info(f"🎯 Robustness of antinomy: {float(result.objective):.9f} ({len(decomposition)} vertices)")
    return RobustnessResult(
        result.objective, decomposition, result.duals, result.mode, result.certified, pool.size, result.rounds
    )


# =============================================================================
# IMÁGENES DE AF/BW
# =============================================================================

def afbw_vertex_images() -> np.ndarray:
    """
    Vértices no causales x_k = f′_k(a_k, ω_k(a⃗)) con ω en la familia AF/BW y
    f′_k: A_k × B_k → X_k arbitraria (códigos ordenados).
    """
    space = FunctionSpace((2, 2, 2), (2, 2, 2))
    settings = np.array(space.domain_tuples, dtype=np.int64)
    # f′_k como tabla de 4 bits indexada por 2·a_k + b_k
    local = np.array(list(itertools.product((0, 1), repeat=4)), dtype=np.int64)
    images = []
    for w in afbw_family():
        env = np.array([w(tuple(a)) for a in settings], dtype=np.int64)
        parts = []
        for k in range(3):
            index = 2 * settings[:, k] + env[:, k]
            parts.append(local[:, index])
        outcome_index = (
            parts[0][:, None, None, :] * 4 + parts[1][None, :, None, :] * 2 + parts[2][None, None, :, :]
        ).reshape(-1, space.n_domain)
        images.append(space.encode_tables(outcome_index))
    codes = np.unique(np.concatenate(images))
    return codes[~causal_mask(space, codes)]
