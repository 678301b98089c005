# controllers/causality.py
"""
Causalidad de vértices deterministas y de correlaciones; censos por clase de
señalización.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from common.errors import CapExceededError
from common.numeric import Number, format_number
from config import CHUNK_SIZE, ENUMERATION_CAP
from controllers import census_coordinator
from controllers.digraph import SignallingClass, canonical_mask, canonical_table
from controllers.polytope import CodePool, HullResult, hull_membership, verify_separation
from controllers.scenario_core import (
    Correlation, FunctionSpace, Scenario, Vertex, dependence_mask, mix,
    signalling_edge_masks, vertex_to_correlation,
)

logger = logging.getLogger(__name__)


# =============================================================================
# VÉRTICES: VERSIÓN ESCALAR (MEMOIZADA)
# =============================================================================

def _local_only(array: np.ndarray, axis: int) -> bool:
    """El array (forma por partes) solo depende del eje `axis`."""
    for other in range(array.ndim):
        if other != axis and bool((array != np.take(array, [0], axis=other)).any()):
            return False
    return True


@lru_cache(maxsize=1 << 20)
def _is_causal_tables(shape: Tuple[int, ...], tables: Tuple[Tuple[int, ...], ...]) -> bool:
    n = len(shape)
    if n <= 1:
        return True
    arrays = [np.array(t, dtype=np.int64).reshape(shape) for t in tables]
    for k in range(n):
        if not _local_only(arrays[k], k):
            continue
        sub_shape = shape[:k] + shape[k + 1:]
        if all(
            _is_causal_tables(
                sub_shape,
                tuple(tuple(np.take(arrays[l], value, axis=k).reshape(-1).tolist()) for l in range(n) if l != k),
            )
            for value in range(shape[k])
        ):
            return True
    return False


def is_causal_vertex(v: Vertex) -> bool:
    """
    Definición recursiva: existe una parte k con x_k = f_k(a_k) y, para cada
    valor de a_k, la función condicionada sobre las demás partes es causal.
    """
    arrays = v.party_arrays()
    shape = tuple(v.scenario.settings)
    return _is_causal_tables(shape, tuple(tuple(a.reshape(-1).tolist()) for a in arrays))


# =============================================================================
# VÉRTICES: VERSIÓN VECTORIZADA
# =============================================================================

def _batch_causal(arrays: List[np.ndarray]) -> np.ndarray:
    """arrays[l] con forma (B, M_1..M_n) → máscara (B,) de causalidad."""
    batch = arrays[0].shape[0]
    n = len(arrays)
    if n <= 1 or batch == 0:
        return np.ones(batch, dtype=bool)
    result = np.zeros(batch, dtype=bool)
    for k in range(n):
        pending = np.nonzero(~result)[0]
        if len(pending) == 0:
            break
        own = arrays[k][pending]
        local = np.ones(len(pending), dtype=bool)
        for j in range(n):
            if j != k:
                local &= ~dependence_mask(own, 1 + j)
        candidates = pending[local]
        if len(candidates) == 0:
            continue
        ok = np.ones(len(candidates), dtype=bool)
        for value in range(arrays[k].shape[1 + k]):
            alive = np.nonzero(ok)[0]
            if len(alive) == 0:
                break
            rows = candidates[alive]
            rest = [np.take(arrays[l][rows], value, axis=1 + k) for l in range(n) if l != k]
            ok[alive] = _batch_causal(rest)
        result[candidates[ok]] = True
    return result


def causal_mask(space: FunctionSpace, codes: np.ndarray) -> np.ndarray:
    """Máscara de vértices causales para un lote de códigos."""
    tables = space.decode_codes(codes)
    arrays = space.party_arrays(tables)
    if max(space.codomain) < 128:
        arrays = [a.astype(np.int8) for a in arrays]
    return _batch_causal(arrays)


def _causal_chunk(settings: Tuple[int, ...], outcomes: Tuple[int, ...], lo: int, hi: int) -> np.ndarray:
    space = FunctionSpace(settings, outcomes)
    codes = np.arange(lo, hi, dtype=np.int64)
    return codes[causal_mask(space, codes)]


def _check_cap(s: Scenario, cap: int) -> None:
    if s.n_vertices > cap:
        raise CapExceededError(f"scenario {s.key} has {s.n_vertices:,} vertices, above the cap {cap:,}")


@lru_cache(maxsize=8)
def _causal_codes_cached(s: Scenario, cap: int, jobs: Optional[int]) -> np.ndarray:
    _check_cap(s, cap)
    parts = census_coordinator.map_chunks(
        _causal_chunk, (s.settings, s.outcomes), s.n_vertices, jobs, CHUNK_SIZE, f"causal vertices {s.key}"
    )
    codes = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    codes.flags.writeable = False
    return codes


def causal_codes(s: Scenario, cap: int = ENUMERATION_CAP, jobs: Optional[int] = None) -> np.ndarray:
    """Códigos de todos los vértices causales, en orden creciente."""
    return _causal_codes_cached(s, cap, jobs)


def enumerate_causal_vertices(s: Scenario, cap: int = ENUMERATION_CAP, jobs: Optional[int] = None) -> List[Vertex]:
    return [Vertex.from_code(s, int(c)) for c in causal_codes(s, cap, jobs)]


# =============================================================================
# PERTENENCIA AL POLITOPO CAUSAL
# =============================================================================

@dataclass(frozen=True)
class CausalCertificate:
    """Descomposición sobre vértices causales o hiperplano separador."""
    member: bool
    decomposition: Tuple[Tuple[Number, Vertex], ...] = ()
    separating: Optional[List[List[Number]]] = None
    hull: Optional[HullResult] = None

    def verify(self, p: Correlation, cap: int = ENUMERATION_CAP) -> bool:
        if self.member:
            if not all(is_causal_vertex(v) for _, v in self.decomposition):
                return False
            rebuilt = mix([(w, vertex_to_correlation(v).as_mode(p.mode)) for w, v in self.decomposition])
            diff = rebuilt.table - p.table
            return all(abs(float(d)) <= p.epsilon * 10 for d in diff.reshape(-1))
        pool = CodePool(p.scenario.space, codes=causal_codes(p.scenario, cap))
        return verify_separation(p, self.hull, pool)

    def to_json(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {"member": self.member}
        if self.member:
            doc["decomposition"] = [
                {"weight": format_number(w), "f": list(v.f)} for w, v in self.decomposition
            ]
        else:
            doc["separating"] = [[format_number(x) for x in row] for row in self.separating]
        return doc


def causal_membership(p: Correlation, cap: int = ENUMERATION_CAP, jobs: Optional[int] = None) -> CausalCertificate:
    """LP de pertenencia a la envoltura de los vértices causales."""
    s = p.scenario
    pool = CodePool(s.space, codes=causal_codes(s, cap, jobs))
    logger.debug(f"causal membership over {pool.size:,} causal vertices")
    result = hull_membership(p, pool)
    if result.member:
        decomposition = tuple((w, Vertex.from_code(s, code)) for w, code in result.weights)
        return CausalCertificate(True, decomposition, hull=result)
    return CausalCertificate(False, separating=result.farkas_matrix(s.space), hull=result)


# =============================================================================
# CENSOS
# =============================================================================

@dataclass
class ClassCount:
    total: int = 0
    causal: int = 0

    @property
    def noncausal(self) -> int:
        return self.total - self.causal


def _class_keys(space: FunctionSpace, masks: np.ndarray) -> np.ndarray:
    n = space.parties
    if n <= 4:
        return canonical_table(n)[masks]
    unique, inverse = np.unique(masks, return_inverse=True)
    keys = np.array([canonical_mask(n, int(m)) for m in unique], dtype=np.int64)
    return keys[inverse]


def classify_codes(settings: Tuple[int, ...], outcomes: Tuple[int, ...], lo: int, hi: int) -> Dict[int, Tuple[int, int]]:
    """Censo parcial de los códigos [lo, hi): clave canónica → (total, causales)."""
    space = FunctionSpace(settings, outcomes)
    codes = np.arange(lo, hi, dtype=np.int64)
    tables = space.decode_codes(codes)
    keys = _class_keys(space, signalling_edge_masks(space, tables))
    causal = causal_mask(space, codes)
    totals = dict(zip(*np.unique(keys, return_counts=True)))
    causals = dict(zip(*np.unique(keys[causal], return_counts=True)))
    return {int(k): (int(t), int(causals.get(k, 0))) for k, t in totals.items()}


@dataclass
class Census:
    """Recuento por clase de señalización con separación causal / no causal."""
    scenario: Scenario
    counts: Dict[SignallingClass, ClassCount] = field(default_factory=dict)

    def merge(self, partial: Dict[int, Tuple[int, int]]) -> None:
        n = self.scenario.parties
        for key, (total, causal) in partial.items():
            entry = self.counts.setdefault(SignallingClass(n, key), ClassCount())
            entry.total += total
            entry.causal += causal

    @property
    def total(self) -> int:
        return sum(c.total for c in self.counts.values())

    @property
    def causal(self) -> int:
        return sum(c.causal for c in self.counts.values())

    def by_label(self) -> Dict[str, ClassCount]:
        return {cls.label: count for cls, count in sorted(self.counts.items())}

    def rows(self) -> List[Dict[str, Any]]:
        rows = []
        for cls, count in sorted(self.counts.items()):
            rows.append({
                "class_key": cls.key,
                "label": cls.label,
                "edges": cls.digraph().to_json()["edges"],
                "total": count.total,
                "causal": count.causal,
                "noncausal": count.noncausal,
            })
        return rows

    def to_json(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario.to_json(),
            "total": self.total,
            "causal": self.causal,
            "classes": self.rows(),
        }

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(self.rows(), columns=["class_key", "label", "edges", "total", "causal", "noncausal"])
        frame["edges"] = frame["edges"].apply(lambda edges: " ".join(f"{k}->{l}" for k, l in edges))
        return frame


def classify_scenario(
    s: Scenario,
    cap: int = ENUMERATION_CAP,
    jobs: Optional[int] = None,
    chunk: int = CHUNK_SIZE,
) -> Census:
    """Clasifica todos los vértices del escenario por clase y causalidad."""
    _check_cap(s, cap)
    partials = census_coordinator.map_chunks(
        classify_codes, (s.settings, s.outcomes), s.n_vertices, jobs, chunk, f"census {s.key}"
    )
    census = Census(s)
    for partial in partials:
        census.merge(partial)
    logger.info(f"📊 Census {s.key}: {census.total:,} vertices, {census.causal:,} causal, {len(census.counts)} classes")
    return census
