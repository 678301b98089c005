# controllers/polytope.py
"""
Pertenencia a envolturas convexas de vértices deterministas y
descomposiciones de coste mínimo (generación de columnas sobre códigos).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from common.errors import InfeasibleInputError
from common.numeric import Number, NumericMode, as_number, is_positive
from config import CHUNK_SIZE
from controllers.lp_engine import LinearProgram, LPOutcome, LPStatus, solve
from controllers.scenario_core import Correlation, FunctionSpace, quantile_decomposition

logger = logging.getLogger(__name__)

# Pools up to this size are solved as one LP over every column.
DIRECT_LIMIT = 4096
# Columns added per pricing round.
PRICING_BATCH = 64


# =============================================================================
# POOLS DE VÉRTICES
# =============================================================================

@dataclass
class CodePool:
    """
    Conjunto de vértices dado por códigos.

    - `codes`: lista explícita; si es None, el pool es el espacio completo
      filtrado opcionalmente por `allowed` (máscara bool indexada por código).
    - `flagged`: marca de coste 1 (vértices antinómicos en robustez). Se indexa
      igual que el pool: alineada con `codes` o por código en el espacio completo.
    """
    space: FunctionSpace
    codes: Optional[np.ndarray] = None
    allowed: Optional[np.ndarray] = None
    flagged: Optional[np.ndarray] = None
    _lookup: Dict[int, bool] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.codes is not None:
            self.codes = np.asarray(self.codes, dtype=np.int64)
            if self.flagged is not None and len(self.flagged) != len(self.codes):
                raise ValueError("flags must align with the explicit code list")
            flags = self.flagged if self.flagged is not None else np.zeros(len(self.codes), dtype=bool)
            self._lookup = {int(c): bool(f) for c, f in zip(self.codes, flags)}
        elif self.allowed is not None and len(self.allowed) != self.space.n_functions:
            raise ValueError("allowed mask must cover every code of the space")

    @classmethod
    def full(cls, space: FunctionSpace, flagged: Optional[np.ndarray] = None) -> "CodePool":
        return cls(space, flagged=flagged)

    @property
    def size(self) -> int:
        if self.codes is not None:
            return len(self.codes)
        if self.allowed is not None:
            return int(np.count_nonzero(self.allowed))
        return self.space.n_functions

    def contains(self, code: int) -> bool:
        if self.codes is not None:
            return int(code) in self._lookup
        if not 0 <= code < self.space.n_functions:
            return False
        return self.allowed is None or bool(self.allowed[code])

    def is_flagged(self, code: int) -> bool:
        if self.codes is not None:
            return self._lookup.get(int(code), False)
        return self.flagged is not None and bool(self.flagged[code])

    def chunks(self, chunk: int = CHUNK_SIZE) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
        """Genera (códigos, marcas) por bloques."""
        if self.codes is not None:
            flags = self.flagged if self.flagged is not None else np.zeros(len(self.codes), dtype=bool)
            for start in range(0, len(self.codes), chunk):
                yield self.codes[start:start + chunk], np.asarray(flags[start:start + chunk], dtype=bool)
            return
        total = self.space.n_functions
        for start in range(0, total, chunk):
            codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
            if self.allowed is not None:
                codes = codes[self.allowed[start:start + chunk]]
            if self.flagged is not None:
                flags = np.asarray(self.flagged[codes], dtype=bool)
            else:
                flags = np.zeros(len(codes), dtype=bool)
            yield codes, flags

    def all_codes(self) -> np.ndarray:
        return np.concatenate([codes for codes, _ in self.chunks()]) if self.size else np.zeros(0, dtype=np.int64)


def vertex_column(space: FunctionSpace, code: int, mode: NumericMode) -> List[Number]:
    """Vector del vértice en el orden fila-mayor (x⃗, a⃗) de Correlation.vector()."""
    zero, one = as_number(0, mode), as_number(1, mode)
    column = [zero] * (space.n_codomain * space.n_domain)
    for a, x in enumerate(space.decode(int(code))):
        column[x * space.n_domain + a] = one
    return column


def _dual_matrix(space: FunctionSpace, y: Sequence[Number]) -> List[List[Number]]:
    return [list(y[x * space.n_domain:(x + 1) * space.n_domain]) for x in range(space.n_codomain)]


class _Pricer:
    """Puntuación y·col_v = Σ_a Y[f(a), a] sobre bloques de códigos."""

    def __init__(self, space: FunctionSpace, y: Sequence[Number], mode: NumericMode):
        self.space = space
        self.mode = mode
        self.scale = 1
        self.exact = False
        matrix = _dual_matrix(space, y)
        if mode is NumericMode.RATIONAL:
            denominators = [Fraction(v).denominator for row in matrix for v in row]
            scale = 1
            for d in denominators:
                scale = scale * d // math.gcd(scale, d)
            scaled = [[int(Fraction(v) * scale) for v in row] for row in matrix]
            bound = max((abs(v) for row in scaled for v in row), default=0) * space.n_domain
            if bound + scale < 2 ** 62:
                self.table = np.array(scaled, dtype=np.int64)
                self.scale = scale
                self.exact = True
            else:
                logger.warning("⚠️ Dual values too large for exact integer pricing; screening in double")
                self.table = np.array([[float(v) for v in row] for row in matrix], dtype=float)
        else:
            self.table = np.array(matrix, dtype=float)
        self.columns = np.arange(space.n_domain)

    def scores(self, codes: np.ndarray) -> np.ndarray:
        tables = self.space.decode_codes(codes)
        return self.table[tables, self.columns].sum(axis=1)

    def gains(self, codes: np.ndarray, flags: np.ndarray) -> np.ndarray:
        """−(coste reducido) en la escala del pricer: y·col_v − c_v."""
        scores = self.scores(codes)
        return scores - flags.astype(scores.dtype) * (self.scale if self.exact else 1.0)

    def is_positive(self, values: np.ndarray, eps: float) -> np.ndarray:
        if self.exact:
            return values > 0
        return values > eps


def _top(values: np.ndarray, codes: np.ndarray, k: int) -> Tuple[np.ndarray, np.ndarray]:
    if len(values) <= k:
        return values, codes
    idx = np.argpartition(-values, k - 1)[:k]
    return values[idx], codes[idx]


def _select(best: List[Tuple[np.ndarray, np.ndarray]], k: int) -> List[int]:
    """Mejores k por valor descendente; empates por código menor."""
    if not best:
        return []
    values = np.concatenate([v for v, _ in best])
    codes = np.concatenate([c for _, c in best])
    order = np.lexsort((codes, -values.astype(float)))
    return [int(c) for c in codes[order[:k]]]


# =============================================================================
# PERTENENCIA
# =============================================================================

@dataclass(frozen=True)
class HullResult:
    """Miembro con pesos por código, o no miembro con hiperplano separador."""
    member: bool
    weights: Tuple[Tuple[Number, int], ...] = ()
    farkas: Optional[Tuple[Number, ...]] = None
    mode: NumericMode = NumericMode.RATIONAL
    rounds: int = 0
    certified: bool = True

    def farkas_matrix(self, space: FunctionSpace) -> Optional[List[List[Number]]]:
        return None if self.farkas is None else _dual_matrix(space, self.farkas)


def _restricted_lp(p: Correlation, columns: Sequence[int], costs: Sequence[Number]) -> LinearProgram:
    space = p.scenario.space
    vectors = [vertex_column(space, code, p.mode) for code in columns]
    rows = len(p.vector())
    A = [[vectors[j][i] for j in range(len(columns))] for i in range(rows)]
    return LinearProgram.build(A, p.vector(), list(costs), p.mode, p.epsilon)


def hull_membership(p: Correlation, pool: CodePool, max_rounds: int = 500) -> HullResult:
    """
    Decide si p está en la envoltura convexa del pool.

    LP de factibilidad A_R λ = p sobre columnas restringidas; si es infactible,
    el certificado de Farkas y se usa como oráculo de precios: se añaden
    columnas con y·col_v > 0 hasta que ninguna lo cumple (no miembro) o el LP
    restringido es factible (miembro).
    """
    space = p.scenario.space
    if pool.size <= DIRECT_LIMIT:
        columns = [int(c) for c in pool.all_codes()]
    else:
        columns = [int(v.code) for _, v in quantile_decomposition(p) if pool.contains(v.code)]
        if not columns:
            columns = [int(next(codes for codes, _ in pool.chunks() if len(codes))[0])]
    seen = set(columns)
    rounds = 0
    certified = True
    while True:
        rounds += 1
        lp = _restricted_lp(p, columns, [0] * len(columns))
        outcome = solve(lp)
        if outcome.status is LPStatus.OPTIMAL:
            weights = tuple((w, code) for w, code in zip(outcome.x, columns) if is_positive(w, p.mode, p.epsilon))
            logger.debug(f"hull membership: member after {rounds} rounds, {len(columns)} columns")
            return HullResult(True, weights, mode=p.mode, rounds=rounds)
        if pool.size <= DIRECT_LIMIT:
            return HullResult(False, farkas=outcome.farkas, mode=p.mode, rounds=rounds)
        pricer = _Pricer(space, outcome.farkas, p.mode)
        certified = certified and (pricer.exact or p.mode is NumericMode.DOUBLE)
        best: List[Tuple[np.ndarray, np.ndarray]] = []
        for codes, _ in pool.chunks():
            if len(codes) == 0:
                continue
            scores = pricer.scores(codes)
            keep = pricer.is_positive(scores, p.epsilon)
            if keep.any():
                best.append(_top(scores[keep], codes[keep], PRICING_BATCH))
        fresh = [c for c in _select(best, PRICING_BATCH * 2) if c not in seen][:PRICING_BATCH]
        if not fresh:
            logger.debug(f"hull membership: separated after {rounds} rounds")
            return HullResult(False, farkas=outcome.farkas, mode=p.mode, rounds=rounds, certified=certified)
        if rounds >= max_rounds:
            raise RuntimeError(f"column generation did not converge in {max_rounds} rounds")
        columns.extend(fresh)
        seen.update(fresh)


def verify_separation(p: Correlation, result: HullResult, pool: CodePool) -> bool:
    """y·b > 0 y y·col_v ≤ 0 para todos los vértices del pool (exhaustivo)."""
    if result.member or result.farkas is None:
        return False
    y = result.farkas
    if not is_positive(sum((a * b for a, b in zip(y, p.vector())), as_number(0, p.mode)), p.mode, p.epsilon):
        return False
    pricer = _Pricer(p.scenario.space, y, p.mode)
    for codes, _ in pool.chunks():
        if len(codes) and pricer.is_positive(pricer.scores(codes), p.epsilon).any():
            return False
    return True


# =============================================================================
# DESCOMPOSICIÓN DE COSTE MÍNIMO
# =============================================================================

@dataclass(frozen=True)
class MinCostResult:
    objective: Number
    weights: Tuple[Tuple[Number, int, bool], ...]
    duals: Tuple[Number, ...]
    mode: NumericMode
    rounds: int
    certified: bool
    lp_outcome: Optional[LPOutcome] = None


def min_cost_decomposition(p: Correlation, pool: CodePool, max_rounds: int = 500) -> MinCostResult:
    """
    min Σ c_v q_v  s.a.  Σ q_v v = p, q ≥ 0, con c_v = 1 en vértices marcados.

    Pools pequeños: LP directo. Pools grandes: columnas iniciales de la
    descomposición por cuantiles y precios por coste reducido
    c_v − y·col_v < 0.
    """
    space = p.scenario.space
    mode = p.mode
    one, zero = as_number(1, mode), as_number(0, mode)
    if pool.size <= DIRECT_LIMIT:
        columns = [int(c) for c in pool.all_codes()]
    else:
        start = [int(v.code) for _, v in quantile_decomposition(p)]
        columns = [c for c in start if pool.contains(c)]
        if len(columns) < len(start):
            # fase 1: base factible dentro del pool por generación de columnas
            phase_one = hull_membership(p, pool, max_rounds)
            if not phase_one.member:
                raise InfeasibleInputError("input is not in the hull of the pool")
            columns.extend(int(code) for _, code in phase_one.weights if int(code) not in columns)
    seen = set(columns)
    rounds = 0
    certified = True
    while True:
        rounds += 1
        costs = [one if pool.is_flagged(c) else zero for c in columns]
        lp = _restricted_lp(p, columns, costs)
        outcome = solve(lp)
        if outcome.status is not LPStatus.OPTIMAL:
            raise InfeasibleInputError(f"decomposition LP is {outcome.status.value}; input is not in the hull")
        if pool.size <= DIRECT_LIMIT:
            break
        pricer = _Pricer(space, outcome.y, mode)
        certified = certified and (pricer.exact or mode is NumericMode.DOUBLE)
        best: List[Tuple[np.ndarray, np.ndarray]] = []
        for codes, flags in pool.chunks():
            if len(codes) == 0:
                continue
            gain = pricer.gains(codes, flags)
            keep = pricer.is_positive(gain, p.epsilon)
            if keep.any():
                best.append(_top(gain[keep], codes[keep], PRICING_BATCH))
        fresh = [c for c in _select(best, PRICING_BATCH * 2) if c not in seen][:PRICING_BATCH]
        if not fresh:
            break
        if rounds >= max_rounds:
            raise RuntimeError(f"column generation did not converge in {max_rounds} rounds")
        logger.debug(f"round {rounds}: objective {float(outcome.objective):.6f}, adding {len(fresh)} columns")
        columns.extend(fresh)
        seen.update(fresh)
    weights = tuple(
        (w, code, pool.is_flagged(code))
        for w, code in zip(outcome.x, columns)
        if is_positive(w, mode, p.epsilon)
    )
    return MinCostResult(outcome.objective, weights, outcome.y, mode, rounds, certified, outcome)


def verify_dual(p: Correlation, result: MinCostResult, pool: CodePool) -> bool:
    """Certificado de optimalidad: y·col_v ≤ c_v en todo el pool e y·p = objetivo."""
    mode = result.mode
    value = sum((a * b for a, b in zip(result.duals, p.vector())), as_number(0, mode))
    if is_positive(abs(value - result.objective), mode, p.epsilon * 100):
        return False
    pricer = _Pricer(p.scenario.space, result.duals, mode)
    for codes, flags in pool.chunks():
        if len(codes) == 0:
            continue
        gain = pricer.gains(codes, flags)
        if pricer.is_positive(gain, p.epsilon * 100).any():
            return False
    return True

