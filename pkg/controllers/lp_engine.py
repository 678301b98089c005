# controllers/lp_engine.py
"""
Programación lineal exacta (Fraction) o en doble precisión.

Forma estándar: min cᵀx  s.a.  A x = b, x ≥ 0.
Simplex revisado denso de dos fases con la regla de Bland.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from common.errors import DimensionMismatchError
from common.numeric import (
    Number, NumericMode, as_number, is_negative, is_positive, is_zero,
)
from config import NUMERIC_EPSILON

logger = logging.getLogger(__name__)

Matrix = List[List[Number]]
Vector = List[Number]


class LPStatus(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LinearProgram:
    """min cᵀx sujeto a A x = b, x ≥ 0."""
    A: Tuple[Tuple[Number, ...], ...]
    b: Tuple[Number, ...]
    c: Tuple[Number, ...]
    mode: NumericMode = NumericMode.RATIONAL
    epsilon: float = NUMERIC_EPSILON

    @classmethod
    def build(cls, A: Sequence[Sequence], b: Sequence, c: Sequence,
              mode: NumericMode = NumericMode.RATIONAL, epsilon: float = NUMERIC_EPSILON) -> "LinearProgram":
        rows = len(A)
        cols = len(c)
        if len(b) != rows:
            raise DimensionMismatchError(f"b has {len(b)} entries for {rows} rows")
        if any(len(row) != cols for row in A):
            raise DimensionMismatchError(f"every row of A needs {cols} entries")
        return cls(
            tuple(tuple(as_number(v, mode) for v in row) for row in A),
            tuple(as_number(v, mode) for v in b),
            tuple(as_number(v, mode) for v in c),
            mode,
            epsilon,
        )

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.b), len(self.c)


@dataclass(frozen=True)
class LPOutcome:
    status: LPStatus
    objective: Optional[Number] = None
    x: Optional[Tuple[Number, ...]] = None
    y: Optional[Tuple[Number, ...]] = None
    farkas: Optional[Tuple[Number, ...]] = None
    ray: Optional[Tuple[Number, ...]] = None
    iterations: int = 0

    def verify(self, lp: LinearProgram) -> bool:
        """Recomprueba el certificado por sustitución directa."""
        m, n = lp.shape
        mode, eps = lp.mode, lp.epsilon
        # Certificates are checked with a looser bound in double mode.
        tol = eps * 100
        zero = as_number(0, mode)
        if self.status is LPStatus.OPTIMAL:
            x, y = self.x, self.y
            for i in range(m):
                if not is_zero(_dot(lp.A[i], x, zero) - lp.b[i], mode, tol):
                    return False
            if any(is_negative(v, mode, tol) for v in x):
                return False
            for j in range(n):
                reduced = lp.c[j] - sum((y[i] * lp.A[i][j] for i in range(m)), zero)
                if is_negative(reduced, mode, tol):
                    return False
            primal = _dot(lp.c, x, zero)
            dual = _dot(lp.b, y, zero)
            return is_zero(primal - dual, mode, tol) and is_zero(primal - self.objective, mode, tol)
        if self.status is LPStatus.INFEASIBLE:
            y = self.farkas
            for j in range(n):
                if is_positive(sum((y[i] * lp.A[i][j] for i in range(m)), zero), mode, tol):
                    return False
            return is_positive(_dot(lp.b, y, zero), mode, tol)
        d = self.ray
        for i in range(m):
            if not is_zero(_dot(lp.A[i], d, zero), mode, tol):
                return False
        if any(is_negative(v, mode, tol) for v in d):
            return False
        return is_negative(_dot(lp.c, d, zero), mode, tol)


def _dot(u: Sequence[Number], v: Sequence[Number], zero: Number) -> Number:
    return sum((a * b for a, b in zip(u, v)), zero)


class _RevisedSimplex:
    """Simplex revisado con inversa de base explícita."""

    def __init__(self, lp: LinearProgram, max_iterations: Optional[int] = None):
        self.mode = lp.mode
        self.eps = lp.epsilon
        self.zero = as_number(0, lp.mode)
        self.one = as_number(1, lp.mode)
        m, n = lp.shape
        self.m, self.n = m, n
        # filas con b < 0 se multiplican por -1
        self.sign = [(-self.one if lp.b[i] < 0 else self.one) for i in range(m)]
        self.columns: List[Vector] = [
            [self.sign[i] * lp.A[i][j] for i in range(m)] for j in range(n)
        ]
        for i in range(m):
            self.columns.append([self.one if r == i else self.zero for r in range(m)])
        self.b = [self.sign[i] * lp.b[i] for i in range(m)]
        self.c = list(lp.c)
        self.basis = [n + i for i in range(m)]
        self.binv: Matrix = [[self.one if r == i else self.zero for r in range(m)] for i in range(m)]
        self.xb: Vector = list(self.b)
        self.iterations = 0
        self.max_iterations = max_iterations or 50 * (m + n + 10) ** 2

    # --- álgebra básica ---

    def _duals(self, costs: Sequence[Number]) -> Vector:
        cb = [costs[j] for j in self.basis]
        return [sum((cb[r] * self.binv[r][i] for r in range(self.m)), self.zero) for i in range(self.m)]

    def _reduced(self, costs: Sequence[Number], y: Sequence[Number], j: int) -> Number:
        col = self.columns[j]
        return costs[j] - sum((y[i] * col[i] for i in range(self.m) if col[i] != 0), self.zero)

    def _ftran(self, j: int) -> Vector:
        col = self.columns[j]
        nz = [(i, v) for i, v in enumerate(col) if v != 0]
        return [sum((self.binv[r][i] * v for i, v in nz), self.zero) for r in range(self.m)]

    def _pivot(self, row: int, entering: int, u: Vector) -> None:
        pivot = u[row]
        prow = [v / pivot for v in self.binv[row]]
        self.binv[row] = prow
        theta = self.xb[row] / pivot
        for r in range(self.m):
            if r == row or u[r] == 0:
                continue
            factor = u[r]
            self.binv[r] = [a - factor * p for a, p in zip(self.binv[r], prow)]
            self.xb[r] = self.xb[r] - factor * theta
        self.xb[row] = theta
        self.basis[row] = entering
        self.iterations += 1

    def _is_neg(self, v: Number) -> bool:
        return is_negative(v, self.mode, self.eps)

    def _is_pos(self, v: Number) -> bool:
        return is_positive(v, self.mode, self.eps)

    # --- iteraciones ---

    def run(self, costs: Sequence[Number], allowed: Sequence[bool]) -> Tuple[str, Optional[int], Optional[Vector]]:
        """Itera hasta optimalidad o rayo; devuelve ('optimal'|'unbounded', columna, dirección)."""
        while True:
            if self.iterations > self.max_iterations:
                raise RuntimeError("simplex iteration limit reached")
            y = self._duals(costs)
            in_basis = set(self.basis)
            entering = None
            for j in range(len(self.columns)):
                if allowed[j] and j not in in_basis and self._is_neg(self._reduced(costs, y, j)):
                    entering = j
                    break
            if entering is None:
                return "optimal", None, None
            u = self._ftran(entering)
            leave_row = None
            best = None
            for r in range(self.m):
                if self._is_pos(u[r]):
                    ratio = self.xb[r] / u[r]
                    if (best is None or ratio < best
                            or (ratio == best and self.basis[r] < self.basis[leave_row])):
                        best, leave_row = ratio, r
            if leave_row is None:
                return "unbounded", entering, u
            self._pivot(leave_row, entering, u)

    def drive_out_artificials(self) -> None:
        """Saca de la base las artificiales a nivel cero cuando la fila no es redundante."""
        for row in range(self.m):
            if self.basis[row] < self.n:
                continue
            in_basis = set(self.basis)
            for j in range(self.n):
                if j in in_basis:
                    continue
                u = self._ftran(j)
                if not is_zero(u[row], self.mode, self.eps):
                    self._pivot(row, j, u)
                    break

    def primal(self) -> Vector:
        x = [self.zero] * self.n
        for r, j in enumerate(self.basis):
            if j < self.n:
                x[j] = self.xb[r]
        return x

    def unflip(self, y: Sequence[Number]) -> Tuple[Number, ...]:
        return tuple(self.sign[i] * y[i] for i in range(self.m))


def solve(lp: LinearProgram, max_iterations: Optional[int] = None) -> LPOutcome:
    """
    Resuelve el LP y devuelve un resultado con certificado verificable:
    OPTIMAL (x, y, objetivo), INFEASIBLE (Farkas y: yᵀA ≤ 0, yᵀb > 0) o UNBOUNDED (rayo).
    """
    m, n = lp.shape
    simplex = _RevisedSimplex(lp, max_iterations)
    zero, one = simplex.zero, simplex.one

    # Fase 1: minimizar la suma de artificiales
    phase1_costs = [zero] * n + [one] * m
    simplex.run(phase1_costs, [True] * (n + m))
    infeasibility = sum((simplex.xb[r] for r, j in enumerate(simplex.basis) if j >= n), zero)
    if simplex._is_pos(infeasibility):
        farkas = simplex.unflip(simplex._duals(phase1_costs))
        logger.debug(f"LP infeasible after {simplex.iterations} pivots")
        return LPOutcome(LPStatus.INFEASIBLE, farkas=farkas, iterations=simplex.iterations)

    simplex.drive_out_artificials()

    # Fase 2: artificiales restantes (filas redundantes) no pueden volver a entrar
    phase2_costs = list(lp.c) + [zero] * m
    allowed = [True] * n + [False] * m
    status, entering, u = simplex.run(phase2_costs, allowed)
    if status == "unbounded":
        ray = [zero] * n
        ray[entering] = one
        for r, j in enumerate(simplex.basis):
            if j < n:
                ray[j] = -u[r]
        logger.debug(f"LP unbounded along column {entering}")
        return LPOutcome(LPStatus.UNBOUNDED, ray=tuple(ray), iterations=simplex.iterations)

    x = simplex.primal()
    y = simplex.unflip(simplex._duals(phase2_costs))
    objective = _dot(lp.c, x, zero)
    return LPOutcome(LPStatus.OPTIMAL, objective=objective, x=tuple(x), y=y, iterations=simplex.iterations)
