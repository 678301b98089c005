# controllers/quantum_process.py
"""
Matrices de proceso, instrumentos cuánticos (matrices CJ) y correlaciones
p(x⃗|a⃗) = Tr[W ⊗_k M^k_{x_k|a_k}].

Orden de factores: I_1, O_1, I_2, O_2, ...
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from functools import reduce
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from common.errors import CapExceededError, DimensionMismatchError
from common.numeric import NumericMode
from config import NUMERIC_EPSILON, QUANTUM_DIM_CAP
from controllers.classical_process import LocalIntervention, StochasticProcess
from controllers.scenario_core import Correlation, Scenario

logger = logging.getLogger(__name__)

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def kron_all(matrices: Sequence[np.ndarray]) -> np.ndarray:
    return reduce(np.kron, matrices, np.ones((1, 1), dtype=complex))


def ket(index: int, dim: int) -> np.ndarray:
    vector = np.zeros((dim, 1), dtype=complex)
    vector[index, 0] = 1
    return vector


def projector(index: int, dim: int) -> np.ndarray:
    v = ket(index, dim)
    return v @ v.conj().T


def cj_identity(dim: int) -> np.ndarray:
    """Σ_ij |ii⟩⟨jj| = d·|Φ+⟩⟨Φ+| (CJ del canal identidad)."""
    phi = sum(np.kron(ket(i, dim), ket(i, dim)) for i in range(dim))
    return phi @ phi.conj().T


def partial_trace_output(matrix: np.ndarray, d_in: int, d_out: int) -> np.ndarray:
    """Tr_O de una matriz sobre H^I ⊗ H^O."""
    return np.einsum("ijkj->ik", matrix.reshape(d_in, d_out, d_in, d_out))


def hermitian_basis(dim: int) -> List[np.ndarray]:
    """Base de las matrices hermíticas d×d (d² elementos)."""
    basis = [projector(j, dim) for j in range(dim)]
    basis.extend(_offdiagonal_basis(dim))
    return basis


def traceless_hermitian_basis(dim: int) -> List[np.ndarray]:
    """Base de las hermíticas sin traza (d² − 1 elementos)."""
    basis = [projector(j, dim) - projector(j + 1, dim) for j in range(dim - 1)]
    basis.extend(_offdiagonal_basis(dim))
    return basis


def _offdiagonal_basis(dim: int) -> List[np.ndarray]:
    out = []
    for j, k in itertools.combinations(range(dim), 2):
        unit = ket(j, dim) @ ket(k, dim).T
        out.append(unit + unit.T)
        out.append(-1j * unit + 1j * unit.T)
    return out


# =============================================================================
# MATRICES DE PROCESO
# =============================================================================

@dataclass(frozen=True, eq=False)
class ProcessMatrix:
    """W hermítica sobre ⊗_k (H^{I_k} ⊗ H^{O_k})."""
    input_dims: Tuple[int, ...]
    output_dims: Tuple[int, ...]
    matrix: np.ndarray
    epsilon: float = NUMERIC_EPSILON

    def __post_init__(self):
        object.__setattr__(self, "input_dims", tuple(int(d) for d in self.input_dims))
        object.__setattr__(self, "output_dims", tuple(int(d) for d in self.output_dims))
        if len(self.input_dims) != len(self.output_dims):
            raise DimensionMismatchError("one input and one output dimension per party")
        dim = self.dimension
        if dim > QUANTUM_DIM_CAP:
            raise CapExceededError(f"process dimension {dim} exceeds the cap {QUANTUM_DIM_CAP}")
        matrix = np.array(self.matrix, dtype=complex)
        if matrix.shape != (dim, dim):
            raise DimensionMismatchError(f"matrix shape {matrix.shape} != {(dim, dim)}")
        if not np.allclose(matrix, matrix.conj().T, atol=self.epsilon):
            raise ValueError("process matrix must be Hermitian")
        matrix.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)

    @property
    def parties(self) -> int:
        return len(self.input_dims)

    @property
    def dimension(self) -> int:
        return int(np.prod([i * o for i, o in zip(self.input_dims, self.output_dims)]))

    @classmethod
    def maximally_mixed(cls, input_dims: Sequence[int], output_dims: Sequence[int]) -> "ProcessMatrix":
        dim = int(np.prod([i * o for i, o in zip(input_dims, output_dims)]))
        return cls(tuple(input_dims), tuple(output_dims), np.eye(dim, dtype=complex) / np.prod(output_dims))

    @classmethod
    def from_stochastic_process(cls, p: StochasticProcess) -> "ProcessMatrix":
        """Inmersión diagonal W = Σ P(i⃗|o⃗) ⊗_k |i_k⟩⟨i_k| ⊗ |o_k⟩⟨o_k|."""
        dims = p.dims
        space = dims.space
        dim = int(np.prod([i * o for i, o in zip(dims.inputs, dims.outputs)]))
        matrix = np.zeros((dim, dim), dtype=complex)
        table = np.array(p.table.tolist(), dtype=float)
        for i_index, i in enumerate(space.codomain_tuples):
            for o_index, o in enumerate(space.domain_tuples):
                weight = table[i_index, o_index]
                if weight == 0:
                    continue
                factors = []
                for k in range(dims.parties):
                    factors.append(projector(i[k], dims.inputs[k]))
                    factors.append(projector(o[k], dims.outputs[k]))
                matrix += weight * kron_all(factors)
        return cls(dims.inputs, dims.outputs, matrix)

    def expectation(self, operators: Sequence[np.ndarray]) -> complex:
        """Tr[W ⊗_k M_k]."""
        return complex(np.trace(self.matrix @ kron_all(operators)))

    def to_json(self) -> Dict[str, Any]:
        return {
            "input_dims": list(self.input_dims),
            "output_dims": list(self.output_dims),
            "matrix": [[[float(v.real), float(v.imag)] for v in row] for row in self.matrix],
        }

    @classmethod
    def from_json(cls, doc: Dict[str, Any]) -> "ProcessMatrix":
        entries = np.array(doc["matrix"], dtype=float)
        return cls(tuple(doc["input_dims"]), tuple(doc["output_dims"]), entries[..., 0] + 1j * entries[..., 1])


@dataclass(frozen=True)
class ValidityReport:
    valid: bool
    min_eigenvalue: float
    max_normalization_error: float
    checks: int

    def to_json(self) -> Dict[str, Any]:
        return {
            "valid": self.valid,
            "min_eigenvalue": self.min_eigenvalue,
            "max_normalization_error": self.max_normalization_error,
            "checks": self.checks,
        }


def cptp_affine_basis(d_in: int, d_out: int) -> List[np.ndarray]:
    """
    Puntos afínmente independientes que generan {M : Tr_O M = Id_I}:
    M0 = Id⊗Id/d_O y M0 + σ_i ⊗ τ_j (σ hermítica, τ hermítica sin traza).
    """
    base = np.kron(np.eye(d_in), np.eye(d_out)) / d_out
    points = [base.astype(complex)]
    for sigma in hermitian_basis(d_in):
        for tau in traceless_hermitian_basis(d_out):
            points.append(base + np.kron(sigma, tau))
    return points


def is_valid_process_matrix(w: ProcessMatrix) -> ValidityReport:
    """W ⪰ −ε y Tr[W ⊗_k M_k] = 1 sobre el producto de bases afines por parte."""
    eigenvalues = np.linalg.eigvalsh(w.matrix)
    min_eigenvalue = float(eigenvalues.min())
    bases = [cptp_affine_basis(i, o) for i, o in zip(w.input_dims, w.output_dims)]
    worst = 0.0
    checks = 0
    for combo in itertools.product(*bases):
        value = w.expectation(combo)
        worst = max(worst, abs(value - 1))
        checks += 1
    valid = min_eigenvalue >= -w.epsilon and worst <= w.epsilon * 10
    logger.debug(f"process matrix validity: min eig {min_eigenvalue:.3e}, max error {worst:.3e} over {checks} checks")
    return ValidityReport(valid, min_eigenvalue, worst, checks)


# =============================================================================
# INSTRUMENTOS
# =============================================================================

@dataclass(frozen=True, eq=False)
class QuantumInstrument:
    """elements[a][x] = M_{x|a} sobre H^I ⊗ H^O."""
    input_dim: int
    output_dim: int
    elements: Tuple[Tuple[np.ndarray, ...], ...]
    epsilon: float = NUMERIC_EPSILON

    def __post_init__(self):
        dim = self.input_dim * self.output_dim
        frozen = []
        outcome_counts = {len(row) for row in self.elements}
        if len(outcome_counts) != 1:
            raise DimensionMismatchError("every setting needs the same number of outcomes")
        for a, row in enumerate(self.elements):
            matrices = []
            for x, m in enumerate(row):
                m = np.array(m, dtype=complex)
                if m.shape != (dim, dim):
                    raise DimensionMismatchError(f"M[{x}|{a}] has shape {m.shape}, expected {(dim, dim)}")
                if np.linalg.eigvalsh((m + m.conj().T) / 2).min() < -self.epsilon:
                    raise ValueError(f"M[{x}|{a}] is not positive semidefinite")
                m.flags.writeable = False
                matrices.append(m)
            total = partial_trace_output(sum(matrices), self.input_dim, self.output_dim)
            if not np.allclose(total, np.eye(self.input_dim), atol=self.epsilon):
                raise ValueError(f"instrument for setting {a} is not trace preserving")
            frozen.append(tuple(matrices))
        object.__setattr__(self, "elements", tuple(frozen))

    @property
    def settings(self) -> int:
        return len(self.elements)

    @property
    def outcomes(self) -> int:
        return len(self.elements[0])


def measure_and_reprepare(basis: np.ndarray, prepare: Sequence[np.ndarray]) -> List[np.ndarray]:
    """M_x = (|b_x⟩⟨b_x|)^T ⊗ ρ_x: medir en la base (columnas) y preparar ρ_x."""
    out = []
    for x, rho in enumerate(prepare):
        b = basis[:, [x]]
        out.append(np.kron((b @ b.conj().T).T, np.asarray(rho, dtype=complex)))
    return out


def diagonal_instrument(iv: LocalIntervention) -> QuantumInstrument:
    """M_{x|a} = Σ_{i,o} p(x,o|a,i) |i⟩⟨i| ⊗ |o⟩⟨o|."""
    table = np.array(iv.table.tolist(), dtype=float)
    elements = []
    for a in range(iv.settings):
        row = []
        for x in range(iv.outcomes):
            m = np.zeros((iv.inputs * iv.outputs,) * 2, dtype=complex)
            for i in range(iv.inputs):
                for o in range(iv.outputs):
                    if table[a, i, x, o]:
                        m += table[a, i, x, o] * np.kron(projector(i, iv.inputs), projector(o, iv.outputs))
            row.append(m)
        elements.append(tuple(row))
    return QuantumInstrument(iv.inputs, iv.outputs, tuple(elements))


def diagonal_instruments(interventions: Sequence[LocalIntervention]) -> List[QuantumInstrument]:
    return [diagonal_instrument(iv) for iv in interventions]


def pm_correlation(w: ProcessMatrix, instruments: Sequence[QuantumInstrument]) -> Correlation:
    """Correlación en modo doble generada por W y los instrumentos locales."""
    if len(instruments) != w.parties:
        raise DimensionMismatchError(f"{w.parties} instruments needed, got {len(instruments)}")
    for k, inst in enumerate(instruments):
        if (inst.input_dim, inst.output_dim) != (w.input_dims[k], w.output_dims[k]):
            raise DimensionMismatchError(f"party {k + 1}: instrument dims do not match the process matrix")
    scenario = Scenario(tuple(inst.settings for inst in instruments), tuple(inst.outcomes for inst in instruments))
    space = scenario.space
    table = np.zeros((scenario.n_outcomes, scenario.n_settings), dtype=float)
    for a_index, a in enumerate(space.domain_tuples):
        for x_index, x in enumerate(space.codomain_tuples):
            value = w.expectation([instruments[k].elements[a[k]][x[k]] for k in range(w.parties)])
            table[x_index, a_index] = value.real
    table[np.abs(table) < w.epsilon / 10] = 0.0
    return Correlation(scenario, table, NumericMode.DOUBLE, w.epsilon)


# =============================================================================
# FAMILIA W(q) E INSTRUMENTOS DEL JUEGO GYNI
# =============================================================================

def qform_valid_range() -> Tuple[float, float]:
    """Intervalo de q en el que W(q) es semidefinida positiva."""
    half_width = 1 / (2 * math.sqrt(2))
    return 0.5 - half_width, 0.5 + half_width


def w_of_q(q: float) -> ProcessMatrix:
    """W(q) = ¼[I + (2q−1)(Z Z Z I + Z I X X)] en el orden I1, O1, I2, O2."""
    low, high = qform_valid_range()
    if not low - NUMERIC_EPSILON <= q <= high + NUMERIC_EPSILON:
        logger.warning(f"⚠️ q={q} is outside [{low:.6f}, {high:.6f}]; W(q) is not a valid process matrix")
    coefficient = 2 * float(q) - 1
    terms = kron_all([PAULI_Z, PAULI_Z, PAULI_Z, PAULI_I]) + kron_all([PAULI_Z, PAULI_I, PAULI_X, PAULI_X])
    matrix = (np.eye(16, dtype=complex) + coefficient * terms) / 4
    return ProcessMatrix((2, 2), (2, 2), matrix)


def gyni_instrument() -> QuantumInstrument:
    """
    Ajuste 0: transmite la entrada por el canal identidad y devuelve x = 1.
    Ajuste 1: mide en Z, x = resultado, y prepara |0⟩.
    """
    zero = np.zeros((4, 4), dtype=complex)
    setting0 = (zero, cj_identity(2))
    setting1 = (
        np.kron(projector(0, 2), projector(0, 2)),
        np.kron(projector(1, 2), projector(0, 2)),
    )
    return QuantumInstrument(2, 2, (setting0, setting1))


def gyni_instruments() -> List[QuantumInstrument]:
    return [gyni_instrument(), gyni_instrument()]


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_density(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_measure_and_reprepare(d_in: int, d_out: int, settings: int, rng: np.random.Generator,
                                 outcomes: Optional[int] = None) -> QuantumInstrument:
    """Instrumento aleatorio: base de medida y estados preparados al azar por ajuste."""
    outcomes = outcomes or d_in
    if outcomes != d_in:
        raise DimensionMismatchError("a basis measurement has one outcome per input level")
    elements = []
    for _ in range(settings):
        basis = random_unitary(d_in, rng)
        elements.append(tuple(measure_and_reprepare(basis, [random_density(d_out, rng) for _ in range(outcomes)])))
    return QuantumInstrument(d_in, d_out, tuple(elements))
