"""
Matrices de proceso, instrumentos y la familia W(q).
"""
import logging

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from common.errors import CapExceededError, DimensionMismatchError
from common.numeric import NumericMode
from controllers.classical_process import (
    BINARY_BIPARTITE, LocalIntervention, StochasticProcess, correlation_from_process,
    enumerate_process_functions,
)
from controllers.quantum_process import (
    PAULI_X, PAULI_Z, ProcessMatrix, QuantumInstrument, cj_identity, cptp_affine_basis, diagonal_instruments,
    gyni_instruments, is_valid_process_matrix, kron_all, measure_and_reprepare, partial_trace_output,
    pm_correlation, projector, qform_valid_range, random_measure_and_reprepare, w_of_q,
)
from controllers.reproduction import Q_STAR
from controllers.scenario_core import is_non_signalling, qform_correlation
from controllers.witnesses import evaluate, gyni

LOW, HIGH = qform_valid_range()


def _random_intervention(rng: np.random.Generator) -> LocalIntervention:
    table = np.array([[rng.dirichlet(np.ones(4)).reshape(2, 2) for _ in range(2)] for _ in range(2)])
    return LocalIntervention(table, NumericMode.DOUBLE)


class TestLinearAlgebra:
    def test_cj_identity_is_trace_preserving(self):
        assert np.allclose(partial_trace_output(cj_identity(2), 2, 2), np.eye(2))

    def test_affine_basis_is_trace_preserving(self):
        points = cptp_affine_basis(2, 2)
        assert len(points) == 1 + 4 * 3
        for m in points:
            assert np.allclose(partial_trace_output(m, 2, 2), np.eye(2))

    def test_kron_all(self):
        assert kron_all([PAULI_Z, PAULI_X]).shape == (4, 4)
        assert np.allclose(kron_all([projector(1, 2)]), [[0, 0], [0, 1]])


class TestValidity:
    @pytest.mark.parametrize("q", [Q_STAR, 0.7, 0.5, HIGH, LOW])
    def test_w_of_q_in_range_is_valid(self, q):
        report = is_valid_process_matrix(w_of_q(q))
        assert report.valid
        assert report.checks == 13 * 13

    def test_w_of_q_out_of_range_warns_and_fails(self, caplog):
        with caplog.at_level(logging.WARNING):
            w = w_of_q(0.95)
        assert "outside" in caplog.text
        report = is_valid_process_matrix(w)
        assert not report.valid
        assert report.min_eigenvalue < 0
        assert report.to_json()["valid"] is False

    def test_maximally_mixed_is_valid(self):
        assert is_valid_process_matrix(ProcessMatrix.maximally_mixed((2, 2), (2, 2))).valid

    def test_signalling_loop_matrix_is_invalid(self):
        # Z en la entrada de 1 correlacionada con Z en la salida de 1: bucle local
        matrix = (np.eye(16) + kron_all([PAULI_Z, PAULI_Z, np.eye(2), np.eye(2)])) / 4
        report = is_valid_process_matrix(ProcessMatrix((2, 2), (2, 2), matrix))
        assert not report.valid
        assert report.max_normalization_error > 0.1

    def test_hermiticity_and_cap(self):
        with pytest.raises(ValueError):
            ProcessMatrix((2,), (2,), np.triu(np.ones((4, 4))))
        with pytest.raises(CapExceededError):
            ProcessMatrix.maximally_mixed((2, 2, 2, 2), (2, 2, 2, 2))
        with pytest.raises(DimensionMismatchError):
            ProcessMatrix((2,), (2,), np.eye(8))

    def test_json(self):
        w = w_of_q(0.7)
        assert np.allclose(ProcessMatrix.from_json(w.to_json()).matrix, w.matrix)


class TestInstruments:
    def test_trace_two_state_is_rejected(self):
        elements = measure_and_reprepare(np.eye(2), [2 * projector(0, 2), 2 * projector(1, 2)])
        with pytest.raises(ValueError):
            QuantumInstrument(2, 2, (tuple(elements),))

    def test_negative_element_is_rejected(self):
        bad = -np.kron(projector(0, 2), projector(0, 2))
        with pytest.raises(ValueError):
            QuantumInstrument(2, 2, ((bad, cj_identity(2) - bad),))

    def test_ragged_settings_are_rejected(self):
        good = tuple(measure_and_reprepare(np.eye(2), [projector(0, 2), projector(0, 2)]))
        with pytest.raises(DimensionMismatchError):
            QuantumInstrument(2, 2, (good, good[:1]))

    def test_gyni_instrument_shape(self):
        inst = gyni_instruments()[0]
        assert (inst.settings, inst.outcomes) == (2, 2)

    def test_random_instruments_give_normalized_correlations(self):
        rng = np.random.default_rng(7)
        instruments = [random_measure_and_reprepare(2, 2, 2, rng) for _ in range(2)]
        p = pm_correlation(ProcessMatrix.maximally_mixed((2, 2), (2, 2)), instruments)
        assert p.mode is NumericMode.DOUBLE
        assert is_non_signalling(p)

    def test_party_count_is_checked(self):
        with pytest.raises(DimensionMismatchError):
            pm_correlation(w_of_q(0.7), gyni_instruments()[:1])


class TestQForm:
    @given(st.floats(min_value=LOW, max_value=HIGH))
    @settings(max_examples=30, deadline=None)
    def test_w_of_q_reproduces_closed_form(self, q):
        p = pm_correlation(w_of_q(q), gyni_instruments())
        expected = qform_correlation(q)
        assert np.allclose(p.table, np.array(expected.table, dtype=float), atol=1e-9)

    def test_gyni_value_at_optimum(self):
        p = pm_correlation(w_of_q(Q_STAR), gyni_instruments())
        assert evaluate(gyni(), p) == pytest.approx(5 * Q_STAR / 8, abs=1e-9)
        assert evaluate(gyni(), p) == pytest.approx(0.533470, abs=1e-6)


class TestDiagonalEmbedding:
    @given(st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_classical_process_matches_quantum_prediction(self, seed):
        rng = np.random.default_rng(seed)
        functions = enumerate_process_functions(BINARY_BIPARTITE)
        weights = rng.dirichlet(np.ones(len(functions)))
        process = StochasticProcess.mixture([(float(w), f.to_stochastic()) for w, f in zip(weights, functions)])
        interventions = [_random_intervention(rng) for _ in range(2)]
        classical = correlation_from_process(process, interventions).to_correlation()
        quantum = pm_correlation(ProcessMatrix.from_stochastic_process(process), diagonal_instruments(interventions))
        assert np.allclose(quantum.table, np.array(classical.table, dtype=float), atol=1e-9)
        assert is_valid_process_matrix(ProcessMatrix.from_stochastic_process(process)).valid
