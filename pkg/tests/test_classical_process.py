"""
Funciones de proceso, consistencia lógica, intervenciones locales y el
politopo de extremos deterministas.
"""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from common.errors import CapExceededError, DimensionMismatchError, InvalidCorrelationError
from controllers.classical_process import (
    BINARY_BIPARTITE, BINARY_TRIPARTITE, LocalIntervention, ProcessDims, QuasiProcessFunction,
    StochasticProcess, afbw_family, afbw_process, bfw_process, causal_structure, correlation_from_process,
    cyclic_loop, dep_membership, enumerate_process_functions, fixed_point_count, intervention_table,
    is_logically_consistent, is_process_function, noncausal_process_functions, pass_through_interventions,
    process_function_codes, process_function_mask, quasi_realize,
)
from controllers.scenario_core import Vertex, vertex_to_correlation
from tests.strategies import rational_correlations

SWAP_LOOP = QuasiProcessFunction.from_callable(BINARY_BIPARTITE, lambda o: (o[1], o[0]))
COPY = LocalIntervention.deterministic([[0, 1]], [[0, 1]], 2, 2)


class TestProcessFunctions:
    def test_afbw_is_a_process_function(self):
        assert is_process_function(afbw_process()).valid

    def test_loop_fails_with_witness_intervention(self):
        check = is_process_function(cyclic_loop(False))
        assert not check.valid
        assert check.fixed_points != 1
        assert fixed_point_count(cyclic_loop(False), check.intervention) == check.fixed_points
        doc = check.to_json()
        assert doc["process_function"] is False and "intervention" in doc

    def test_identity_feedback_counts(self):
        identity = ((0, 1),) * 3
        assert fixed_point_count(cyclic_loop(False), identity) == 2
        assert fixed_point_count(cyclic_loop(True), identity) == 0

    def test_bipartite_process_functions(self):
        codes = process_function_codes(BINARY_BIPARTITE)
        assert len(codes) == 12
        assert len(enumerate_process_functions(BINARY_BIPARTITE)) == 12
        assert len(noncausal_process_functions(BINARY_BIPARTITE)) == 0

    @given(st.integers(0, 255))
    def test_batch_mask_matches_scalar(self, code):
        w = QuasiProcessFunction.from_code(BINARY_BIPARTITE, code)
        assert bool(process_function_mask(BINARY_BIPARTITE, np.array([code]))[0]) == is_process_function(w).valid

    def test_afbw_family(self):
        family = afbw_family()
        assert len(family) == 64
        assert len({w.code for w in family}) == 64
        mask = process_function_mask(BINARY_TRIPARTITE, np.array([w.code for w in family]))
        assert mask.all()

    def test_afbw_structure_is_complete(self):
        assert len(causal_structure(afbw_process()).edges) == 6

    def test_intervention_cap(self):
        with pytest.raises(CapExceededError):
            intervention_table(ProcessDims.uniform(3, 3, 3), cap=1000)

    def test_omega_validation(self):
        with pytest.raises(DimensionMismatchError):
            QuasiProcessFunction(BINARY_BIPARTITE, (0, 1, 2))
        with pytest.raises(DimensionMismatchError):
            QuasiProcessFunction(BINARY_BIPARTITE, (0, 1, 2, 4))

    def test_json(self):
        w = afbw_process()
        assert QuasiProcessFunction.from_json(w.to_json()) == w
        p = bfw_process()
        assert StochasticProcess.from_json(p.to_json()).table.tolist() == p.table.tolist()

    @pytest.mark.slow
    def test_tripartite_noncausal_process_functions_include_afbw(self):
        assert afbw_process().code in set(noncausal_process_functions(BINARY_TRIPARTITE).tolist())


class TestConsistency:
    def test_bfw_is_consistent(self):
        assert is_logically_consistent(bfw_process()).consistent

    def test_unbalanced_loops_are_not(self):
        check = is_logically_consistent(bfw_process(Fraction(3, 5)))
        assert not check.consistent
        assert check.total != 1
        assert check.to_json()["consistent"] is False

    def test_weights_off_by_a_trillionth_are_not_consistent(self):
        nudged = Fraction(1, 2) + Fraction(1, 10 ** 12)
        check = is_logically_consistent(bfw_process(nudged))
        assert not check.consistent
        assert check.total != 1

    def test_process_function_is_consistent(self):
        assert is_logically_consistent(afbw_process().to_stochastic()).consistent

    def test_stochastic_validation(self):
        with pytest.raises(InvalidCorrelationError):
            StochasticProcess(BINARY_BIPARTITE, np.full((4, 4), Fraction(1, 2), dtype=object))

    def test_column_off_by_a_trillionth_rejected(self):
        table = np.eye(4, dtype=int).astype(object) * Fraction(1)
        table[0, 0] += Fraction(1, 10 ** 12)
        with pytest.raises(InvalidCorrelationError):
            StochasticProcess(BINARY_BIPARTITE, table)


class TestInterventions:
    def test_pass_through_reproduces_omega_as_vertex(self):
        w = afbw_process()
        result = correlation_from_process(w.to_stochastic(), pass_through_interventions(w.dims))
        assert result.normalized
        vertex = Vertex(w.dims.as_scenario(), w.omega)
        assert result.to_correlation().vector() == vertex_to_correlation(vertex).vector()

    def test_feedback_on_loop_is_not_normalized(self):
        result = correlation_from_process(cyclic_loop(False).to_stochastic(), [COPY] * 3)
        assert not result.normalized
        assert result.column_sums == (Fraction(2),)
        with pytest.raises(InvalidCorrelationError):
            result.to_correlation()
        assert result.to_json()["normalized"] is False

    def test_feedback_on_bfw_is_normalized(self):
        result = correlation_from_process(bfw_process(), [COPY] * 3)
        assert result.normalized
        assert result.to_correlation().scenario.settings == (1, 1, 1)

    def test_dimension_checks(self):
        with pytest.raises(DimensionMismatchError):
            correlation_from_process(bfw_process(), [COPY] * 2)
        wide = LocalIntervention.pass_through(3, 2)
        with pytest.raises(DimensionMismatchError):
            correlation_from_process(bfw_process(), [wide] * 3)

    def test_unnormalized_intervention_rejected(self):
        table = np.zeros((1, 2, 2, 2), dtype=object)
        table[0, 0, 0, 0] = Fraction(1)
        with pytest.raises(InvalidCorrelationError):
            LocalIntervention(table)

    def test_intervention_off_by_a_trillionth_rejected(self):
        table = COPY.table.copy()
        first = tuple(np.argwhere(table == 1)[0])
        table[first] += Fraction(1, 10 ** 12)
        with pytest.raises(InvalidCorrelationError):
            LocalIntervention(table)

    def test_feedback_on_nudged_bfw_is_not_normalized(self):
        nudged = bfw_process(Fraction(1, 2) + Fraction(1, 10 ** 12))
        result = correlation_from_process(nudged, [COPY] * 3)
        assert not result.normalized
        with pytest.raises(InvalidCorrelationError):
            result.to_correlation()

    def test_intervention_json(self):
        assert LocalIntervention.from_json(COPY.to_json()).table.tolist() == COPY.table.tolist()

    @given(rational_correlations())
    @settings(max_examples=40, deadline=None)
    def test_quasi_realization_reproduces_any_correlation(self, p):
        process, interventions = quasi_realize(p)
        result = correlation_from_process(process, interventions)
        assert result.normalized
        assert result.to_correlation().vector() == p.vector()


class TestDEP:
    def test_mixture_of_process_functions_is_member(self):
        a, b = enumerate_process_functions(BINARY_BIPARTITE)[:2]
        p = StochasticProcess.mixture([(Fraction(1, 4), a.to_stochastic()), (Fraction(3, 4), b.to_stochastic())])
        decomposition = dep_membership(p)
        assert decomposition.member
        assert decomposition.verify(p)
        assert decomposition.to_json()["decomposition"]

    def test_bipartite_loop_is_separated(self):
        p = SWAP_LOOP.to_stochastic()
        decomposition = dep_membership(p)
        assert not decomposition.member
        assert decomposition.verify(p)
        assert len(decomposition.to_json()["farkas"]) == 4

    @pytest.mark.slow
    def test_bfw_is_outside_dep(self):
        p = bfw_process()
        decomposition = dep_membership(p)
        assert not decomposition.member
        assert decomposition.verify(p)
