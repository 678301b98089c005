"""
Escenarios, codificación de vértices, correlaciones y grafos de señalización.
"""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from common.errors import InvalidCorrelationError, ScenarioMismatchError
from common.numeric import NumericMode
from controllers.scenario_core import (
    BIPARTITE_BINARY, TRIPARTITE_BINARY, Correlation, FunctionSpace, Scenario, Vertex,
    correlation_to_vertex, is_non_signalling, marginal, mix, pr_box, qform_correlation,
    quantile_decomposition, signalling_edge_masks, signalling_graph, vertex_to_correlation,
)
from tests.strategies import rational_correlations, small_scenarios, tripartite_vertices, vertices


class TestScenario:
    def test_uniform_cardinalities(self):
        s = Scenario.uniform(3, 2, 2)
        assert s.parties == 3
        assert s.n_settings == 8
        assert s.n_outcomes == 8
        assert s.n_vertices == 8 ** 8
        assert s.key == "3-2-2"

    def test_custom_key(self):
        assert Scenario((2, 3), (2, 2)).key == "M2.3_D2.2"

    @pytest.mark.parametrize("settings_, outcomes", [((), ()), ((2, 2), (2,)), ((0, 2), (2, 2))])
    def test_rejects_bad_cardinalities(self, settings_, outcomes):
        with pytest.raises(ValueError):
            Scenario(settings_, outcomes)

    def test_json(self):
        s = Scenario((2, 3), (4, 2))
        assert Scenario.from_json(s.to_json()) == s


class TestEncoding:
    def test_first_party_most_significant(self):
        space = BIPARTITE_BINARY.space
        assert space.domain_tuples == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert space.domain_index((1, 0)) == 2

    def test_code_weights_first_setting_lowest(self):
        space = BIPARTITE_BINARY.space
        assert space.encode([1, 0, 0, 0]) == 1
        assert space.encode([0, 1, 0, 0]) == 4
        assert space.encode([3, 3, 3, 3]) == 255

    @given(small_scenarios(), st.data())
    @settings(max_examples=60, deadline=None)
    def test_batch_decode_matches_scalar(self, s, data):
        codes = data.draw(st.lists(st.integers(0, s.n_vertices - 1), min_size=1, max_size=20))
        tables = s.space.decode_codes(np.array(codes))
        assert [tuple(row) for row in tables.tolist()] == [s.space.decode(c) for c in codes]
        assert s.space.encode_tables(tables).tolist() == codes

    @given(vertices())
    def test_vertex_code_identifies_table(self, v):
        assert Vertex.from_code(v.scenario, v.code) == v

    def test_vertex_validation(self):
        with pytest.raises(ValueError):
            Vertex(BIPARTITE_BINARY, (0, 1, 2))
        with pytest.raises(ValueError):
            Vertex(BIPARTITE_BINARY, (0, 1, 2, 4))

    def test_from_callable(self):
        v = Vertex.from_callable(BIPARTITE_BINARY, lambda a: (a[1], a[0]))
        assert v.f == (0, 2, 1, 3)
        assert v.outcome((1, 0)) == (0, 1)
        assert v.component(1, (1, 0)) == 1


class TestCorrelation:
    def test_rejects_negative_entry(self):
        table = [[Fraction(1)] * 4, [Fraction(0)] * 4, [Fraction(1), 0, 0, 0], [Fraction(-1), 0, 0, 0]]
        with pytest.raises(InvalidCorrelationError):
            Correlation(BIPARTITE_BINARY, table)

    def test_rejects_unnormalized_column(self):
        table = np.zeros((4, 4), dtype=object)
        table[0, :] = Fraction(1)
        table[1, 2] = Fraction(1, 2)
        with pytest.raises(InvalidCorrelationError):
            Correlation(BIPARTITE_BINARY, table)

    def test_double_mode_uses_tolerance(self):
        table = np.full((4, 4), 0.25)
        table[0, 0] += 1e-12
        p = Correlation(BIPARTITE_BINARY, table, NumericMode.DOUBLE)
        assert p.mode is NumericMode.DOUBLE

    def test_table_is_read_only(self):
        with pytest.raises(ValueError):
            pr_box().table[0, 0] = Fraction(0)

    def test_json_keeps_fractions(self):
        doc = pr_box().to_json()
        assert doc["table"][0][0] == "1/2"
        assert Correlation.from_json(doc).entry((0, 0), (0, 0)) == Fraction(1, 2)

    def test_from_json_parses_strings_in_double_mode(self):
        doc = qform_correlation(Fraction(1, 2)).to_json()
        doc["numeric"] = "double"
        p = Correlation.from_json(doc)
        assert p.table[3, 3] == pytest.approx(0.25)

    def test_vertex_roundtrip_through_correlation(self):
        v = Vertex.from_callable(BIPARTITE_BINARY, lambda a: (a[1], a[0]))
        assert correlation_to_vertex(vertex_to_correlation(v)) == v
        assert correlation_to_vertex(pr_box()) is None


class TestMixtures:
    def test_mix_of_vertices(self):
        v0 = Vertex(BIPARTITE_BINARY, (0, 0, 0, 0))
        v1 = Vertex(BIPARTITE_BINARY, (3, 3, 3, 3))
        p = mix([(Fraction(1, 3), vertex_to_correlation(v0)), (Fraction(2, 3), vertex_to_correlation(v1))])
        assert p.entry((0, 0), (1, 1)) == Fraction(1, 3)
        assert p.entry((1, 1), (0, 1)) == Fraction(2, 3)

    def test_float_weight_promotes_to_double(self):
        p = mix([(0.5, pr_box()), (0.5, pr_box())])
        assert p.mode is NumericMode.DOUBLE

    def test_rejects_bad_weights(self):
        with pytest.raises(InvalidCorrelationError):
            mix([(Fraction(1, 2), pr_box())])
        with pytest.raises(InvalidCorrelationError):
            mix([(Fraction(3, 2), pr_box()), (Fraction(-1, 2), pr_box())])
        with pytest.raises(InvalidCorrelationError):
            mix([])

    def test_rejects_weights_off_by_a_trillionth(self):
        nudged = Fraction(1, 2) + Fraction(1, 10 ** 12)
        with pytest.raises(InvalidCorrelationError):
            mix([(nudged, pr_box()), (Fraction(1, 2), pr_box())])
        with pytest.raises(InvalidCorrelationError):
            mix([("0.5000000000001", pr_box()), ("1/2", pr_box())])

    def test_rejects_mixed_scenarios(self):
        other = vertex_to_correlation(Vertex(TRIPARTITE_BINARY, (0,) * 8))
        with pytest.raises(ScenarioMismatchError):
            mix([(Fraction(1, 2), pr_box()), (Fraction(1, 2), other)])

    @given(rational_correlations())
    @settings(max_examples=50, deadline=None)
    def test_quantile_decomposition_reconstructs(self, p):
        pieces = quantile_decomposition(p)
        assert sum(w for w, _ in pieces) == 1
        assert len(pieces) <= p.scenario.n_outcomes * p.scenario.n_settings
        rebuilt = mix([(w, vertex_to_correlation(v)) for w, v in pieces])
        assert rebuilt.vector() == p.vector()

    def test_quantile_decomposition_double(self):
        p = qform_correlation(0.8)
        pieces = quantile_decomposition(p)
        assert sum(w for w, _ in pieces) == pytest.approx(1.0)
        rebuilt = mix([(w, vertex_to_correlation(v).as_mode(NumericMode.DOUBLE)) for w, v in pieces])
        assert np.allclose(rebuilt.table, p.table, atol=1e-12)


class TestSignalling:
    def test_marginals(self):
        m = marginal(pr_box(), 0)
        assert m.shape == (2, 4)
        assert all(v == Fraction(1, 2) for v in m.reshape(-1))
        with pytest.raises(IndexError):
            marginal(pr_box(), 2)

    def test_pr_box_is_non_signalling(self):
        assert is_non_signalling(pr_box())

    def test_swap_vertex_signals_both_ways(self):
        v = Vertex.from_callable(BIPARTITE_BINARY, lambda a: (a[1], a[0]))
        assert not is_non_signalling(vertex_to_correlation(v))
        assert signalling_graph(v).edges == frozenset({(0, 1), (1, 0)})

    def test_qform_half_is_product(self):
        assert is_non_signalling(qform_correlation(Fraction(1, 2)))
        assert not is_non_signalling(qform_correlation(Fraction(9, 10)))

    def test_qform_columns(self):
        p = qform_correlation(Fraction(3, 4))
        assert p.entry((1, 1), (0, 0)) == 1
        assert p.entry((0, 0), (1, 1)) == Fraction(3, 8)
        assert p.entry((0, 1), (1, 0)) == Fraction(3, 4)

    def test_one_way_edge_bits(self):
        # x2 = a1: arista 1→2, bit 0*2+1
        v = Vertex.from_callable(BIPARTITE_BINARY, lambda a: (0, a[0]))
        assert signalling_graph(v).mask == 1 << 1

    @given(tripartite_vertices())
    @settings(max_examples=100, deadline=None)
    def test_vectorized_masks_match_scalar_graph(self, v):
        space: FunctionSpace = v.scenario.space
        mask = signalling_edge_masks(space, np.array([v.f]))[0]
        assert int(mask) == signalling_graph(v).mask
