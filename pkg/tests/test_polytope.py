"""
Pertenencia a envolturas convexas y descomposición de coste mínimo.
"""
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from common.errors import InfeasibleInputError
from controllers.causality import causal_codes, causal_mask
from controllers.polytope import (
    DIRECT_LIMIT, CodePool, hull_membership, min_cost_decomposition, verify_dual, verify_separation,
)
from controllers.scenario_core import (
    BIPARTITE_BINARY, Scenario, Vertex, mix, pr_box, vertex_to_correlation,
)

SWAP = Vertex.from_callable(BIPARTITE_BINARY, lambda a: (a[1], a[0]))


def _rebuild(scenario, weights):
    return mix([(w, vertex_to_correlation(Vertex.from_code(scenario, code))) for w, code, *_ in weights])


class TestCodePool:
    def test_explicit_codes(self):
        pool = CodePool(BIPARTITE_BINARY.space, codes=np.array([3, 7, 9]), flagged=np.array([False, True, False]))
        assert pool.size == 3
        assert pool.contains(7) and not pool.contains(8)
        assert pool.is_flagged(7) and not pool.is_flagged(3)
        assert pool.all_codes().tolist() == [3, 7, 9]

    def test_flags_must_align(self):
        with pytest.raises(ValueError):
            CodePool(BIPARTITE_BINARY.space, codes=np.array([1, 2]), flagged=np.array([True]))

    def test_allowed_mask(self):
        space = BIPARTITE_BINARY.space
        allowed = causal_mask(space, np.arange(space.n_functions))
        pool = CodePool(space, allowed=allowed)
        assert pool.size == 112
        assert not pool.contains(SWAP.code)
        assert pool.contains(-1) is False
        chunks = list(pool.chunks(chunk=100))
        assert sum(len(codes) for codes, _ in chunks) == 112

    def test_full_pool(self):
        pool = CodePool.full(BIPARTITE_BINARY.space)
        assert pool.size == 256
        assert pool.contains(255)
        assert not pool.is_flagged(10)


class TestHullMembership:
    def test_pr_box_is_causal(self):
        pool = CodePool(BIPARTITE_BINARY.space, codes=causal_codes(BIPARTITE_BINARY))
        result = hull_membership(pr_box(), pool)
        assert result.member
        assert sum(w for w, _ in result.weights) == 1
        assert all(pool.contains(code) for _, code in result.weights)
        assert _rebuild(BIPARTITE_BINARY, result.weights).vector() == pr_box().vector()

    def test_swap_is_separated(self):
        p = vertex_to_correlation(SWAP)
        pool = CodePool(BIPARTITE_BINARY.space, codes=causal_codes(BIPARTITE_BINARY))
        result = hull_membership(p, pool)
        assert not result.member
        assert verify_separation(p, result, pool)
        assert len(result.farkas_matrix(BIPARTITE_BINARY.space)) == 4

    def test_member_result_is_not_a_separation(self):
        pool = CodePool.full(BIPARTITE_BINARY.space)
        result = hull_membership(pr_box(), pool)
        assert not verify_separation(pr_box(), result, pool)

    @given(st.lists(st.integers(0, 4 ** 9 - 1), min_size=1, max_size=4, unique=True))
    @settings(max_examples=10, deadline=None)
    def test_column_generation_on_large_pool(self, codes):
        s = Scenario.uniform(2, 3, 2)
        assert s.n_vertices > DIRECT_LIMIT
        p = mix([(Fraction(1, len(codes)), vertex_to_correlation(Vertex.from_code(s, c))) for c in codes])
        result = hull_membership(p, CodePool.full(s.space))
        assert result.member
        assert _rebuild(s, result.weights).vector() == p.vector()

    @pytest.mark.slow
    def test_column_generation_separates(self):
        s = Scenario.uniform(2, 3, 2)
        swap = Vertex.from_callable(s, lambda a: (a[1] % 2, a[0] % 2))
        p = vertex_to_correlation(swap)
        pool = CodePool(s.space, codes=causal_codes(s))
        assert pool.size > DIRECT_LIMIT
        result = hull_membership(p, pool)
        assert not result.member
        assert verify_separation(p, result, pool)


class TestMinCost:
    def _bipartite_pool(self):
        space = BIPARTITE_BINARY.space
        return CodePool.full(space, flagged=~causal_mask(space, np.arange(space.n_functions)))

    def test_causal_input_costs_nothing(self):
        pool = self._bipartite_pool()
        result = min_cost_decomposition(pr_box(), pool)
        assert result.objective == 0
        assert not any(flag for _, _, flag in result.weights)
        assert verify_dual(pr_box(), result, pool)

    def test_flagged_vertex_costs_one(self):
        pool = self._bipartite_pool()
        p = vertex_to_correlation(SWAP)
        result = min_cost_decomposition(p, pool)
        assert result.objective == 1
        assert result.weights == ((Fraction(1), SWAP.code, True),)
        assert verify_dual(p, result, pool)

    def test_half_mixture(self):
        pool = self._bipartite_pool()
        p = mix([(Fraction(1, 2), vertex_to_correlation(SWAP)), (Fraction(1, 2), pr_box())])
        result = min_cost_decomposition(p, pool)
        assert result.objective <= Fraction(1, 2)
        assert _rebuild(BIPARTITE_BINARY, result.weights).vector() == p.vector()
        assert verify_dual(p, result, pool)

    def test_outside_hull_raises(self):
        pool = CodePool(BIPARTITE_BINARY.space, codes=np.array([0]))
        with pytest.raises(InfeasibleInputError):
            min_cost_decomposition(pr_box(), pool)

    def test_large_pool_without_quantile_vertices(self):
        s = Scenario.uniform(2, 3, 2)
        first = Vertex(s, (1, 2) + (0,) * 7)
        second = Vertex(s, (2, 1) + (0,) * 7)
        p = mix([(Fraction(1, 2), vertex_to_correlation(first)), (Fraction(1, 2), vertex_to_correlation(second))])
        quantile = {Vertex(s, (1, 1) + (0,) * 7).code, Vertex(s, (2, 2) + (0,) * 7).code}
        codes = [c for c in range(DIRECT_LIMIT + 1000) if c not in quantile]
        pool = CodePool(s.space, codes=np.array(codes), flagged=np.array([c == first.code for c in codes]))
        assert pool.size > DIRECT_LIMIT
        result = min_cost_decomposition(p, pool)
        assert result.objective == Fraction(1, 2)
        assert all(pool.contains(code) for _, code, _ in result.weights)
        assert _rebuild(s, result.weights).vector() == p.vector()
        assert verify_dual(p, result, pool)

    def test_tampered_duals_fail(self):
        pool = self._bipartite_pool()
        p = vertex_to_correlation(SWAP)
        result = min_cost_decomposition(p, pool)
        bogus = type(result)(result.objective, result.weights, tuple(d + 1 for d in result.duals),
                             result.mode, result.rounds, result.certified)
        assert not verify_dual(p, bogus, pool)
