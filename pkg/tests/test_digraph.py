"""
Ciclos dirigidos, siblings-on-cycles y formas canónicas de clases de señalización.
"""
import itertools

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from common.errors import CapExceededError
from controllers.digraph import (
    Digraph, canonical_mask, canonical_table, directed_cycles, has_root, has_siblings_on_cycles,
    is_chordless_soc, named_class, signalling_class, signalling_class_label,
)
from tests.strategies import digraphs

THREE_CYCLE = Digraph(3, frozenset({(0, 1), (1, 2), (2, 0)}))
COMPLETE = Digraph(3, frozenset((k, l) for k in range(3) for l in range(3) if k != l))


class TestDigraph:
    def test_rejects_self_loops_and_out_of_range(self):
        with pytest.raises(ValueError):
            Digraph(2, frozenset({(0, 0)}))
        with pytest.raises(ValueError):
            Digraph(2, frozenset({(0, 2)}))

    def test_json_is_one_based(self):
        g = Digraph(3, frozenset({(0, 1), (2, 0)}))
        assert g.to_json() == {"n": 3, "edges": [[1, 2], [3, 1]]}
        assert Digraph.from_json(g.to_json()) == g

    def test_mask_and_parents(self):
        g = Digraph.from_edges(2, [(1, 2)], one_based=True)
        assert g.mask == 2
        assert Digraph.from_mask(2, 2) == g
        assert g.parents(1) == {0}
        assert g.children(0) == {1}

    def test_networkx_view(self):
        graph = THREE_CYCLE.to_networkx()
        assert isinstance(graph, nx.DiGraph)
        assert sorted(graph.edges) == [(0, 1), (1, 2), (2, 0)]
        assert not THREE_CYCLE.is_acyclic()
        assert Digraph(3, frozenset({(0, 1), (1, 2)})).is_acyclic()


class TestCycles:
    def test_three_cycle(self):
        assert directed_cycles(THREE_CYCLE) == [(0, 1, 2)]

    def test_complete_graph_cycles_sorted(self):
        cycles = directed_cycles(COMPLETE)
        assert cycles == [(0, 1), (0, 2), (1, 2), (0, 1, 2), (0, 2, 1)]

    def test_acyclic_has_no_cycles(self):
        assert directed_cycles(Digraph(4, frozenset({(0, 1), (1, 2), (0, 3)}))) == []

    def test_cycle_enumeration_cap(self):
        with pytest.raises(CapExceededError):
            directed_cycles(Digraph(13))


class TestSiblingsOnCycles:
    def test_three_cycle_fails(self):
        assert not has_siblings_on_cycles(THREE_CYCLE)

    def test_two_way_bipartite_fails(self):
        assert not has_siblings_on_cycles(Digraph(2, frozenset({(0, 1), (1, 0)})))

    def test_complete_graph_has_siblings_but_chords(self):
        assert has_siblings_on_cycles(COMPLETE)
        assert not is_chordless_soc(COMPLETE)

    def test_two_cycle_with_common_parent_is_chordless(self):
        g = Digraph(3, frozenset({(0, 1), (1, 0), (2, 0), (2, 1)}))
        assert has_siblings_on_cycles(g)
        assert is_chordless_soc(g)

    def test_acyclic_graphs_trivially_pass(self):
        g = Digraph(3, frozenset({(0, 1), (1, 2)}))
        assert has_siblings_on_cycles(g)
        assert is_chordless_soc(g)
        assert has_root(g)
        assert not has_root(COMPLETE)


class TestSignallingClasses:
    @given(digraphs(), st.permutations(range(3)))
    @settings(max_examples=200)
    def test_class_is_relabelling_invariant(self, g, perm):
        assert signalling_class(g) == signalling_class(g.relabel(perm))

    @given(digraphs(n=4))
    @settings(max_examples=100, deadline=None)
    def test_lookup_table_matches_canonical_mask(self, g):
        assert canonical_table(4)[g.mask] == canonical_mask(4, g.mask)

    @pytest.mark.parametrize("n, expected", [(1, 1), (2, 3), (3, 16), (4, 218)])
    def test_number_of_classes(self, n, expected):
        slots = [(k, l) for k in range(n) for l in range(n) if k != l]
        keys = {
            signalling_class(Digraph(n, frozenset(edges))).key
            for r in range(len(slots) + 1)
            for edges in itertools.combinations(slots, r)
        }
        assert len(keys) == expected

    def test_three_node_labels_are_distinct(self):
        slots = [(k, l) for k in range(3) for l in range(3) if k != l]
        classes = {
            signalling_class(Digraph(3, frozenset(edges)))
            for r in range(len(slots) + 1)
            for edges in itertools.combinations(slots, r)
        }
        labels = {cls.label for cls in classes}
        assert len(labels) == 16
        assert not any(label.startswith("class-") for label in labels)

    def test_named_classes(self):
        assert named_class(2, "one-way") == signalling_class(Digraph(2, frozenset({(1, 0)})))
        assert len(named_class(3, "3-cycle").digraph().edges) == 3
        with pytest.raises(KeyError):
            named_class(3, "no-such-class")

    def test_unnamed_label_uses_key(self):
        cls = signalling_class(Digraph(4, frozenset({(0, 1)})))
        assert signalling_class_label(cls).startswith("class-4-")

    def test_canonical_cap(self):
        with pytest.raises(CapExceededError):
            signalling_class(Digraph(9))
