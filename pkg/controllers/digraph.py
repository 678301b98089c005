# controllers/digraph.py
"""
Grafos dirigidos sobre partes: estructuras causales y clases de señalización.
Los nodos son 0..n-1 internamente; el JSON usa índices desde 1.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, FrozenSet, Iterable, List, Sequence, Set, Tuple

import networkx as nx
import numpy as np

from common.errors import CapExceededError
from config import MAX_CANONICAL_NODES, MAX_CYCLE_NODES

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


@dataclass(frozen=True)
class Digraph:
    """Grafo dirigido sin bucles; aristas (k, l) con k ≠ l."""
    n: int
    edges: FrozenSet[Edge] = frozenset()

    def __post_init__(self):
        edges = frozenset((int(k), int(l)) for k, l in self.edges)
        for k, l in edges:
            if k == l:
                raise ValueError(f"self-loop on node {k}")
            if not (0 <= k < self.n and 0 <= l < self.n):
                raise ValueError(f"edge {(k, l)} outside 0..{self.n - 1}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge], one_based: bool = False) -> "Digraph":
        shift = 1 if one_based else 0
        return cls(n, frozenset((k - shift, l - shift) for k, l in edges))

    @classmethod
    def from_mask(cls, n: int, mask: int) -> "Digraph":
        return cls(n, frozenset((k, l) for k in range(n) for l in range(n)
                                if k != l and (mask >> (k * n + l)) & 1))

    @property
    def mask(self) -> int:
        return sum(1 << (k * self.n + l) for k, l in self.edges)

    def parents(self, node: int) -> Set[int]:
        return {k for k, l in self.edges if l == node}

    def children(self, node: int) -> Set[int]:
        return {l for k, l in self.edges if k == node}

    def relabel(self, permutation: Sequence[int]) -> "Digraph":
        """Nodo k pasa a llamarse permutation[k]."""
        return Digraph(self.n, frozenset((permutation[k], permutation[l]) for k, l in self.edges))

    def induced(self, nodes: Iterable[int]) -> Set[Edge]:
        keep = set(nodes)
        return {(k, l) for k, l in self.edges if k in keep and l in keep}

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(sorted(self.edges))
        return graph

    def is_acyclic(self) -> bool:
        return nx.is_directed_acyclic_graph(self.to_networkx())

    def to_json(self) -> Dict[str, Any]:
        return {"n": self.n, "edges": [[k + 1, l + 1] for k, l in sorted(self.edges)]}

    @classmethod
    def from_json(cls, doc: Dict[str, Any]) -> "Digraph":
        return cls.from_edges(int(doc["n"]), [tuple(e) for e in doc["edges"]], one_based=True)


# =============================================================================
# CICLOS
# =============================================================================

def _rotate(cycle: Sequence[int]) -> Tuple[int, ...]:
    start = cycle.index(min(cycle))
    return tuple(cycle[start:]) + tuple(cycle[:start])


def directed_cycles(g: Digraph) -> List[Tuple[int, ...]]:
    """Todos los ciclos dirigidos simples, rotados a su nodo mínimo, en orden (longitud, secuencia)."""
    if g.n > MAX_CYCLE_NODES:
        raise CapExceededError(f"cycle enumeration refused for {g.n} > {MAX_CYCLE_NODES} nodes")
    cycles = {_rotate(list(c)) for c in nx.simple_cycles(g.to_networkx())}
    return sorted(cycles, key=lambda c: (len(c), c))


def _cycle_has_siblings(g: Digraph, cycle: Sequence[int]) -> bool:
    parents = {node: g.parents(node) for node in cycle}
    return any(parents[u] & parents[v] for u, v in itertools.combinations(cycle, 2))


def has_siblings_on_cycles(g: Digraph) -> bool:
    """Cada ciclo dirigido contiene dos nodos con un padre común."""
    return all(_cycle_has_siblings(g, cycle) for cycle in directed_cycles(g))


def is_chordless_soc(g: Digraph) -> bool:
    """Siblings-on-cycles y además cada ciclo es inducido."""
    cycles = directed_cycles(g)
    if not all(_cycle_has_siblings(g, cycle) for cycle in cycles):
        return False
    return all(len(g.induced(cycle)) == len(cycle) for cycle in cycles)


def has_root(g: Digraph) -> bool:
    """Algún nodo sin padres."""
    return any(not g.parents(node) for node in range(g.n))


# =============================================================================
# CLASES DE SEÑALIZACIÓN
# =============================================================================

@dataclass(frozen=True, order=True)
class SignallingClass:
    """Forma canónica: máscara de adyacencia mínima sobre todas las permutaciones."""
    n: int
    key: int

    def digraph(self) -> Digraph:
        return Digraph.from_mask(self.n, self.key)

    @property
    def label(self) -> str:
        return signalling_class_label(self)


def _relabel_mask(n: int, mask: int, permutation: Sequence[int]) -> int:
    out = 0
    for k in range(n):
        for l in range(n):
            if k != l and (mask >> (k * n + l)) & 1:
                out |= 1 << (permutation[k] * n + permutation[l])
    return out


@lru_cache(maxsize=None)
def canonical_mask(n: int, mask: int) -> int:
    return min(_relabel_mask(n, mask, perm) for perm in itertools.permutations(range(n)))


def signalling_class(g: Digraph) -> SignallingClass:
    if g.n > MAX_CANONICAL_NODES:
        raise CapExceededError(f"canonical form refused for {g.n} > {MAX_CANONICAL_NODES} nodes")
    return SignallingClass(g.n, canonical_mask(g.n, g.mask))


@lru_cache(maxsize=None)
def canonical_table(n: int) -> np.ndarray:
    """Tabla máscara → clave canónica para todos los grafos de n ≤ 4 nodos (uso vectorizado)."""
    if n > 4:
        raise CapExceededError("canonical lookup table only built for n <= 4")
    table = np.zeros(1 << (n * n), dtype=np.int64)
    slots = [(k, l) for k in range(n) for l in range(n) if k != l]
    for chosen in range(1 << len(slots)):
        mask = 0
        for bit, (k, l) in enumerate(slots):
            if (chosen >> bit) & 1:
                mask |= 1 << (k * n + l)
        table[mask] = canonical_mask(n, mask)
    return table


_NAMED_GRAPHS: Dict[int, List[Tuple[str, List[Edge]]]] = {
    1: [("single", [])],
    2: [
        ("empty", []),
        ("one-way", [(0, 1)]),
        ("two-way", [(0, 1), (1, 0)]),
    ],
    3: [
        ("empty", []),
        ("single-edge", [(0, 1)]),
        ("single-2-cycle", [(0, 1), (1, 0)]),
        ("chain", [(0, 1), (1, 2)]),
        ("common-cause", [(1, 0), (1, 2)]),
        ("common-effect", [(0, 1), (2, 1)]),
        ("transitive", [(0, 1), (0, 2), (1, 2)]),
        ("2-cycle-with-common-parent", [(0, 1), (1, 0), (2, 0), (2, 1)]),
        ("2-cycle-through-chain", [(0, 1), (1, 2), (0, 2), (2, 0)]),
        ("2-cycle-with-common-child", [(0, 1), (2, 1), (0, 2), (2, 0)]),
        ("2-cycle-with-receiver", [(0, 1), (1, 2), (2, 1)]),
        ("2-cycle-with-sender", [(1, 0), (1, 2), (2, 1)]),
        ("double-2-cycle", [(0, 1), (1, 0), (1, 2), (2, 1)]),
        ("double-2-cycle-with-edge", [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2)]),
        ("complete-bidirectional", [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]),
        ("3-cycle", [(0, 1), (1, 2), (2, 0)]),
    ],
}


@lru_cache(maxsize=None)
def _labels_for(n: int) -> Dict[int, str]:
    return {
        signalling_class(Digraph(n, frozenset(edges))).key: name
        for name, edges in _NAMED_GRAPHS.get(n, [])
    }


def signalling_class_label(cls: SignallingClass) -> str:
    """Nombre descriptivo para n ≤ 3; clave hexadecimal en otro caso."""
    return _labels_for(cls.n).get(cls.key, f"class-{cls.n}-{cls.key:#x}")


def named_class(n: int, name: str) -> SignallingClass:
    for label, edges in _NAMED_GRAPHS.get(n, []):
        if label == name:
            return signalling_class(Digraph(n, frozenset(edges)))
    raise KeyError(f"no named class {name!r} on {n} nodes")
