"""Directed-graph structure of a reaction network.

Vertices are ``0..vertex_count-1`` and keep the caller's order everywhere; edge
columns follow the order of :attr:`Digraph.edges`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import networkx as nx

from .ratlin import RatMatrix, rank


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Digraph:
    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        object.__setattr__(self, "edges", edges)
        seen = set()
        for a, b in edges:
            if not (0 <= a < self.vertex_count and 0 <= b < self.vertex_count):
                raise GraphError(f"edge {a}->{b} references a missing vertex")
            if a == b:
                raise GraphError(f"self-loop at vertex {a}")
            if (a, b) in seen:
                raise GraphError(f"repeated edge {a}->{b}")
            seen.add((a, b))

    @property
    def sources(self) -> tuple[int, ...]:
        """Source vertices (tails of some edge) in ascending order."""
        return tuple(sorted({a for a, _ in self.edges}))

    @property
    def non_sources(self) -> tuple[int, ...]:
        src = set(self.sources)
        return tuple(v for v in range(self.vertex_count) if v not in src)

    def out_degree(self, v: int) -> int:
        return sum(1 for a, _ in self.edges if a == v)

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.vertex_count))
        g.add_edges_from(self.edges)
        return g

    def subgraph(self, vertices: Sequence[int]) -> tuple[Digraph, tuple[int, ...]]:
        """Induced subgraph on ``vertices`` (re-indexed in ascending order)."""
        keep = tuple(sorted(set(vertices)))
        index = {v: i for i, v in enumerate(keep)}
        edges = tuple((index[a], index[b]) for a, b in self.edges if a in index and b in index)
        return Digraph(len(keep), edges), keep


@dataclass(frozen=True)
class GraphStats:
    l: int
    t: int
    t_prime: int
    sccs: tuple[tuple[int, ...], ...]
    terminal_sccs: tuple[tuple[int, ...], ...]
    components: tuple[tuple[int, ...], ...]
    weakly_reversible: bool


def incidence_matrices(g: Digraph) -> tuple[RatMatrix, RatMatrix]:
    """Incidence matrix ``I_E`` (V x E) and source matrix ``I_Es`` (V_s x E)."""
    nv, ne = g.vertex_count, len(g.edges)
    inc = [[0] * ne for _ in range(nv)]
    for j, (a, b) in enumerate(g.edges):
        inc[a][j] = -1
        inc[b][j] = 1
    src = g.sources
    row_of = {v: i for i, v in enumerate(src)}
    s = [[0] * ne for _ in range(len(src))]
    for j, (a, _) in enumerate(g.edges):
        s[row_of[a]][j] = 1
    return RatMatrix(inc, cols=ne), RatMatrix(s, cols=ne)


def graph_stats(g: Digraph) -> GraphStats:
    nxg = g.to_networkx()
    components = tuple(
        sorted((tuple(sorted(c)) for c in nx.weakly_connected_components(nxg)), key=min)
    )
    sccs = tuple(
        sorted((tuple(sorted(c)) for c in nx.strongly_connected_components(nxg)), key=min)
    )
    scc_of = {v: i for i, c in enumerate(sccs) for v in c}
    leaves = [True] * len(sccs)
    for a, b in g.edges:
        if scc_of[a] != scc_of[b]:
            leaves[scc_of[a]] = False
    terminal = tuple(c for c, leaf in zip(sccs, leaves) if leaf)
    # a terminal singleton has out-degree zero, i.e. it is a non-source vertex
    t_prime = sum(1 for c in terminal if not (len(c) == 1 and g.out_degree(c[0]) == 0))
    weakly_reversible = all(scc_of[a] == scc_of[b] for a, b in g.edges)

    inc, _ = incidence_matrices(g)
    if inc.rows - rank(inc) != len(components):
        raise AssertionError("dim ker I_E^T differs from the component count")
    return GraphStats(
        l=len(components),
        t=len(terminal),
        t_prime=t_prime,
        sccs=sccs,
        terminal_sccs=terminal,
        components=components,
        weakly_reversible=weakly_reversible,
    )


def complete_digraph(n: int) -> Digraph:
    return Digraph(n, tuple((a, b) for a in range(n) for b in range(n) if a != b))


def auxiliary_edges(g: Digraph, vertices: Sequence[int] | None = None) -> tuple[tuple[int, int], ...]:
    """Spanning-tree edges (BFS from the lowest vertex) of the undirected graph on ``vertices``."""
    verts = sorted(set(range(g.vertex_count) if vertices is None else vertices))
    if not verts:
        return ()
    allowed = set(verts)
    adj: dict[int, list[int]] = {v: [] for v in verts}
    for a, b in g.edges:
        if a in allowed and b in allowed:
            adj[a].append(b)
            adj[b].append(a)
    root = verts[0]
    seen = {root}
    queue = deque([root])
    tree = []
    while queue:
        v = queue.popleft()
        for w in sorted(adj[v]):
            if w not in seen:
                seen.add(w)
                tree.append((v, w))
                queue.append(w)
    if len(seen) != len(verts):
        raise GraphError("auxiliary graph requires connected vertex set")
    return tuple(tree)


def auxiliary_incidence(g: Digraph, vertices: Sequence[int] | None = None) -> RatMatrix:
    """Incidence matrix (rows: ``vertices`` ascending) of a spanning tree with ``|V|-1`` edges.

    Its image equals the image of the incidence matrix of ``g`` restricted to
    the (connected) vertex subset.
    """
    verts = sorted(set(range(g.vertex_count) if vertices is None else vertices))
    tree = auxiliary_edges(g, verts)
    row_of = {v: i for i, v in enumerate(verts)}
    data = [[Fraction(0)] * len(tree) for _ in verts]
    for j, (a, b) in enumerate(tree):
        data[row_of[a]][j] = Fraction(-1)
        data[row_of[b]][j] = Fraction(1)
    return RatMatrix(data, cols=len(tree))


def difference_incidence(n: int) -> RatMatrix:
    """Auxiliary incidence on ``n`` vertices with no connectivity constraint (a star at 0)."""
    return auxiliary_incidence(complete_digraph(n)) if n > 1 else RatMatrix.zeros(n, 0)
