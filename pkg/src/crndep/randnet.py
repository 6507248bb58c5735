"""Random instances for the property suites. Every generator takes a ``numpy.random.Generator``."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .decomp import finest_independent_decomposition
from .graph import Digraph, graph_stats
from .massaction import MassActionSystem, ReactionNetwork
from .polycore import PolySystem
from .ratlin import RatMatrix, kernel_basis


def random_rational(rng: np.random.Generator, top: int = 9) -> Fraction:
    return Fraction(int(rng.integers(1, top + 1)), int(rng.integers(1, top + 1)))


def random_rates(rng: np.random.Generator, count: int) -> tuple[Fraction, ...]:
    return tuple(random_rational(rng) for _ in range(count))


def _distinct_complexes(rng, n, count, top=3):
    seen: set[tuple[int, ...]] = set()
    while len(seen) < count:
        seen.add(tuple(int(x) for x in rng.integers(0, top + 1, size=n)))
    out = list(seen)
    rng.shuffle(out)
    return [tuple(Fraction(x) for x in c) for c in out]


def _random_edges(rng, nv, p=0.35, connected=False):
    pairs = [(a, b) for a in range(nv) for b in range(nv) if a != b]
    edges = {pairs[i] for i in range(len(pairs)) if rng.random() < p}
    if connected:
        order = list(rng.permutation(nv))
        for i in range(1, nv):
            a, b = int(order[i]), int(order[int(rng.integers(0, i))])
            if (a, b) not in edges and (b, a) not in edges:
                edges.add((a, b) if rng.random() < 0.5 else (b, a))
    touched = {v for e in edges for v in e}
    for v in range(nv):
        if v not in touched:
            w = int(rng.choice([u for u in range(nv) if u != v]))
            edges.add((v, w) if rng.random() < 0.5 else (w, v))
    return tuple(sorted(edges))


def random_network(
    rng: np.random.Generator, n_max: int = 4, v_max: int = 6, connected: bool = False
) -> MassActionSystem:
    """Random mass-action system with ``n <= n_max`` species and ``|V| <= v_max`` vertices."""
    n = int(rng.integers(1, n_max + 1))
    nv = int(rng.integers(2, min(v_max, 4**n) + 1))
    complexes = _distinct_complexes(rng, n, nv)
    edges = _random_edges(rng, nv, connected=connected)
    net = ReactionNetwork(tuple(f"X{i + 1}" for i in range(n)), Digraph(nv, edges), tuple(complexes))
    return MassActionSystem(net, random_rates(rng, len(edges)))


def random_weakly_reversible(rng: np.random.Generator, n_max: int = 4, v_max: int = 6) -> MassActionSystem:
    """Every edge gets its reverse, so each component is strongly connected."""
    net = random_network(rng, n_max, v_max).network
    edges = tuple(sorted(set(net.edges) | {(b, a) for a, b in net.edges}))
    net = ReactionNetwork(net.species, Digraph(net.vertex_count, edges), net.complexes)
    return MassActionSystem(net, random_rates(rng, len(edges)))


def _indecomposable_block(rng, n, v_max):
    while True:
        nv = int(rng.integers(2, min(v_max, 4**n) + 1))
        complexes = _distinct_complexes(rng, n, nv)
        edges = _random_edges(rng, nv, p=0.4, connected=True)
        net = ReactionNetwork(tuple(f"Y{i}" for i in range(n)), Digraph(nv, edges), tuple(complexes))
        sys = MassActionSystem(net, (1,) * len(edges))
        if finest_independent_decomposition(sys).ell == 1:
            return complexes, edges


def random_two_block_network(rng: np.random.Generator, v_max: int = 5):
    """Two connected, indecomposable blocks on disjoint species.

    When both blocks contain the zero complex it becomes one shared vertex.
    Returns the system and the expected edge partition.
    """
    n1, n2 = int(rng.integers(1, 3)), int(rng.integers(1, 3))
    c1, e1 = _indecomposable_block(rng, n1, v_max)
    c2, e2 = _indecomposable_block(rng, n2, v_max)
    z = Fraction(0)
    full = [tuple(c) + (z,) * n2 for c in c1] + [(z,) * n1 + tuple(c) for c in c2]
    index: dict[tuple, int] = {}
    remap = []
    for c in full:
        index.setdefault(c, len(index))
        remap.append(index[c])
    edges = [(remap[a], remap[b]) for a, b in e1] + [(remap[len(c1) + a], remap[len(c1) + b]) for a, b in e2]
    complexes = [None] * len(index)
    for c, i in index.items():
        complexes[i] = c
    species = tuple(f"X{i + 1}" for i in range(n1 + n2))
    net = ReactionNetwork(species, Digraph(len(complexes), tuple(edges)), tuple(complexes))
    sys = MassActionSystem(net, random_rates(rng, len(edges)))
    blocks = (tuple(range(len(e1))), tuple(range(len(e1), len(e1) + len(e2))))
    return sys, blocks


def random_one_component_digraph(rng: np.random.Generator, v_max: int = 8):
    """Connected simple digraph with at least one terminal component made of source vertices."""
    while True:
        nv = int(rng.integers(2, v_max + 1))
        edges = _random_edges(rng, nv, p=float(rng.uniform(0.1, 0.5)), connected=True)
        g = Digraph(nv, edges)
        stats = graph_stats(g)
        if stats.l == 1 and stats.t_prime >= 1:
            return g, random_rates(rng, len(edges))


def random_strongly_connected(rng: np.random.Generator, v_max: int = 8):
    nv = int(rng.integers(2, v_max + 1))
    order = [int(x) for x in rng.permutation(nv)]
    edges = {(order[i], order[(i + 1) % nv]) for i in range(nv)} if nv > 2 else {(0, 1), (1, 0)}
    for a in range(nv):
        for b in range(nv):
            if a != b and rng.random() < 0.2:
                edges.add((a, b))
    g = Digraph(nv, tuple(sorted(edges)))
    return g, random_rates(rng, len(g.edges))


def random_d1_system(rng: np.random.Generator, m_max: int = 5) -> PolySystem:
    """One class, ``d = dim P = 1``: ``ker A`` is spanned by two nonnegative vertices
    ``y1, y2`` with disjoint zero sets, and ``ker [B; 1^T]`` by a random integer ``b``."""
    m = int(rng.integers(2, m_max + 1))
    while True:
        y1 = rng.integers(0, 4, size=m)
        y2 = rng.integers(0, 4, size=m)
        if (y1 + y2).min() > 0 and (y1 == 0).any() and (y2 == 0).any():
            break
    Y = RatMatrix([[int(a), int(b)] for a, b in zip(y1, y2)], cols=2)
    A = kernel_basis(Y.T).as_matrix().T
    if A.rows == 0:
        A = RatMatrix.zeros(1, m)
    while True:
        b = rng.integers(-3, 4, size=m)
        b[-1] = -b[:-1].sum()
        if np.any(b != 0) and abs(int(b[-1])) <= 6:
            break
    constraint = RatMatrix([[int(x) for x in b], [1] * m], cols=m)
    rows = kernel_basis(constraint).as_matrix().T
    if rows.rows == 0:
        rows = RatMatrix.zeros(1, m)
    c = tuple(Fraction(repr(float(np.exp(rng.normal(0.0, 1.0))))) for _ in range(m))
    return PolySystem(A, rows, (m,), c)


def random_birch_instance(rng: np.random.Generator, n_max: int = 6):
    """``(x_prime, x_star, S)`` with ``S`` given by rational spanning columns."""
    n = int(rng.integers(1, n_max + 1))
    r = int(rng.integers(0, n + 1))
    S = RatMatrix([[int(x) for x in row] for row in rng.integers(-2, 3, size=(n, r))], cols=r)
    x_prime = np.exp(rng.normal(0.0, 1.0, size=n))
    x_star = np.exp(rng.normal(0.0, 1.0, size=n))
    return x_prime, x_star, S
