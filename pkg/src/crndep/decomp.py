"""Independent-subnetwork decomposition and the combined (starred) matrices.

The finest decomposition comes from the canonical kernel basis of the
stoichiometric matrix: edges that share the support of a basis vector belong
to the same class. A canonical basis vector never straddles two blocks of a
valid direct-product partition, so the resulting classes refine every such
partition. The dimension certificate ``sum_j dim ker N^j = dim ker N`` is
re-checked on every run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .graph import Digraph
from .massaction import (
    MassActionSystem,
    ReactionNetwork,
    StructuralReport,
    build_matrices,
    structural_report,
)
from .ratlin import (
    RatMatrix,
    hstack,
    image_contains,
    kernel_basis,
    rank,
)


class NotApplicableError(ValueError):
    """A theorem or check whose hypotheses do not hold for the input."""


@dataclass(frozen=True)
class Subnetwork:
    index: int
    edges: tuple[int, ...]
    vertices: tuple[int, ...]
    sources: tuple[int, ...]
    system: MassActionSystem
    report: StructuralReport

    @property
    def connected(self) -> bool:
        return self.report.l == 1

    @property
    def delta(self) -> int:
        return self.report.delta

    @property
    def d(self) -> int:
        return self.report.d

    @property
    def t(self) -> int:
        return self.report.t

    @property
    def t_prime(self) -> int:
        return self.report.t_prime


@dataclass(frozen=True)
class CombinedMatrices:
    """Block matrices over the disjoint unions of (source) vertex sets.

    ``vertex_labels[r]`` is ``(class, parent vertex)`` for row ``r`` of ``I_E``;
    ``source_labels`` does the same for the columns of ``R_k`` and ``Gamma_k``.
    Edge columns keep the parent edge order.
    """

    I_E: RatMatrix
    I_Es: RatMatrix
    R_k: RatMatrix
    Y: RatMatrix
    Y_s: RatMatrix
    I_Vs: RatMatrix
    Gamma_k: RatMatrix
    vertex_labels: tuple[tuple[int, int], ...]
    source_labels: tuple[tuple[int, int], ...]
    class_sizes: tuple[int, ...]


@dataclass(frozen=True)
class Decomposition:
    system: MassActionSystem
    edge_partition: tuple[tuple[int, ...], ...]
    subnetworks: tuple[Subnetwork, ...]
    kernel_dim: int
    connected_ok: bool
    independent_ok: bool

    @property
    def ell(self) -> int:
        return len(self.edge_partition)

    @property
    def combined(self) -> CombinedMatrices:
        return combined_matrices(self)


def _edge_classes(sys: MassActionSystem) -> tuple[tuple[int, ...], ...]:
    ne = len(sys.network.edges)
    parent = list(range(ne))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for v in kernel_basis(build_matrices(sys).N):
        support = [j for j, x in enumerate(v) if x != 0]
        for j in support[1:]:
            a, b = find(support[0]), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for j in range(ne):
        groups.setdefault(find(j), []).append(j)
    return tuple(sorted((tuple(g) for g in groups.values()), key=min))


def subnetwork(sys: MassActionSystem, edges: Sequence[int], index: int = 0) -> Subnetwork:
    """The mass-action system induced by a subset of edges, vertices re-indexed ascending."""
    net = sys.network
    edges = tuple(sorted(edges))
    verts = tuple(sorted({v for j in edges for v in net.edges[j]}))
    pos = {v: i for i, v in enumerate(verts)}
    graph = Digraph(len(verts), tuple((pos[net.edges[j][0]], pos[net.edges[j][1]]) for j in edges))
    sub_net = ReactionNetwork(net.species, graph, tuple(net.complexes[v] for v in verts))
    sub = MassActionSystem(
        sub_net,
        tuple(sys.k[j] for j in edges),
        tuple(sys.rate_names[j] for j in edges),
    )
    return Subnetwork(
        index=index,
        edges=edges,
        vertices=verts,
        sources=tuple(verts[i] for i in graph.sources),
        system=sub,
        report=structural_report(sub),
    )


def decompose(sys: MassActionSystem, partition: Sequence[Sequence[int]]) -> Decomposition:
    """Decomposition for a given edge partition (checked, not searched)."""
    ne = len(sys.network.edges)
    blocks = tuple(tuple(sorted(b)) for b in partition if len(b))
    flat = sorted(j for b in blocks for j in b)
    if flat != list(range(ne)):
        raise ValueError("edge partition must cover every edge exactly once")
    blocks = tuple(sorted(blocks, key=min))
    subs = tuple(subnetwork(sys, b, i) for i, b in enumerate(blocks))
    kdim = kernel_basis(build_matrices(sys).N).dim
    kernel_sum = sum(len(s.edges) - rank(s.report.N) for s in subs)
    return Decomposition(
        system=sys,
        edge_partition=blocks,
        subnetworks=subs,
        kernel_dim=kdim,
        connected_ok=all(s.connected for s in subs),
        independent_ok=kernel_sum == kdim,
    )


def finest_independent_decomposition(sys: MassActionSystem) -> Decomposition:
    dec = decompose(sys, _edge_classes(sys))
    if not dec.independent_ok:
        raise AssertionError("kernel co-occurrence classes failed the direct-product certificate")
    return dec


def combined_matrices(dec: Decomposition) -> CombinedMatrices:
    sys = dec.system
    net = sys.network
    ne = len(net.edges)
    vertex_labels = tuple((s.index, v) for s in dec.subnetworks for v in s.vertices)
    source_labels = tuple((s.index, v) for s in dec.subnetworks for v in s.sources)
    row_of = {lab: i for i, lab in enumerate(vertex_labels)}
    src_of = {lab: i for i, lab in enumerate(source_labels)}
    class_of_edge = {j: s.index for s in dec.subnetworks for j in s.edges}

    inc = [[0] * ne for _ in vertex_labels]
    srcm = [[0] * ne for _ in source_labels]
    for j, (a, b) in enumerate(net.edges):
        c = class_of_edge[j]
        inc[row_of[(c, a)]][j] = -1
        inc[row_of[(c, b)]][j] = 1
        srcm[src_of[(c, a)]][j] = 1
    I_E = RatMatrix(inc, cols=ne)
    I_Es = RatMatrix(srcm, cols=ne)
    R = I_E @ RatMatrix.diag(sys.k) @ I_Es.T
    Y = RatMatrix.from_columns([net.complexes[v] for _, v in vertex_labels], net.n)
    Y_s = RatMatrix.from_columns([net.complexes[v] for _, v in source_labels], net.n)
    parent_sources = net.graph.sources
    psrc = {v: i for i, v in enumerate(parent_sources)}
    ivs = [[0] * len(source_labels) for _ in parent_sources]
    for col, (_, v) in enumerate(source_labels):
        ivs[psrc[v]][col] = 1
    return CombinedMatrices(
        I_E=I_E,
        I_Es=I_Es,
        R_k=R,
        Y=Y,
        Y_s=Y_s,
        I_Vs=RatMatrix(ivs, cols=len(source_labels)),
        Gamma_k=Y @ R,
        vertex_labels=vertex_labels,
        source_labels=source_labels,
        class_sizes=tuple(len(s.sources) for s in dec.subnetworks),
    )


@dataclass(frozen=True)
class DecompositionChecks:
    """Exact identities that hold for connected, independent subnetworks."""

    d: int
    d_parts: tuple[int, ...]
    delta: int
    delta_parts: tuple[int, ...]
    vertex_excess: int
    ell_minus_l: int
    d_additive: bool
    delta_additive: bool
    vertex_count_identity: bool
    incidence_kernels_equal: bool
    S_direct_sum: bool
    L_direct_sum: bool
    K_in_sum_of_K: bool
    Gamma_kernel_product: bool

    def items(self) -> list[tuple[str, bool]]:
        return [
            ("d = sum d_j", self.d_additive),
            ("delta = sum delta_j", self.delta_additive),
            ("|V_disjoint| - |V| = ell - l", self.vertex_count_identity),
            ("ker I_E = ker I*_E", self.incidence_kernels_equal),
            ("S = S_1 (+) ... (+) S_ell", self.S_direct_sum),
            ("L = L_1 (+) ... (+) L_ell", self.L_direct_sum),
            ("K subset of K_1 + ... + K_ell", self.K_in_sum_of_K),
            ("ker Gamma_k = prod ker Gamma_k^j", self.Gamma_kernel_product),
        ]

    @property
    def all_ok(self) -> bool:
        return all(ok for _, ok in self.items())


def combined_dependency(dec: Decomposition) -> int:
    """``|V_s disjoint| - ell - dim L`` with ``L = L_1 + ... + L_ell``."""
    subs = dec.subnetworks
    L = hstack(*(s.report.L_basis for s in subs), rows=dec.system.network.n)
    return sum(len(s.sources) for s in subs) - dec.ell - rank(L)


def decomposition_checks(dec: Decomposition) -> DecompositionChecks:
    if not dec.connected_ok:
        raise NotApplicableError("not applicable: subnetworks not connected")
    sys = dec.system
    n = sys.network.n
    full = structural_report(sys)
    comb = combined_matrices(dec)
    subs = dec.subnetworks

    d = combined_dependency(dec)
    d_parts = tuple(s.d for s in subs)
    delta_parts = tuple(s.delta for s in subs)
    excess = len(comb.vertex_labels) - sys.network.vertex_count
    ell_l = dec.ell - full.l

    ker_full = kernel_basis(full.matrices.I_E)
    incidence_equal = ker_full.dim == kernel_basis(comb.I_E).dim and all(
        all(x == 0 for x in comb.I_E @ v) for v in ker_full
    )
    L_sum = hstack(*(s.report.L_basis for s in subs), rows=n)
    K_sum = hstack(*(s.report.K_basis for s in subs), rows=n)
    gamma_parts = sum(len(s.sources) - s.report.dim_K for s in subs)
    return DecompositionChecks(
        d=d,
        d_parts=d_parts,
        delta=full.delta,
        delta_parts=delta_parts,
        vertex_excess=excess,
        ell_minus_l=ell_l,
        d_additive=d == sum(d_parts),
        delta_additive=full.delta == sum(delta_parts),
        vertex_count_identity=excess == ell_l,
        incidence_kernels_equal=incidence_equal,
        S_direct_sum=full.dim_S == sum(s.report.dim_S for s in subs),
        L_direct_sum=rank(L_sum) == sum(s.report.dim_L for s in subs),
        K_in_sum_of_K=image_contains(K_sum, full.K_basis),
        Gamma_kernel_product=kernel_basis(comb.Gamma_k).dim == gamma_parts,
    )


def class_of_source(dec: Decomposition) -> tuple[int, ...]:
    return tuple(c for c, _ in combined_matrices(dec).source_labels)

