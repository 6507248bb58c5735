"""Executable form of the partial-sum lemma for rectangular Laplacians (the "second salt theorem").

For a terminal strong component ``T`` of a one-component labeled digraph, the
kernel vector ``q_hat`` of ``R_k`` supported on ``T`` orders the vertices;
partial sums of ``beta = R_k 1`` along that order are nonnegative on ``T``,
strictly positive at strict descents of ``q_hat``, and vanish at ``|T|`` iff
``T`` is the whole vertex set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import Digraph, GraphError, graph_stats, incidence_matrices
from .ratlin import RatMatrix, Vector, as_vector, kernel_basis


@dataclass(frozen=True)
class SaltCertificate:
    """Everything needed to re-check the lemma by hand.

    ``q_hat`` and ``beta`` are indexed by vertex (``q_hat`` is zero off ``T``).
    ``ordering`` lists the vertices of ``T`` by decreasing ``q_hat`` (ties by
    index) followed by the rest; ``partial_sums[i]`` sums ``beta`` over the
    first ``i + 1`` entries of ``ordering``, for positions inside ``T``.
    """

    T: tuple[int, ...]
    ordering: tuple[int, ...]
    q_hat: Vector
    beta: Vector
    partial_sums: Vector
    strict_positions: tuple[int, ...]
    T_equals_V: bool

    @property
    def total_over_T(self) -> Fraction:
        return self.partial_sums[-1]

    def claims(self) -> dict[str, bool]:
        t = len(self.T)
        return {
            "partial sums >= 0 on T": all(s >= 0 for s in self.partial_sums),
            "partial sums > 0 at strict descents": all(
                self.partial_sums[i] > 0 for i in self.strict_positions
            ),
            "total over T = 0 iff T = V": (self.partial_sums[t - 1] == 0) == self.T_equals_V,
            "beta sums to zero": sum(self.beta) == 0,
        }


def rectangular_laplacian(g: Digraph, k: Sequence) -> RatMatrix:
    inc, src = incidence_matrices(g)
    return inc @ RatMatrix.diag(as_vector(k)) @ src.T


def scaled_rate_constants(g: Digraph, k: Sequence, y_bar: Sequence) -> Vector:
    """``k_tilde`` with ``R_k diag(y_bar) = R_k_tilde``: each edge rate times its source's entry.

    ``y_bar`` is indexed by source vertex (ascending order).
    """
    pos = {v: i for i, v in enumerate(g.sources)}
    yb = as_vector(y_bar)
    return tuple(kk * yb[pos[a]] for kk, (a, _) in zip(as_vector(k), g.edges))


def salt_certificate(g: Digraph, k: Sequence, T: Sequence[int]) -> SaltCertificate:
    k = as_vector(k)
    if len(k) != len(g.edges) or any(x <= 0 for x in k):
        raise ValueError("one positive rate constant per edge is required")
    stats = graph_stats(g)
    if stats.l != 1:
        raise GraphError("salt certificate requires a graph with one component")
    T = tuple(sorted(set(T)))
    if T not in stats.terminal_sccs:
        raise GraphError(f"{list(T)} is not a terminal strong component")
    sources = g.sources
    if any(v not in sources for v in T):
        raise GraphError("terminal component is a non-source singleton; it carries no kernel vector")

    R = rectangular_laplacian(g, k)
    col = {v: i for i, v in enumerate(sources)}
    ker = kernel_basis(R.select_columns([col[v] for v in T]))
    if ker.dim != 1:
        raise AssertionError(f"kernel on the terminal component has dimension {ker.dim}")
    v = ker.vectors[0]
    top = max(v, key=abs)
    scaled = [x / top for x in v]
    if any(x <= 0 for x in scaled):
        raise AssertionError("kernel vector on a terminal component must be positive")
    q_hat = [Fraction(0)] * g.vertex_count
    for vert, x in zip(T, scaled):
        q_hat[vert] = x

    ones = (Fraction(1),) * len(sources)
    beta = R @ ones
    in_T = sorted(T, key=lambda i: (-q_hat[i], i))
    rest = [i for i in range(g.vertex_count) if i not in set(T)]
    ordering = tuple(in_T + rest)
    sums, acc = [], Fraction(0)
    for i in in_T:
        acc += beta[i]
        sums.append(acc)
    strict = tuple(p for p in range(len(in_T) - 1) if q_hat[in_T[p]] > q_hat[in_T[p + 1]])
    cert = SaltCertificate(
        T=T,
        ordering=ordering,
        q_hat=tuple(q_hat),
        beta=tuple(beta),
        partial_sums=tuple(sums),
        strict_positions=strict,
        T_equals_V=len(T) == g.vertex_count,
    )
    failed = [name for name, ok in cert.claims().items() if not ok]
    if failed:
        raise AssertionError(f"salt lemma violated: {failed}")
    return cert


def salt_certificates(g: Digraph, k: Sequence) -> list[SaltCertificate]:
    """One certificate per terminal component made of source vertices."""
    stats = graph_stats(g)
    src = set(g.sources)
    return [salt_certificate(g, k, T) for T in stats.terminal_sccs if all(v in src for v in T)]
