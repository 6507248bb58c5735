"""Reaction networks with mass-action kinetics and their structural matrices."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .graph import Digraph, GraphStats, difference_incidence, graph_stats, incidence_matrices
from .ratlin import (
    RatMatrix,
    Vector,
    as_rat,
    as_vector,
    column_basis,
    kernel_basis,
    rank,
    image_contains,
    same_image,
    vstack,
)


class NetworkError(ValueError):
    pass


def default_rate_name(tail: int, head: int) -> str:
    """``k12`` for the edge 1 -> 2 (one-based), ``k3_11`` once an index has two digits."""
    a, b = tail + 1, head + 1
    return f"k{a}{b}" if a < 10 and b < 10 else f"k{a}_{b}"


@dataclass(frozen=True)
class ReactionNetwork:
    """A simple digraph whose vertices are labelled with complexes in ``Q^n``."""

    species: tuple[str, ...]
    graph: Digraph
    complexes: tuple[Vector, ...]

    def __post_init__(self):
        species = tuple(self.species)
        complexes = tuple(as_vector(c) for c in self.complexes)
        object.__setattr__(self, "species", species)
        object.__setattr__(self, "complexes", complexes)
        n = len(species)
        if n < 1:
            raise NetworkError("a network needs at least one species")
        if len(set(species)) != n:
            raise NetworkError("duplicate species names")
        if self.graph.vertex_count < 2:
            raise NetworkError("a network needs at least two vertices")
        if len(complexes) != self.graph.vertex_count:
            raise NetworkError("one complex per vertex is required")
        if any(len(c) != n for c in complexes):
            raise NetworkError(f"complexes must have {n} entries")
        touched = {v for e in self.graph.edges for v in e}
        isolated = [v for v in range(self.graph.vertex_count) if v not in touched]
        if isolated:
            raise NetworkError(f"isolated vertices {isolated}")
        if len(set(complexes)) != len(complexes):
            warnings.warn(
                "distinct vertices carry equal complexes", RuntimeWarning, stacklevel=3
            )

    @property
    def n(self) -> int:
        return len(self.species)

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self.graph.edges

    def complex_matrix(self) -> RatMatrix:
        """``Y``: column ``i`` is the complex of vertex ``i``."""
        return RatMatrix.from_columns(self.complexes, self.n)

    def source_complex_matrix(self) -> RatMatrix:
        return RatMatrix.from_columns([self.complexes[v] for v in self.graph.sources], self.n)


@dataclass(frozen=True)
class MassActionSystem:
    network: ReactionNetwork
    k: tuple[Fraction, ...]
    rate_names: tuple[str, ...] = ()

    def __post_init__(self):
        k = tuple(as_rat(x) for x in self.k)
        object.__setattr__(self, "k", k)
        if len(k) != len(self.network.edges):
            raise NetworkError("one rate constant per edge is required")
        if any(x <= 0 for x in k):
            raise NetworkError("rate constants must be positive")
        names = tuple(self.rate_names) or tuple(
            default_rate_name(a, b) for a, b in self.network.edges
        )
        if len(names) != len(k) or len(set(names)) != len(names):
            raise NetworkError("rate names must be unique, one per edge")
        object.__setattr__(self, "rate_names", names)

    def with_rates(self, overrides: Mapping[str, object]) -> MassActionSystem:
        """Copy with some rate constants replaced by name."""
        index = {name: i for i, name in enumerate(self.rate_names)}
        k = list(self.k)
        for name, value in overrides.items():
            if name not in index:
                raise NetworkError(f"unknown rate constant {name!r}")
            k[index[name]] = as_rat(value)
        return replace(self, k=tuple(k))

    def rate(self, name: str) -> Fraction:
        return self.k[self.rate_names.index(name)]


@dataclass(frozen=True)
class NetworkMatrices:
    Y: RatMatrix
    Y_s: RatMatrix
    I_E: RatMatrix
    I_Es: RatMatrix
    N: RatMatrix
    R_k: RatMatrix
    Gamma_k: RatMatrix


def build_matrices(sys: MassActionSystem) -> NetworkMatrices:
    net = sys.network
    inc, src = incidence_matrices(net.graph)
    Y = net.complex_matrix()
    R = inc @ RatMatrix.diag(sys.k) @ src.T
    return NetworkMatrices(
        Y=Y,
        Y_s=net.source_complex_matrix(),
        I_E=inc,
        I_Es=src,
        N=Y @ inc,
        R_k=R,
        Gamma_k=Y @ R,
    )


@dataclass(frozen=True)
class StructuralReport:
    matrices: NetworkMatrices
    stats: GraphStats
    S_basis: RatMatrix
    K_basis: RatMatrix
    L_basis: RatMatrix
    delta: int
    d: int
    n_vertices: int
    n_sources: int
    K_equals_S: bool
    L_equals_S: bool
    K_equals_L: bool
    dim_ker_R: int = field(default=0)

    @property
    def N(self) -> RatMatrix:
        return self.matrices.N

    @property
    def R_k(self) -> RatMatrix:
        return self.matrices.R_k

    @property
    def Gamma_k(self) -> RatMatrix:
        return self.matrices.Gamma_k

    @property
    def l(self) -> int:
        return self.stats.l

    @property
    def t(self) -> int:
        return self.stats.t

    @property
    def t_prime(self) -> int:
        return self.stats.t_prime

    @property
    def dim_S(self) -> int:
        return self.S_basis.cols

    @property
    def dim_K(self) -> int:
        return self.K_basis.cols

    @property
    def dim_L(self) -> int:
        return self.L_basis.cols


def monomial_difference_basis(Y_s: RatMatrix) -> RatMatrix:
    """Basis of the span of differences between the columns of ``Y_s``."""
    return column_basis(Y_s @ difference_incidence(Y_s.cols))


def structural_report(sys: MassActionSystem) -> StructuralReport:
    """Subspaces S, K, L and the counts delta, d, l, t, t' of the undecomposed network."""
    mats = build_matrices(sys)
    stats = graph_stats(sys.network.graph)
    S = column_basis(mats.N)
    K = column_basis(mats.Gamma_k)
    L = monomial_difference_basis(mats.Y_s)
    nv = sys.network.vertex_count
    ns = mats.Y_s.cols
    delta = nv - stats.l - S.cols
    d = ns - 1 - L.cols
    return StructuralReport(
        matrices=mats,
        stats=stats,
        S_basis=S,
        K_basis=K,
        L_basis=L,
        delta=delta,
        d=d,
        n_vertices=nv,
        n_sources=ns,
        K_equals_S=same_image(S, K),
        L_equals_S=same_image(S, L),
        K_equals_L=same_image(K, L),
        dim_ker_R=ns - rank(mats.R_k),
    )


def kinetic_in_stoichiometric(report: StructuralReport) -> bool:
    return image_contains(report.S_basis, report.K_basis)


def dependency_via_cayley(Y_s: RatMatrix) -> int:
    """``dim ker [Y_s; 1^T]``, the one-class monomial dependency computed the other way."""
    ones = RatMatrix([[1] * Y_s.cols], cols=Y_s.cols)
    return kernel_basis(vstack(Y_s, ones)).dim


def monomials(Y_s: RatMatrix, x: Sequence[float]) -> np.ndarray:
    logx = np.log(np.asarray(x, dtype=float))
    return np.exp(Y_s.to_numpy().T @ logx)


def evaluate_vector_field(sys: MassActionSystem, x: Sequence[float]) -> np.ndarray:
    """``Gamma_k x^{Y_s}``, the right-hand side of the mass-action ODE."""
    x = np.asarray(x, dtype=float)
    if x.shape != (sys.network.n,):
        raise ValueError(f"expected {sys.network.n} concentrations")
    if not np.all(x > 0):
        raise ValueError("concentrations must be strictly positive")
    mats = build_matrices(sys)
    return mats.Gamma_k.to_numpy() @ monomials(mats.Y_s, x)


def relative_residual(A: np.ndarray, v: np.ndarray) -> float:
    """``||A v||_inf / (||A||_inf * max(1, ||v||_inf))``."""
    A = np.asarray(A, dtype=float)
    v = np.asarray(v, dtype=float)
    if A.size == 0:
        return 0.0
    scale = np.abs(A).sum(axis=1).max() * max(1.0, float(np.abs(v).max(initial=0.0)))
    if scale == 0:
        return 0.0
    return float(np.abs(A @ v).max(initial=0.0) / scale)
