"""Parametrized polynomial systems ``A (c o x^B) = 0`` whose columns split into classes.

Structure (coefficient polytope, monomial differences, dependencies) is exact;
only the fiber reconstruction works in floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .ratlin import (
    KernelBasis,
    RatMatrix,
    Vector,
    as_rat,
    block_diag,
    column_basis,
    g_inverse,
    kernel_basis,
    orthogonal_complement,
    positive_kernel_search,
    rank,
    vstack,
)
from .massaction import relative_residual


class PolytopeError(ValueError):
    pass


def _star_incidence(size: int) -> RatMatrix:
    # identity on the first size-1 vertices, root (last column) gets -1
    rows = [[1 if i == j else 0 for j in range(size - 1)] for i in range(size - 1)]
    rows.append([-1] * (size - 1))
    return RatMatrix(rows, cols=size - 1)


@dataclass(frozen=True)
class PolySystem:
    """``A`` is ``l x m``, ``B`` is ``n x m``; ``class_sizes`` splits the ``m`` columns."""

    A: RatMatrix
    B: RatMatrix
    class_sizes: tuple[int, ...]
    c: tuple[Fraction, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.class_sizes)
        object.__setattr__(self, "class_sizes", sizes)
        c = tuple(as_rat(x) for x in self.c)
        object.__setattr__(self, "c", c)
        m = self.A.cols
        if self.B.cols != m:
            raise ValueError("A and B must have the same number of columns")
        if any(s < 1 for s in sizes) or sum(sizes) != m:
            raise ValueError("class sizes must be positive and sum to the column count")
        if len(c) != m or any(x <= 0 for x in c):
            raise ValueError(f"c must be a positive vector of length {m}")

    @property
    def m(self) -> int:
        return self.A.cols

    @property
    def n(self) -> int:
        return self.B.rows

    @property
    def ell(self) -> int:
        return len(self.class_sizes)

    def class_columns(self, j: int) -> tuple[int, ...]:
        start = sum(self.class_sizes[:j])
        return tuple(range(start, start + self.class_sizes[j]))

    def class_system(self, j: int) -> PolySystem:
        cols = self.class_columns(j)
        return PolySystem(
            self.A.select_columns(cols),
            self.B.select_columns(cols),
            (len(cols),),
            tuple(self.c[i] for i in cols),
        )

    def is_class_decomposed(self) -> bool:
        """``ker A`` equals the product of the class kernels (compared by dimension)."""
        whole = self.m - rank(self.A)
        parts = sum(
            len(self.class_columns(j)) - rank(self.A.select_columns(self.class_columns(j)))
            for j in range(self.ell)
        )
        return whole == parts

    def log_c(self) -> np.ndarray:
        # numerator and denominator separately so extreme rationals do not underflow
        return np.array([math.log(x.numerator) - math.log(x.denominator) for x in self.c])


@dataclass(frozen=True)
class MonomialStructure:
    I: RatMatrix
    M: RatMatrix
    L_basis: RatMatrix
    d: int
    J: RatMatrix
    Bcal: RatMatrix
    D_basis: KernelBasis
    E: RatMatrix

    @property
    def dim_L(self) -> int:
        return self.L_basis.cols

    @property
    def Lperp_basis(self) -> RatMatrix:
        return orthogonal_complement(self.M)


def monomial_structure(sys: PolySystem) -> MonomialStructure:
    if not sys.is_class_decomposed():
        raise ValueError("system not class-decomposed")
    inc = block_diag(*(_star_incidence(s) for s in sys.class_sizes))
    M = sys.B @ inc
    L = column_basis(M)
    J = block_diag(*(RatMatrix([[1] * s], cols=s) for s in sys.class_sizes))
    Bcal = vstack(sys.B, J)
    D = kernel_basis(Bcal)
    d = sys.m - sys.ell - L.cols
    if d != D.dim:
        raise AssertionError(f"monomial dependency disagrees: {d} via M, {D.dim} via the Cayley matrix")
    return MonomialStructure(I=inc, M=M, L_basis=L, d=d, J=J, Bcal=Bcal, D_basis=D, E=inc @ g_inverse(M))


@dataclass(frozen=True)
class PolytopeSegment:
    """The coefficient polytope of one class.

    ``vertices`` holds the single point when ``dim == 0``, the two endpoints
    (ordered so the first nonzero entry of ``y1 - y2`` is positive) when
    ``dim == 1``, and is None for higher dimensions.
    """

    dim: int
    vertices: tuple[Vector, ...] | None
    interior_point: Vector


def _normalize(v: Sequence[Fraction]) -> Vector:
    s = sum(v)
    return tuple(x / s for x in v)


def coefficient_polytope_segment(sys: PolySystem, j: int = 0) -> PolytopeSegment:
    A = sys.A.select_columns(sys.class_columns(j))
    lp = positive_kernel_search(A)
    if not lp.feasible:
        raise PolytopeError("no positive kernel point")
    ker = kernel_basis(A)
    dim = ker.dim - 1
    inner = _normalize(lp.point)
    if dim == 0:
        return PolytopeSegment(0, (inner,), inner)
    if dim >= 2:
        return PolytopeSegment(dim, None, inner)
    u, w = ker.vectors
    rays = set()
    for i in range(len(u)):
        r = tuple(w[i] * a - u[i] * b for a, b in zip(u, w))
        if all(x == 0 for x in r):
            continue
        for cand in (r, tuple(-x for x in r)):
            if all(x >= 0 for x in cand):
                rays.add(_normalize(cand))
    if len(rays) != 2:
        raise AssertionError(f"expected two extreme rays, found {len(rays)}")
    y1, y2 = sorted(rays)
    diff = [a - b for a, b in zip(y1, y2)]
    first = next(x for x in diff if x != 0)
    if first < 0:
        y1, y2 = y2, y1
    return PolytopeSegment(1, (y1, y2), inner)


@dataclass(frozen=True)
class FiberSolution:
    """Particular solution ``x_star``; the full solution set is ``x_star o exp(L_perp)``."""

    x_star: np.ndarray
    Lperp_basis: RatMatrix
    y: np.ndarray
    residual: float


def fiber_from_polytope_point(
    ms: MonomialStructure,
    sys: PolySystem,
    y: Sequence | None,
    log_y: Sequence[float] | None = None,
    residual_tol: float = 1e-8,
) -> FiberSolution:
    """``x_star = (y o c^-1)^E`` for a point ``y`` of the polytope satisfying the binomial conditions.

    ``log_y`` may be passed instead of (or along with) ``y`` when some entries
    of ``y`` are too small to represent accurately.
    """
    if log_y is None:
        yv = np.asarray([float(v) for v in y])
        if yv.shape != (sys.m,) or not np.all(yv > 0):
            raise ValueError(f"y must be a positive vector of length {sys.m}")
        log_y = np.log(yv)
    log_y = np.asarray(log_y, dtype=float)
    log_c = sys.log_c()
    for z in ms.D_basis:
        zf = np.array([float(x) for x in z])
        lhs, rhs = float(zf @ log_y), float(zf @ log_c)
        if abs(lhs - rhs) > 1e-9 * max(1.0, abs(rhs)):
            raise ValueError("y not in Y_c")
    x_star = np.exp(ms.E.to_numpy().T @ (log_y - log_c))
    v = np.exp(log_c + sys.B.to_numpy().T @ np.log(x_star))
    res = relative_residual(sys.A.to_numpy(), v)
    if res > residual_tol:
        raise ArithmeticError(f"fiber reconstruction residual {res:.3e} exceeds {residual_tol:g}")
    return FiberSolution(x_star=x_star, Lperp_basis=ms.Lperp_basis, y=np.exp(log_y), residual=res)
