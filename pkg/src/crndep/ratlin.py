"""Exact rational matrices and the small amount of linear algebra built on them.

Entries are :class:`fractions.Fraction` values; nothing in this module touches
floating point except :meth:`RatMatrix.to_numpy`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

Rat = Fraction
Vector = tuple[Fraction, ...]


def as_rat(value) -> Fraction:
    """Convert ``value`` to a Fraction without passing through binary floats.

    Strings are parsed exactly ("1/3", "0.25", "2e-3"). Python floats are
    converted through their shortest decimal repr, so ``0.1`` becomes ``1/10``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("booleans are not rational numbers")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        if not np.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(float(value)))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def as_vector(values: Iterable) -> Vector:
    return tuple(as_rat(v) for v in values)


class RatMatrix:
    """Immutable dense matrix of Fractions, stored row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(as_rat(v) for v in row) for row in data)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged rows")
            if cols is not None and cols != width:
                raise ValueError(f"expected {cols} columns, got {width}")
        else:
            width = 0 if cols is None else cols
        self.rows = len(rows)
        self.cols = width
        self._data = rows

    @classmethod
    def _trusted(cls, rows: tuple[tuple[Fraction, ...], ...], cols: int) -> RatMatrix:
        obj = cls.__new__(cls)
        obj.rows = len(rows)
        obj.cols = cols
        obj._data = rows
        return obj

    @classmethod
    def zeros(cls, rows: int, cols: int) -> RatMatrix:
        zero = Fraction(0)
        return cls._trusted(tuple((zero,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        one, zero = Fraction(1), Fraction(0)
        return cls._trusted(
            tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> RatMatrix:
        cols = [as_vector(c) for c in columns]
        if any(len(c) != rows for c in cols):
            raise ValueError("column length mismatch")
        return cls._trusted(
            tuple(tuple(c[i] for c in cols) for i in range(rows)), len(cols)
        )

    @classmethod
    def diag(cls, values: Sequence) -> RatMatrix:
        vals = as_vector(values)
        n = len(vals)
        zero = Fraction(0)
        return cls._trusted(
            tuple(tuple(vals[i] if i == j else zero for j in range(n)) for i in range(n)), n
        )

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        return self._data[i][j]

    def row(self, i: int) -> Vector:
        return self._data[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self._data)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    @property
    def T(self) -> RatMatrix:
        return RatMatrix._trusted(
            tuple(tuple(r[j] for r in self._data) for j in range(self.cols)), self.rows
        )

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = other.T._data
            return RatMatrix._trusted(
                tuple(
                    tuple(_dot(r, c) for c in ocols)
                    for r in self._data
                ),
                other.cols,
            )
        vec = as_vector(other)
        if len(vec) != self.cols:
            raise ValueError(f"shape mismatch {self.shape} @ ({len(vec)},)")
        return tuple(_dot(r, vec) for r in self._data)

    def __add__(self, other: RatMatrix) -> RatMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RatMatrix._trusted(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)),
            self.cols,
        )

    def __neg__(self) -> RatMatrix:
        return RatMatrix._trusted(tuple(tuple(-a for a in r) for r in self._data), self.cols)

    def __sub__(self, other: RatMatrix) -> RatMatrix:
        return self + (-other)

    def scale(self, s) -> RatMatrix:
        s = as_rat(s)
        return RatMatrix._trusted(tuple(tuple(s * a for a in r) for r in self._data), self.cols)

    def select_columns(self, idx: Sequence[int]) -> RatMatrix:
        idx = list(idx)
        return RatMatrix._trusted(tuple(tuple(r[j] for j in idx) for r in self._data), len(idx))

    def select_rows(self, idx: Sequence[int]) -> RatMatrix:
        return RatMatrix._trusted(tuple(self._data[i] for i in idx), self.cols)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self._data for a in r)

    def to_numpy(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=float)
        for i, r in enumerate(self._data):
            for j, a in enumerate(r):
                out[i, j] = float(a)
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.shape, self._data))

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(a) for a in r) + "]" for r in self._data)
        return f"RatMatrix({self.rows}x{self.cols}: [{body}])"


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for x, y in zip(a, b):
        if x and y:
            total += x * y
    return total


def hstack(*mats: RatMatrix, rows: int | None = None) -> RatMatrix:
    mats = tuple(mats)
    if not mats:
        return RatMatrix.zeros(rows or 0, 0)
    r = mats[0].rows if rows is None else rows
    if any(m.rows != r for m in mats):
        raise ValueError("row count mismatch in hstack")
    data = tuple(tuple(a for m in mats for a in m.row(i)) for i in range(r))
    return RatMatrix._trusted(data, sum(m.cols for m in mats))


def vstack(*mats: RatMatrix, cols: int | None = None) -> RatMatrix:
    mats = tuple(mats)
    if not mats:
        return RatMatrix.zeros(0, cols or 0)
    c = mats[0].cols if cols is None else cols
    if any(m.cols != c for m in mats):
        raise ValueError("column count mismatch in vstack")
    return RatMatrix._trusted(tuple(r for m in mats for r in m._data), c)


def block_diag(*mats: RatMatrix) -> RatMatrix:
    total_cols = sum(m.cols for m in mats)
    zero = Fraction(0)
    data = []
    offset = 0
    for m in mats:
        left = (zero,) * offset
        right = (zero,) * (total_cols - offset - m.cols)
        data.extend(left + r + right for r in m._data)
        offset += m.cols
    return RatMatrix._trusted(tuple(data), total_cols)


# --- elimination -----------------------------------------------------------------


def rref(m: RatMatrix) -> tuple[RatMatrix, tuple[int, ...]]:
    """Reduced row echelon form and the pivot columns."""
    a = m.to_rows()
    nrows, ncols = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        if piv != 1:
            a[r] = [x / piv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return RatMatrix._trusted(tuple(tuple(row) for row in a), ncols), tuple(pivots)


def rank(m: RatMatrix) -> int:
    return len(rref(m)[1])


@dataclass(frozen=True)
class KernelBasis:
    """Null-space basis in free-variable canonical form.

    Vector ``k`` has a one at free column ``free_columns[k]`` and zeros at every
    other free column.
    """

    ambient_dim: int
    vectors: tuple[Vector, ...]
    free_columns: tuple[int, ...] = ()

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def as_matrix(self) -> RatMatrix:
        """Basis vectors as the columns of an ``ambient_dim x dim`` matrix."""
        return RatMatrix.from_columns(self.vectors, self.ambient_dim)


def kernel_basis(m: RatMatrix) -> KernelBasis:
    r, pivots = rref(m)
    pivot_set = set(pivots)
    free = [j for j in range(m.cols) if j not in pivot_set]
    vectors = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, pc in enumerate(pivots):
            v[pc] = -r[row, f]
        vectors.append(tuple(v))
    return KernelBasis(m.cols, tuple(vectors), tuple(free))


def column_basis(m: RatMatrix) -> RatMatrix:
    """The pivot columns of ``m``; a basis of its image."""
    _, pivots = rref(m)
    return m.select_columns(pivots)


def orthogonal_complement(m: RatMatrix) -> RatMatrix:
    """Columns spanning the orthogonal complement of ``im m``."""
    return kernel_basis(m.T).as_matrix()


def image_contains(big: RatMatrix, small: RatMatrix) -> bool:
    """True iff ``im small`` is a subspace of ``im big``."""
    if small.cols == 0:
        return True
    if big.cols == 0:
        return small.is_zero()
    return rank(hstack(big, small)) == rank(big)


def same_image(a: RatMatrix, b: RatMatrix) -> bool:
    return image_contains(a, b) and image_contains(b, a)


def inverse(m: RatMatrix) -> RatMatrix:
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    r, pivots = rref(hstack(m, RatMatrix.identity(n)))
    if pivots[:n] != tuple(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return RatMatrix._trusted(tuple(row[n:] for row in r._data), n)


def g_inverse(m: RatMatrix) -> RatMatrix:
    """A generalized inverse ``G`` of ``m`` (``m @ G @ m == m``) from a rank factorization.

    With ``m = F H`` (``F`` the pivot columns, ``H`` the nonzero RREF rows) this
    returns ``H^T (H H^T)^-1 (F^T F)^-1 F^T``, which is the Moore-Penrose inverse.
    """
    r, pivots = rref(m)
    k = len(pivots)
    if k == 0:
        return RatMatrix.zeros(m.cols, m.rows)
    f = m.select_columns(pivots)
    h = r.select_rows(range(k))
    return h.T @ inverse(h @ h.T) @ inverse(f.T @ f) @ f.T


def primitive_integer_vector(v: Sequence) -> Vector:
    """Scale a rational vector to coprime integers, keeping its direction."""
    vec = as_vector(v)
    if all(x == 0 for x in vec):
        return vec
    den = lcm(*(x.denominator for x in vec))
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(Fraction(x // g) for x in ints)


# --- positivity of kernel points --------------------------------------------------


@dataclass(frozen=True)
class PositivityResult:
    """Outcome of the strict-positivity LP on ``ker m``.

    Exactly one of ``point`` and ``certificate`` is set. A certificate ``z`` is a
    nonnegative, nonzero vector with ``z = m^T multipliers``; it is orthogonal to
    ``ker m`` and so rules out any positive kernel point.
    """

    point: Vector | None
    certificate: Vector | None = None
    multipliers: Vector | None = None
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return self.point is not None


def positive_kernel_search(m: RatMatrix) -> PositivityResult:
    """Phase-one simplex (Bland's rule) for ``m v = 0, v >= 1``.

    Writing ``v = 1 + w`` gives the standard form ``m w = -m 1, w >= 0``. The cone
    ``ker m`` is scale invariant, so this is equivalent to asking for ``v > 0``.
    """
    nrows, ncols = m.rows, m.cols
    if ncols == 0:
        return PositivityResult(point=())
    ones = (Fraction(1),) * ncols
    rhs = [-x for x in (m @ ones)]
    signs = [Fraction(-1) if b < 0 else Fraction(1) for b in rhs]
    width = ncols + nrows
    # tableau rows: [A' | I | b'] with A' = diag(signs) m
    tab = []
    for i in range(nrows):
        s = signs[i]
        row = [s * x for x in m.row(i)]
        row.extend(Fraction(1) if j == i else Fraction(0) for j in range(nrows))
        row.append(s * rhs[i])
        tab.append(row)
    basis = [ncols + i for i in range(nrows)]
    cost = [Fraction(0)] * ncols + [Fraction(1)] * nrows
    pivots = 0

    while True:
        # reduced costs c_j - c_B^T T_j; entering variable is the lowest index < 0
        entering = None
        for j in range(width):
            if j in basis:
                continue
            red = cost[j] - sum(cost[basis[i]] * tab[i][j] for i in range(nrows))
            if red < 0:
                entering = j
                break
        if entering is None:
            break
        leaving = None
        best = None
        for i in range(nrows):
            a = tab[i][entering]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best, leaving = ratio, i
        if leaving is None:  # cannot happen: phase one is bounded below by zero
            raise RuntimeError("phase-one simplex reported an unbounded direction")
        piv = tab[leaving][entering]
        tab[leaving] = [x / piv for x in tab[leaving]]
        for i in range(nrows):
            if i != leaving and tab[i][entering] != 0:
                f = tab[i][entering]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leaving])]
        basis[leaving] = entering
        pivots += 1

    infeasibility = sum(tab[i][-1] for i in range(nrows) if basis[i] >= ncols)
    if infeasibility == 0:
        w = [Fraction(0)] * ncols
        for i, var in enumerate(basis):
            if var < ncols:
                w[var] = tab[i][-1]
        point = tuple(Fraction(1) + x for x in w)
        return PositivityResult(point=point, pivots=pivots)

    # dual multipliers y' = c_B^T B^-1, read off the artificial columns
    y_prime = [
        sum(cost[basis[i]] * tab[i][ncols + r] for i in range(nrows)) for r in range(nrows)
    ]
    multipliers = tuple(-signs[r] * y_prime[r] for r in range(nrows))
    certificate = m.T @ multipliers
    return PositivityResult(
        point=None, certificate=certificate, multipliers=multipliers, pivots=pivots
    )


def strictly_positive_kernel_point(m: RatMatrix) -> Vector | None:
    """Some ``v`` with ``m v = 0`` and every entry positive, or None."""
    return positive_kernel_search(m).point


def check_certificate(m: RatMatrix, result: PositivityResult) -> bool:
    """Re-check a :class:`PositivityResult` exactly."""
    if result.point is not None:
        return all(x > 0 for x in result.point) and all(x == 0 for x in m @ result.point)
    z, u = result.certificate, result.multipliers
    if z is None or u is None:
        return False
    return (
        tuple(m.T @ u) == tuple(z)
        and all(x >= 0 for x in z)
        and any(x > 0 for x in z)
    )
