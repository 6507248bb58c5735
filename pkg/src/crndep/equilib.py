"""Numerical stage: the univariate binomial condition, fiber reconstruction and Birch intersection.

Root finding runs in the variable ``u = atanh(t)`` so that points very close to
the ends of the segment stay representable; ``log(1 + q tanh u)`` is evaluated
through log-sum-exp forms that never subtract nearly equal numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import null_space

from .decomp import Decomposition
from .depone import (
    UNIQUE_KINETIC,
    UNIQUE_STOICH,
    ClassAnalysis,
    TheoremVerdict,
    analyze_class,
    existence_case,
    mass_action_poly_system,
)
from .massaction import MassActionSystem, build_matrices, monomials, relative_residual, structural_report
from .polycore import (
    FiberSolution,
    MonomialStructure,
    PolySystem,
    coefficient_polytope_segment,
    fiber_from_polytope_point,
    monomial_structure,
)
from .ratlin import RatMatrix, orthogonal_complement

LOG_TOL = 1e-12
_GAP_EXP_START, _GAP_EXP_CAP = 5, 60


def log1p_qtanh(q: float, u: float) -> float:
    """``log(1 + q tanh(u))`` for ``q`` in ``[-1, 1]``, accurate for large ``|u|``."""
    with np.errstate(divide="ignore"):
        a = np.logaddexp(u + np.log1p(q), -u + np.log1p(-q))
    return float(a - np.logaddexp(u, -u))


@dataclass(frozen=True)
class UnivariateProfile:
    """``f(t) = prod_i (1 + t q_i)^{b_i}`` on ``(-1, 1)`` and the target ``c*``."""

    q_tilde: tuple[float, ...]
    b_tilde: tuple[float, ...]
    log_c_star: float

    def __post_init__(self):
        q = tuple(float(x) for x in self.q_tilde)
        b = tuple(float(x) for x in self.b_tilde)
        object.__setattr__(self, "q_tilde", q)
        object.__setattr__(self, "b_tilde", b)
        object.__setattr__(self, "log_c_star", float(self.log_c_star))
        if len(q) != len(b) or len(q) < 2:
            raise ValueError("q_tilde and b_tilde need equal length >= 2")
        if q[0] != 1.0 or q[-1] != -1.0 or any(a <= c for a, c in zip(q, q[1:])):
            raise ValueError("q_tilde must decrease strictly from 1 to -1")

    @property
    def c_star(self) -> float:
        return math.exp(self.log_c_star)

    @property
    def limits(self) -> tuple[str, str]:
        """Behavior of ``f`` as ``t -> -1`` and ``t -> 1``: "0", "inf" or "finite"."""

        def lim(e):
            return "0" if e > 0 else ("inf" if e < 0 else "finite")

        return lim(self.b_tilde[0]), lim(self.b_tilde[-1])

    def log_f_u(self, u: float) -> float:
        return sum(b * log1p_qtanh(q, u) for q, b in zip(self.q_tilde, self.b_tilde))

    def log_f(self, t: float) -> float:
        return sum(b * math.log1p(t * q) for q, b in zip(self.q_tilde, self.b_tilde))

    def f(self, t: float) -> float:
        return math.exp(self.log_f(t))

    def monotone(self) -> bool:
        sums = np.cumsum(self.b_tilde)[:-1]
        mixed = self.b_tilde[0] * self.b_tilde[-1] < 0
        return mixed and (bool(np.all(sums >= 0)) or bool(np.all(sums <= 0)))


@dataclass(frozen=True)
class UnivariateRoot:
    t: float
    u: float
    log_residual: float
    iterations: int


def _bracket_points():
    # t = 1 - 2^-k for k = 5..60 expressed in u = atanh(t), then keep doubling u
    for k in range(_GAP_EXP_START, _GAP_EXP_CAP + 1):
        e = 2.0**-k
        yield 0.5 * math.log((2.0 - e) / e)
    u = 0.5 * math.log(2.0**(_GAP_EXP_CAP + 1))
    while u < 1e6:
        u *= 2.0
        yield u


def solve_univariate(p: UnivariateProfile, full_output: bool = False):
    """Root ``t`` in ``(-1, 1)`` of ``log f(t) = log c*`` for a monotone profile."""
    if not p.monotone():
        raise ValueError("profile is not monotone; the sign conditions on b_tilde do not hold")

    def g(u):
        return p.log_f_u(u) - p.log_c_star

    lo = hi = None
    for u in _bracket_points():
        g_lo, g_hi = g(-u), g(u)
        if g_lo == 0.0:
            lo = hi = -u
            break
        if g_hi == 0.0:
            lo = hi = u
            break
        if (g_lo < 0) != (g_hi < 0):
            lo, hi = (-u, u) if g_lo < 0 else (u, -u)
            break
    if lo is None:
        raise ArithmeticError("could not bracket the root of the univariate condition")
    # invariant: g(lo) < 0 < g(hi) (lo may exceed hi for a decreasing profile)
    iterations = 0
    mid = lo
    while lo != hi:
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        iterations += 1
        if abs(gm) <= LOG_TOL or mid in (lo, hi) or iterations > 400:
            break
        if gm < 0:
            lo = mid
        else:
            hi = mid
    res = abs(g(mid))
    if res > LOG_TOL:
        raise ArithmeticError(f"univariate bisection stalled with |log f - log c*| = {res:.3e}")
    root = UnivariateRoot(t=math.tanh(mid), u=mid, log_residual=res, iterations=iterations)
    return root if full_output else root.t


def profile_for_class(ca: ClassAnalysis, log_c: Sequence[float]) -> UnivariateProfile:
    """Profile of a ``d = dim P = 1`` class with ``log c* = b . log c - b . log ybar``."""
    if ca.y_bar is None or ca.b is None:
        raise ValueError("class needs a one-dimensional polytope and a dependency vector")
    b = np.array([float(x) for x in ca.b])
    log_ybar = np.log([float(x) for x in ca.y_bar])
    return UnivariateProfile(ca.q_tilde, ca.b_tilde, float(b @ np.asarray(log_c) - b @ log_ybar))


def class_log_y(ca: ClassAnalysis, u: float) -> np.ndarray:
    """``log(ybar + t yhat) = log ybar + log(1 + t q)`` at ``t = tanh(u)``."""
    log_ybar = np.log([float(x) for x in ca.y_bar])
    return log_ybar + np.array([log1p_qtanh(float(q), u) for q in ca.q])


def reconstruct_x(ms: MonomialStructure, sys: PolySystem, y=None, log_y=None) -> FiberSolution:
    return fiber_from_polytope_point(ms, sys, y, log_y)


@dataclass(frozen=True)
class BirchInfo:
    iterations: int
    gradient_norm: float
    lam: np.ndarray


def _perp_basis(subspace, n: int) -> np.ndarray:
    if isinstance(subspace, RatMatrix):
        if subspace.rows != n:
            raise ValueError(f"subspace basis must have {n} rows")
        W = orthogonal_complement(subspace).to_numpy() if subspace.cols else np.eye(n)
    else:
        S = np.asarray(subspace, dtype=float).reshape(n, -1)
        W = null_space(S.T) if S.shape[1] else np.eye(n)
    if W.shape[1] == 0:
        return W
    q, _ = np.linalg.qr(W)
    return q[:, : W.shape[1]]


def birch_intersect(x_star, subspace, anchor, full_output: bool = False, max_iter: int = 200):
    """The unique point of ``(anchor + S) ∩ (x_star o exp(S_perp))``.

    Minimizes the strictly convex ``phi(lam) = sum x_star exp(W lam) - (W^T anchor) . lam``
    with ``W`` an orthonormal basis of ``S_perp``, by damped Newton from ``lam = 0``.
    """
    x_star = np.asarray(x_star, dtype=float)
    anchor = np.asarray(anchor, dtype=float)
    n = x_star.shape[0]
    if anchor.shape != (n,) or not (np.all(x_star > 0) and np.all(anchor > 0)):
        raise ValueError("x_star and anchor must be positive vectors of equal length")
    W = _perp_basis(subspace, n)
    r = W.shape[1]
    if r == 0:
        info = BirchInfo(0, 0.0, np.zeros(0))
        return (x_star.copy(), info) if full_output else x_star.copy()
    target = W.T @ anchor
    tol = 1e-10 * max(1.0, float(np.abs(anchor).max()))

    def phi(lam):
        return float(x_star @ np.exp(W @ lam) - target @ lam)

    lam = np.zeros(r)
    it = 0
    while True:
        x = x_star * np.exp(W @ lam)
        grad = W.T @ x - target
        gnorm = float(np.abs(grad).max())
        if gnorm <= tol:
            break
        if it >= max_iter:
            raise ArithmeticError("Birch Newton failed to converge")
        H = W.T @ (x[:, None] * W)
        step = -np.linalg.solve(H, grad)
        f0, slope, s = phi(lam), float(grad @ step), 1.0
        # once the Newton decrement is below the roundoff of phi, Armijo cannot
        # tell steps apart; the full step is then inside the quadratic region
        if -slope > 1e-10 * (1.0 + abs(f0)):
            while s > 1e-16 and phi(lam + s * step) > f0 + 1e-4 * s * slope:
                s *= 0.5
        lam = lam + s * step
        it += 1
    info = BirchInfo(it, gnorm, lam)
    return (x, info) if full_output else x


@dataclass(frozen=True)
class EquilibriumResult:
    x_star: np.ndarray
    Lperp_basis: RatMatrix
    unique_in_class: bool
    anchor: np.ndarray
    x_in_class: np.ndarray
    residual: float
    t_roots: tuple[float | None, ...]
    class_kind: str
    newton_iterations: int


def solve_equilibrium(
    sys: MassActionSystem,
    dec: Decomposition,
    verdict: TheoremVerdict,
    anchor: Sequence[float],
    class_kind: str = "stoichiometric",
) -> EquilibriumResult:
    """The unique positive equilibrium in the compatibility class of ``anchor``."""
    kind = {"stoich": "stoichiometric", "kinetic": "kinetic"}.get(class_kind, class_kind)
    need = {"stoichiometric": UNIQUE_STOICH, "kinetic": UNIQUE_KINETIC}.get(kind)
    if need is None:
        raise ValueError(f"unknown class kind {class_kind!r}")
    if need not in verdict.conclusions:
        raise ValueError(f"verdict does not establish uniqueness per {kind} class")
    anchor = np.asarray(anchor, dtype=float)
    if anchor.shape != (sys.network.n,) or not np.all(anchor > 0):
        raise ValueError(f"anchor must be a positive vector of length {sys.network.n}")

    psys = mass_action_poly_system(dec)
    ms = monomial_structure(psys)
    log_c = psys.log_c()
    by_index = {ca.class_index: ca for ca in verdict.classes}
    pieces, roots = [], []
    for j in range(psys.ell):
        cols = psys.class_columns(j)
        ca = by_index.get(j) or analyze_class(psys, None, j)
        if ca.dimP == 0:
            seg = coefficient_polytope_segment(psys, j)
            pieces.append(np.log([float(x) for x in seg.vertices[0]]))
            roots.append(None)
            continue
        if existence_case(ca.b_tilde) is not None:
            raise ValueError(f"class {j + 1} fails the existence condition")
        prof = profile_for_class(ca, log_c[list(cols)])
        root = solve_univariate(prof, full_output=True)
        pieces.append(class_log_y(ca, root.u))
        roots.append(root.t)
    log_y = np.concatenate(pieces)
    fiber = fiber_from_polytope_point(ms, psys, None, log_y)

    report = structural_report(sys)
    basis = report.S_basis if kind == "stoichiometric" else report.K_basis
    x, info = birch_intersect(fiber.x_star, basis, anchor, full_output=True)
    mats = build_matrices(sys)
    residual = relative_residual(mats.Gamma_k.to_numpy(), monomials(mats.Y_s, x))
    if residual > 1e-8:
        raise ArithmeticError(f"equilibrium residual {residual:.3e} exceeds 1e-8")
    return EquilibriumResult(
        x_star=fiber.x_star,
        Lperp_basis=fiber.Lperp_basis,
        unique_in_class=True,
        anchor=anchor,
        x_in_class=x,
        residual=residual,
        t_roots=tuple(roots),
        class_kind=kind,
        newton_iterations=info.iterations,
    )
