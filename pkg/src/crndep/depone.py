"""Condition checks for the dependency-one results.

A class with a one-dimensional coefficient polytope is summarized by the
vector ``q`` (position of each coordinate along the segment), the dependency
vector ``b`` and their lumped forms. The verdict functions turn those into
condition tables with witnesses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .decomp import Decomposition, NotApplicableError, combined_matrices
from .massaction import MassActionSystem, structural_report
from .polycore import (
    MonomialStructure,
    PolySystem,
    PolytopeError,
    coefficient_polytope_segment,
    monomial_structure,
)
from .ratlin import (
    Vector,
    as_vector,
    hstack,
    kernel_basis,
    positive_kernel_search,
    primitive_integer_vector,
    rank,
    same_image,
)

PASS, FAIL, NA = "pass", "fail", "n/a"

UNIQUE_STOICH = "unique per stoichiometric class"
UNIQUE_KINETIC = "unique per kinetic class"
UNIQUE_Y = "|Y_c| = 1 for all c"
EXISTS_C = "exists for all c"
EXISTS_K = "exists for all k"
NO_CONCLUSION = "no conclusion"


def _fmt(v: Sequence) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


@dataclass(frozen=True)
class ClassAnalysis:
    """Per-class data behind the dependency-one conditions.

    ``q`` and ``b`` are in the class's own column order; ``order`` is the
    stable descending sort of ``q`` and ``eq_classes`` groups equal entries
    (as original indices). ``b_tilde`` is empty when ``d == 0``.
    """

    class_index: int
    dimP: int
    d: int
    vertices: tuple[Vector, ...] | None
    q: Vector | None
    order: tuple[int, ...]
    eq_classes: tuple[tuple[int, ...], ...]
    q_tilde: Vector
    b: Vector | None
    b_tilde: Vector
    partial_sums: Vector
    partial_sums_ok: bool
    sign_branch: str | None
    endpoints_ok: bool

    @property
    def omega(self) -> int:
        return len(self.q_tilde)

    @property
    def y_bar(self) -> Vector | None:
        if self.vertices is None or len(self.vertices) != 2:
            return None
        y1, y2 = self.vertices
        return tuple((a + b) / 2 for a, b in zip(y1, y2))

    @property
    def y_hat(self) -> Vector | None:
        if self.vertices is None or len(self.vertices) != 2:
            return None
        y1, y2 = self.vertices
        return tuple((a - b) / 2 for a, b in zip(y1, y2))

    @classmethod
    def from_profile(cls, q_tilde: Sequence, b_tilde: Sequence, class_index: int = 0) -> ClassAnalysis:
        """An analysis built directly from lumped data (``q_tilde`` strictly decreasing)."""
        qt, bt = as_vector(q_tilde), as_vector(b_tilde)
        if len(qt) != len(bt) or len(qt) < 2:
            raise ValueError("q_tilde and b_tilde need equal length >= 2")
        if any(a <= b for a, b in zip(qt, qt[1:])):
            raise ValueError("q_tilde must be strictly decreasing")
        sums, ok, branch = _partial_sums(bt)
        return cls(
            class_index=class_index,
            dimP=1,
            d=1,
            vertices=None,
            q=qt,
            order=tuple(range(len(qt))),
            eq_classes=tuple((i,) for i in range(len(qt))),
            q_tilde=qt,
            b=bt,
            b_tilde=bt,
            partial_sums=sums,
            partial_sums_ok=ok,
            sign_branch=branch,
            endpoints_ok=bt[0] * bt[-1] < 0,
        )


def _partial_sums(bt: Vector) -> tuple[Vector, bool, str | None]:
    sums, acc = [], Fraction(0)
    for x in bt[:-1]:
        acc += x
        sums.append(acc)
    if all(s >= 0 for s in sums):
        return tuple(sums), True, ">= 0"
    if all(s <= 0 for s in sums):
        return tuple(sums), True, "<= 0"
    return tuple(sums), False, None


def _lump(values: Sequence[Fraction], groups: Sequence[Sequence[int]]) -> Vector:
    return tuple(sum((values[i] for i in g), Fraction(0)) for g in groups)


def analyze_class(sys: PolySystem, ms: MonomialStructure | None = None, j: int = 0) -> ClassAnalysis:
    """Analyse class ``j`` of ``sys``; ``ms`` may carry the precomputed structure of that class."""
    sub = sys.class_system(j)
    if ms is None or ms.Bcal.cols != sub.m:
        ms = monomial_structure(sub)
    seg = coefficient_polytope_segment(sys, j)
    if seg.dim >= 2:
        raise NotApplicableError(f"class {j}: coefficient polytope has dimension {seg.dim}")
    if ms.d >= 2:
        raise NotApplicableError(f"class {j}: monomial dependency {ms.d}")

    q = None
    order = tuple(range(sub.m))
    groups: tuple[tuple[int, ...], ...] = ()
    q_tilde: Vector = ()
    if seg.dim == 1:
        y1, y2 = seg.vertices
        q = tuple((a - b) / (a + b) for a, b in zip(y1, y2))
        order = tuple(sorted(range(sub.m), key=lambda i: -q[i]))
        runs: list[list[int]] = []
        for i in order:
            if runs and q[runs[-1][0]] == q[i]:
                runs[-1].append(i)
            else:
                runs.append([i])
        groups = tuple(tuple(r) for r in runs)
        q_tilde = tuple(q[g[0]] for g in groups)

    b = None
    b_tilde: Vector = ()
    sums: Vector = ()
    ok, branch, ends = True, None, True
    if ms.d == 1:
        b = primitive_integer_vector(ms.D_basis.vectors[0])
        if groups:
            b_tilde = _lump(b, groups)
            lead = next((x for x in b_tilde if x != 0), None) or next(x for x in b if x != 0)
            if lead < 0:
                b = tuple(-x for x in b)
                b_tilde = tuple(-x for x in b_tilde)
            sums, ok, branch = _partial_sums(b_tilde)
            ends = b_tilde[0] * b_tilde[-1] < 0
        else:
            if next(x for x in b if x != 0) < 0:
                b = tuple(-x for x in b)
            ok, ends = False, False
    return ClassAnalysis(
        class_index=j,
        dimP=seg.dim,
        d=ms.d,
        vertices=seg.vertices,
        q=q,
        order=order,
        eq_classes=groups,
        q_tilde=q_tilde,
        b=b,
        b_tilde=b_tilde,
        partial_sums=sums,
        partial_sums_ok=ok,
        sign_branch=branch,
        endpoints_ok=ends,
    )


@dataclass(frozen=True)
class Condition:
    label: str
    status: str
    witness: str = ""


@dataclass(frozen=True)
class TheoremVerdict:
    theorem: str
    conditions: tuple[Condition, ...]
    conclusion: str
    conclusions: tuple[str, ...] = ()
    diagnostics: tuple[Condition, ...] = ()
    classes: tuple[ClassAnalysis, ...] = field(default=())
    case: str | None = None

    @property
    def status(self) -> str:
        if self.conclusion != NO_CONCLUSION:
            return PASS
        if any(c.status == FAIL for c in self.conditions):
            return FAIL
        return NA

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def condition(self, label_prefix: str) -> Condition:
        for c in self.conditions:
            if c.label.startswith(label_prefix):
                return c
        raise KeyError(label_prefix)


def _sign_conditions(ca: ClassAnalysis, prefix: str = "") -> list[Condition]:
    bt = _fmt(ca.b_tilde)
    return [
        Condition(
            f"{prefix}partial sums of b_tilde all >= 0 or all <= 0",
            PASS if ca.partial_sums_ok else FAIL,
            f"b_tilde = {bt}, partial sums = {_fmt(ca.partial_sums)}",
        ),
        Condition(
            f"{prefix}b_tilde_1 * b_tilde_omega < 0",
            PASS if ca.endpoints_ok else FAIL,
            f"{ca.b_tilde[0]} * {ca.b_tilde[-1]} = {ca.b_tilde[0] * ca.b_tilde[-1]}",
        ),
    ]


def check_one_class(ca: ClassAnalysis) -> TheoremVerdict:
    """``|Y_c| = 1`` for all ``c`` from the sign pattern of the lumped dependency vector."""
    if ca.d != ca.dimP:
        cond = Condition("d = dim P", NA, f"d = {ca.d}, dim P = {ca.dimP}")
        return TheoremVerdict("dep1-one-class", (cond,), NO_CONCLUSION, classes=(ca,))
    if ca.d == 0:
        cond = Condition("d = dim P = 0 (Y_c is the polytope point)", PASS)
        return TheoremVerdict("dep1-one-class", (cond,), UNIQUE_Y, (UNIQUE_Y,), classes=(ca,))
    conds = tuple(_sign_conditions(ca))
    good = all(c.status == PASS for c in conds)
    concl = UNIQUE_Y if good else NO_CONCLUSION
    return TheoremVerdict(
        "dep1-one-class", conds, concl, (concl,) if good else (), classes=(ca,), case=ca.sign_branch
    )


# limits of f(t) = prod (1 + t q_i)^{b_i} as t -> -1 (left) and t -> 1 (right)
def _limit(exponent: Fraction) -> str:
    if exponent > 0:
        return "0"
    if exponent < 0:
        return "inf"
    return "finite"


def existence_case(b_tilde: Sequence) -> tuple[str, str] | None:
    """Which of the failure cases applies, as ``(name, bound)``; None when ``b1 * b_omega < 0``.

    ``bound`` is "above" when large targets are unreachable and "below" when
    small ones are.
    """
    b1, bw = as_vector(b_tilde)[0], as_vector(b_tilde)[-1]
    if b1 * bw < 0:
        return None

    def s(x):
        return "= 0" if x == 0 else ("> 0" if x > 0 else "< 0")

    left, right = _limit(b1), _limit(bw)
    bound = "below" if "inf" in (left, right) else "above"
    name = (
        f"b_tilde_1 {s(b1)} and b_tilde_omega {s(bw)}: "
        f"f -> {left} at t = -1, f -> {right} at t = 1, f bounded {bound}"
    )
    return name, bound


def check_existence(ca: ClassAnalysis) -> TheoremVerdict:
    """``|Y_c| >= 1`` for all ``c`` iff ``b1 * b_omega < 0``; failures name the case."""
    if not (ca.d == 1 and ca.dimP == 1):
        cond = Condition("d = dim P = 1", NA, f"d = {ca.d}, dim P = {ca.dimP}")
        return TheoremVerdict("existence", (cond,), NO_CONCLUSION, classes=(ca,))
    case = existence_case(ca.b_tilde)
    cond = Condition(
        "b_tilde_1 * b_tilde_omega < 0",
        PASS if case is None else FAIL,
        f"b_tilde = {_fmt(ca.b_tilde)}" + ("" if case is None else f"; {case[0]}"),
    )
    if case is None:
        return TheoremVerdict("existence", (cond,), EXISTS_C, (EXISTS_C,), classes=(ca,))
    return TheoremVerdict("existence", (cond,), NO_CONCLUSION, classes=(ca,), case=case[0])


def log_f(q_tilde: Sequence, b_tilde: Sequence, t: float) -> float:
    return float(sum(float(b) * math.log1p(t * float(q)) for q, b in zip(q_tilde, b_tilde)))


def unreachable_log_target(q_tilde: Sequence, b_tilde: Sequence) -> float:
    """A value ``log c*`` outside the range of ``log f`` on ``(-1, 1)``.

    Uses the termwise bounds ``log(1 - |q|) < log(1 + t q) < log(1 + |q|)``;
    in a failure case every unbounded factor pushes ``f`` the harmless way.
    """
    case = existence_case(b_tilde)
    if case is None:
        raise ValueError("every target is reachable when b_tilde_1 * b_tilde_omega < 0")
    qt = [abs(float(q)) for q in q_tilde]
    bt = [float(b) for b in b_tilde]
    if case[1] == "above":
        upper = 0.0
        for q, b in zip(qt, bt):
            upper += b * math.log1p(q) if b > 0 else (b * math.log1p(-q) if b < 0 else 0.0)
        return upper + 1.0
    lower = 0.0
    for q, b in zip(qt, bt):
        lower += b * math.log1p(-q) if b > 0 else (b * math.log1p(q) if b < 0 else 0.0)
    return lower - 1.0


def unreachable_c(ca: ClassAnalysis) -> np.ndarray:
    """Coefficients ``c`` of the class for which the binomial condition has no solution.

    ``c = exp(alpha b)`` with ``alpha`` chosen so ``c^b ybar^-b`` equals an
    unreachable target.
    """
    if ca.y_bar is None:
        raise ValueError("needs the polytope vertices of the class")
    target = unreachable_log_target(ca.q_tilde, ca.b_tilde)
    b = np.array([float(x) for x in ca.b])
    log_ybar = np.log([float(x) for x in ca.y_bar])
    alpha = (target + b @ log_ybar) / (b @ b)
    return np.exp(alpha * b)


def check_decomposable(sys: PolySystem) -> TheoremVerdict:
    """``|Y_c| = 1`` for all ``c`` for a polynomial system with several classes."""
    conds: list[Condition] = []
    lp = positive_kernel_search(sys.A)
    conds.append(
        Condition(
            "(i) ker A meets the positive orthant",
            PASS if lp.feasible else FAIL,
            f"v = {_fmt(lp.point)}" if lp.feasible else f"Farkas certificate z = {_fmt(lp.certificate)}",
        )
    )
    try:
        ms = monomial_structure(sys)
    except ValueError as exc:
        conds.append(Condition("(ii) d = d_1 + ... + d_ell", NA, str(exc)))
        return TheoremVerdict("dep1-decomposable", tuple(conds), NO_CONCLUSION)
    parts = [monomial_structure(sys.class_system(j)).d for j in range(sys.ell)]
    conds.append(
        Condition(
            "(ii) d = d_1 + ... + d_ell",
            PASS if ms.d == sum(parts) else FAIL,
            f"d = {ms.d}, d_j = {_fmt(parts)}",
        )
    )
    classes, class_conds = _class_conditions(sys, lp.feasible, require_KL=None)
    conds.extend(class_conds)
    good = all(c.status == PASS for c in conds)
    concl = UNIQUE_Y if good else NO_CONCLUSION
    return TheoremVerdict(
        "dep1-decomposable", tuple(conds), concl, (concl,) if good else (), classes=tuple(classes)
    )


def _class_conditions(sys: PolySystem, feasible: bool, require_KL, label: str = "(iii)"):
    """Per-class items: ``d_j = dim P_j <= 1`` (or ``d_j <= 1 and K_j = L_j``) plus sign conditions."""
    classes: list[ClassAnalysis] = []
    conds: list[Condition] = []
    for j in range(sys.ell):
        tag = f"{label} class {j + 1}: "
        if not feasible:
            conds.append(Condition(tag + "class analysis", NA, "coefficient cone is empty"))
            continue
        sub_ms = monomial_structure(sys.class_system(j))
        if require_KL is not None:
            KL = require_KL[j]
            first = Condition(
                tag + "d_j <= 1 and K_j = L_j",
                PASS if sub_ms.d <= 1 and KL else FAIL,
                f"d_j = {sub_ms.d}, K_j = L_j: {KL}",
            )
        else:
            dimP = kernel_basis(sys.A.select_columns(sys.class_columns(j))).dim - 1
            first = Condition(
                tag + "d_j = dim P_j <= 1",
                PASS if sub_ms.d == dimP <= 1 else FAIL,
                f"d_j = {sub_ms.d}, dim P_j = {dimP}",
            )
        conds.append(first)
        try:
            ca = analyze_class(sys, sub_ms, j)
        except (NotApplicableError, PolytopeError) as exc:
            conds.append(Condition(tag + "class analysis", NA, str(exc)))
            continue
        classes.append(ca)
        if ca.d == 1:
            if ca.dimP != 1:
                conds.append(Condition(tag + "sign conditions", NA, f"dim P_j = {ca.dimP}"))
            else:
                conds.extend(_sign_conditions(ca, tag))
    return classes, conds


def mass_action_poly_system(dec: Decomposition) -> PolySystem:
    """``Gamma_k x^{Y*_s} = 0`` as ``A (c o x^B) = 0`` with ``c = 1`` and one class per subnetwork."""
    comb = combined_matrices(dec)
    return PolySystem(comb.Gamma_k, comb.Y_s, comb.class_sizes, (1,) * comb.Y_s.cols)


def _not_applicable(theorem: str, dec: Decomposition) -> TheoremVerdict | None:
    if not dec.independent_ok:
        reason = "not applicable: subnetworks not independent"
    elif not dec.connected_ok:
        reason = "not applicable: subnetworks not connected"
    else:
        return None
    return TheoremVerdict(theorem, (Condition("decomposition hypotheses", NA, reason),), NO_CONCLUSION)


def check_mass_action(sys: MassActionSystem, dec: Decomposition) -> TheoremVerdict:
    """Conditions (I), (IIa)/(IIb), (III) of the dependency-one theorem for mass-action systems."""
    na = _not_applicable("dep1-mass-action", dec)
    if na is not None:
        return na
    psys = mass_action_poly_system(dec)
    full = structural_report(sys)
    subs = dec.subnetworks
    n = sys.network.n

    lp = positive_kernel_search(psys.A)
    c1 = Condition(
        "(I) ker Gamma_k meets the positive orthant",
        PASS if lp.feasible else FAIL,
        f"v = {_fmt(lp.point)}" if lp.feasible else f"Farkas certificate z = {_fmt(lp.certificate)}",
    )
    L = hstack(*(s.report.L_basis for s in subs), rows=n)
    K_eq_L = same_image(full.K_basis, L)
    L_eq_S = same_image(L, full.S_basis)
    dims = f"dim K = {full.dim_K}, dim L = {rank(L)}, dim S = {full.dim_S}"
    c2a = Condition("(IIa) K = L", PASS if K_eq_L else FAIL, dims)
    c2b = Condition("(IIb) L = S", PASS if L_eq_S else FAIL, dims)
    KL = [same_image(s.report.K_basis, s.report.L_basis) for s in subs]
    classes, c3 = _class_conditions(psys, lp.feasible, require_KL=KL, label="(III)")

    diags: list[Condition] = []
    if lp.feasible:
        for s in subs:
            r = s.report
            dimP = len(s.sources) - r.dim_K - 1
            lemma = (dimP == r.d) == (r.dim_K == r.dim_L)
            if not lemma:
                raise AssertionError("dim P = d iff dim K = dim L violated")
            diags.append(
                Condition(
                    f"class {s.index + 1}: dim P = d iff dim K = dim L",
                    PASS,
                    f"dim P = {dimP}, d = {r.d}, dim K = {r.dim_K}, dim L = {r.dim_L}",
                )
            )
            if dimP <= 1:
                diags.append(
                    Condition(
                        f"class {s.index + 1}: dim P <= 1 implies t' <= 1",
                        PASS if r.t_prime <= 1 else FAIL,
                        f"dim P = {dimP}, t' = {r.t_prime}",
                    )
                )

    core_ok = c1.status == PASS and all(c.status == PASS for c in c3)
    conclusions = []
    if core_ok and L_eq_S:
        conclusions.append(UNIQUE_STOICH)
    if core_ok and K_eq_L:
        conclusions.append(UNIQUE_KINETIC)
    conclusion = conclusions[0] if conclusions else NO_CONCLUSION
    return TheoremVerdict(
        "dep1-mass-action",
        (c1, c2a, c2b, *c3),
        conclusion,
        tuple(conclusions),
        tuple(diags),
        tuple(classes),
    )


def check_deficiency_one(sys: MassActionSystem, dec: Decomposition) -> TheoremVerdict:
    """Deficiency-one conditions per independent subnetwork."""
    na = _not_applicable("def1", dec)
    if na is not None:
        return na
    subs = dec.subnetworks
    deltas = [s.delta for s in subs]
    ts = [s.t for s in subs]
    ci = Condition(
        "(i) delta_j <= 1 for every subnetwork",
        PASS if all(x <= 1 for x in deltas) else FAIL,
        f"delta_j = {_fmt(deltas)}",
    )
    cii = Condition(
        "(ii) t_j = 1 for every subnetwork",
        PASS if all(x == 1 for x in ts) else FAIL,
        f"t_j = {_fmt(ts)}",
    )
    psys = mass_action_poly_system(dec)
    lp = positive_kernel_search(psys.A)
    ciii = Condition(
        "(iii) a positive equilibrium exists",
        PASS if lp.feasible else FAIL,
        f"ker Gamma_k point v = {_fmt(lp.point)}"
        if lp.feasible
        else f"Farkas certificate z = {_fmt(lp.certificate)}",
    )
    weakly_rev = structural_report(sys).stats.weakly_reversible

    diags: list[Condition] = []
    for s, t in zip(subs, ts):
        r = s.report
        if t != 1 or not positive_kernel_search(r.Gamma_k).feasible:
            continue
        KLS = same_image(r.K_basis, r.L_basis) and same_image(r.L_basis, r.S_basis)
        dform = r.d == r.delta + r.t_prime - 1
        if not (KLS and dform):
            raise AssertionError(f"subnetwork {s.index + 1}: K = L = S or d = delta + t' - 1 violated")
        diags.append(
            Condition(
                f"subnetwork {s.index + 1}: K = L = S and d = delta + t' - 1",
                PASS,
                f"d = {r.d}, delta = {r.delta}, t' = {r.t_prime}",
            )
        )
    if weakly_rev:
        diags.append(Condition("weakly reversible", PASS, "(iii) holds for all rate constants"))

    conds = (ci, cii, ciii)
    conclusions = []
    if ci.status == PASS and cii.status == PASS:
        if ciii.status == PASS:
            conclusions.append(UNIQUE_STOICH)
        if weakly_rev:
            conclusions.append(EXISTS_K)
    conclusion = UNIQUE_STOICH if UNIQUE_STOICH in conclusions else NO_CONCLUSION
    return TheoremVerdict("def1", conds, conclusion, tuple(conclusions), tuple(diags))
