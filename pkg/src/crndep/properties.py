"""Property oracles shared by the test suite and ``crndep verify``.

Each ``check_*`` function returns a list of failure messages (empty on success).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .decomp import decomposition_checks, finest_independent_decomposition
from .depone import (
    analyze_class,
    check_existence,
    check_one_class,
    unreachable_c,
)
from .equilib import birch_intersect
from .graph import graph_stats
from .massaction import MassActionSystem, dependency_via_cayley, kinetic_in_stoichiometric, structural_report
from .polycore import PolySystem, monomial_structure
from .ratlin import RatMatrix, image_contains, kernel_basis
from .salt import salt_certificates
from . import randnet


def check_dependency_identities(sys: MassActionSystem) -> list[str]:
    r = structural_report(sys)
    fails = []
    d_cayley = dependency_via_cayley(r.matrices.Y_s)
    if r.d != d_cayley:
        fails.append(f"d via L = {r.d} but d via the Cayley matrix = {d_cayley}")
    psys = PolySystem(r.Gamma_k, r.matrices.Y_s, (r.n_sources,), (1,) * r.n_sources)
    if monomial_structure(psys).d != r.d:
        fails.append("d via M disagrees with the structural report")
    if r.delta < 0 or r.d < 0:
        fails.append(f"negative count: delta = {r.delta}, d = {r.d}")
    if r.t == r.l and not r.K_equals_S:
        fails.append("t = l but K != S")
    if r.dim_ker_R != r.t_prime:
        fails.append(f"dim ker R_k = {r.dim_ker_R} but t' = {r.t_prime}")
    if not kinetic_in_stoichiometric(r):
        fails.append("K is not contained in S")
    if not image_contains(r.S_basis, r.L_basis):
        fails.append("L is not contained in S")
    n_ns = len(sys.network.graph.non_sources)
    if r.t != r.t_prime + n_ns:
        fails.append(f"t = {r.t} but t' + |V_ns| = {r.t_prime + n_ns}")
    return fails


def check_two_block(sys: MassActionSystem, blocks) -> list[str]:
    dec = finest_independent_decomposition(sys)
    fails = []
    if dec.edge_partition != tuple(tuple(b) for b in blocks):
        fails.append(f"recovered {dec.edge_partition}, expected {blocks}")
    if not dec.connected_ok:
        fails.append("blocks reported disconnected")
        return fails
    chk = decomposition_checks(dec)
    fails.extend(f"identity failed: {label}" for label, ok in chk.items() if not ok)
    return fails


def check_salt(g, k) -> list[str]:
    try:
        certs = salt_certificates(g, k)
    except AssertionError as exc:
        return [str(exc)]
    stats = graph_stats(g)
    expected = sum(1 for T in stats.terminal_sccs if all(v in set(g.sources) for v in T))
    if len(certs) != expected or not certs:
        return [f"expected {expected} certificates, got {len(certs)}"]
    return []


def _log1p_qtanh_grid(q: float, s: np.ndarray) -> np.ndarray:
    # 1 + q tanh s = ((1+q) e^s + (1-q) e^-s) / (e^s + e^-s)
    with np.errstate(divide="ignore"):
        num = np.logaddexp(s + np.log1p(q), -s + np.log1p(-q))
    return num - np.logaddexp(s, -s)


GRID = np.linspace(-200.0, 200.0, 16001)


def count_roots(q_tilde, b_tilde, log_c_star: float, grid: np.ndarray = GRID) -> int:
    """Number of sign changes of ``log f - log c*`` on a grid in ``s = atanh(t)``."""
    g = -float(log_c_star) * np.ones_like(grid)
    for q, b in zip(q_tilde, b_tilde):
        g += float(b) * _log1p_qtanh_grid(float(q), grid)
    sign = np.sign(g)
    exact = int(np.count_nonzero(sign == 0))
    nz = sign[sign != 0]
    return exact + int(np.count_nonzero(nz[1:] != nz[:-1]))


@dataclass
class D1Outcome:
    one_class_pass: bool
    existence_pass: bool
    root_counts: list[int] = field(default_factory=list)
    unreachable_roots: int | None = None
    failures: list[str] = field(default_factory=list)


def check_d1_system(psys: PolySystem, rng: np.random.Generator, n_c: int = 100) -> D1Outcome:
    ca = analyze_class(psys, None, 0)
    one = check_one_class(ca).passed
    exists = check_existence(ca).passed
    out = D1Outcome(one, exists)
    b = np.array([float(x) for x in ca.b])
    log_ybar = np.log([float(x) for x in ca.y_bar])
    if one:
        for _ in range(n_c):
            log_c = rng.normal(0.0, 3.0, size=psys.m)
            count = count_roots(ca.q_tilde, ca.b_tilde, float(b @ log_c - b @ log_ybar))
            out.root_counts.append(count)
            if count != 1:
                out.failures.append(f"b_tilde = {ca.b_tilde}: {count} roots for log c = {log_c}")
    if not exists:
        c = unreachable_c(ca)
        log_c_star = float(b @ np.log(c) - b @ log_ybar)
        out.unreachable_roots = count_roots(ca.q_tilde, ca.b_tilde, log_c_star)
        if out.unreachable_roots != 0:
            out.failures.append(f"constructed c reaches f: b_tilde = {ca.b_tilde}")
    if one and not exists:
        out.failures.append("one-class theorem passed while existence failed")
    return out


def _proj_perp(S: RatMatrix, v: np.ndarray) -> np.ndarray:
    """Component of ``v`` orthogonal to ``im S``."""
    basis = kernel_basis(S.T).as_matrix().to_numpy() if S.cols else np.eye(len(v))
    if basis.shape[1] == 0:
        return np.zeros_like(v)
    W = np.linalg.qr(basis)[0]
    return W @ (W.T @ v)


def birch_memberships(x, x_prime, x_star, S: RatMatrix) -> tuple[float, float]:
    """(distance of ``x - x'`` from S, distance of ``log x - log x*`` from S_perp), both relative."""
    a = np.abs(_proj_perp(S, x - x_prime)).max(initial=0.0) / max(1.0, np.abs(x_prime).max())
    lv = np.log(x) - np.log(x_star)
    b = np.abs(lv - _proj_perp(S, lv)).max(initial=0.0) / max(1.0, np.abs(lv).max(initial=0.0))
    return float(a), float(b)


@dataclass
class BirchOutcome:
    iterations: int
    membership: tuple[float, float]
    coset_drift: float
    failures: list[str] = field(default_factory=list)


def check_birch(x_prime, x_star, S: RatMatrix, rng: np.random.Generator, shifts: int = 10) -> BirchOutcome:
    x, info = birch_intersect(x_star, S, x_prime, full_output=True)
    mem = birch_memberships(x, x_prime, x_star, S)
    drift = 0.0
    Sf = S.to_numpy()
    for _ in range(shifts if S.cols else 0):
        direction = Sf @ rng.normal(size=S.cols)
        # keep x' + s * direction positive
        neg = direction < 0
        limit = np.min(-x_prime[neg] / direction[neg]) if neg.any() else 1.0
        shifted = x_prime + 0.9 * min(1.0, limit) * rng.uniform() * direction
        y = birch_intersect(x_star, S, shifted)
        drift = max(drift, float(np.abs(y - x).max() / max(1.0, np.abs(x).max())))
    out = BirchOutcome(info.iterations, mem, drift)
    if info.iterations > 50:
        out.failures.append(f"Newton used {info.iterations} iterations")
    if max(mem) > 1e-8:
        out.failures.append(f"membership residuals {mem}")
    if drift > 1e-8:
        out.failures.append(f"coset drift {drift:.3e}")
    return out


@dataclass
class SuiteResult:
    name: str
    cases: int
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures


def run_suites(rng: np.random.Generator, n: int, base: MassActionSystem | None = None) -> list[SuiteResult]:
    """All randomized oracles with ``n`` cases each (plus rate resampling of ``base``)."""
    results = []
    if base is not None:
        fails = []
        for _ in range(n):
            sys = base.with_rates(
                dict(zip(base.rate_names, randnet.random_rates(rng, len(base.rate_names))))
            )
            fails += check_dependency_identities(sys)
            dec = finest_independent_decomposition(sys)
            if dec.connected_ok:
                fails += [f"identity failed: {lab}" for lab, ok in decomposition_checks(dec).items() if not ok]
            r = structural_report(sys)
            if r.l == 1 and r.t_prime:
                fails += check_salt(sys.network.graph, sys.k)
        results.append(SuiteResult("input network, random rate constants", n, fails))
    fails = []
    for _ in range(n):
        fails += check_dependency_identities(randnet.random_network(rng))
    results.append(SuiteResult("dependency identities", n, fails))
    fails = []
    for _ in range(n):
        fails += check_two_block(*randnet.random_two_block_network(rng))
    results.append(SuiteResult("two-block decomposition", n, fails))
    fails = []
    for _ in range(n):
        fails += check_salt(*randnet.random_one_component_digraph(rng))
    results.append(SuiteResult("second salt theorem", n, fails))
    fails = []
    for _ in range(n):
        fails += check_d1_system(randnet.random_d1_system(rng), rng, n_c=20).failures
    results.append(SuiteResult("d = 1 against root counting", n, fails))
    fails = []
    for _ in range(n):
        fails += check_birch(*randnet.random_birch_instance(rng), rng).failures
    results.append(SuiteResult("Birch intersection", n, fails))
    return results


__all__ = [
    "check_dependency_identities",
    "check_two_block",
    "check_salt",
    "count_roots",
    "check_d1_system",
    "check_birch",
    "birch_memberships",
    "run_suites",
]
