"""Acceptance gate: one PASS/FAIL line per criterion, each at its stated tolerance."""

import json
import os
import time
from pathlib import Path

import numpy as np
import pytest

from crndep import randnet
from crndep.cli import main
from crndep.decomp import finest_independent_decomposition
from crndep.depone import FAIL, PASS, UNIQUE_STOICH, analyze_class, check_mass_action, mass_action_poly_system
from crndep.massaction import structural_report
from crndep.polycore import monomial_structure
from crndep.properties import (
    birch_memberships,
    check_birch,
    check_d1_system,
    check_dependency_identities,
    check_salt,
    check_two_block,
)
from crndep.netio import load_network
from crndep.ratlin import primitive_integer_vector

from conftest import example_one, example_three, example_two

NETWORKS = Path(__file__).resolve().parent.parent / "networks"
SEED = int(os.environ.get("CRN_SEED", "20240611"))
# example_two edge order: k12, k21, k23, k34, k43, k15; example_three: k21, k23, k32, k34, k45
EX2_K15_4 = (1, 1, 1, 1, 1, 4)
EX3_K32_3 = (1, 1, 3, 1, 1)


@pytest.fixture
def report(capsys):
    def emit(name, ok, detail=""):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail else ""))
        assert ok, detail

    return emit


def cli(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def verdict(sys):
    return check_mass_action(sys, finest_independent_decomposition(sys))


def test_ac1_example_one(report, capsys):
    start = time.perf_counter()
    r = structural_report(example_one())
    psys = mass_action_poly_system(finest_independent_decomposition(example_one()))
    (b,) = monomial_structure(psys).D_basis
    ca = analyze_class(psys)
    code_dep1, out_dep1 = cli(capsys, "check", NETWORKS / "example1.crn", "--theorem", "dep1", "--json")
    code_def1, out_def1 = cli(capsys, "check", NETWORKS / "example1.crn", "--theorem", "def1", "--json")
    elapsed = time.perf_counter() - start
    (v1,) = json.loads(out_dep1)["verdicts"]
    (v2,) = json.loads(out_def1)["verdicts"]
    delta_cond = next(c for c in v2["conditions"] if c["label"].startswith("(i)"))
    checks = {
        "delta = 2": r.delta == 2,
        "d = 1": r.d == 1,
        "b = +-(1,3,-1,-3)": tuple(primitive_integer_vector(b)) in {(1, 3, -1, -3), (-1, -3, 1, 3)},
        "b_tilde = (4,-1,-3)": ca.b_tilde == (4, -1, -3),
        "dep1 passes": code_dep1 == 0 and v1["status"] == PASS,
        "dep1 conclusion": v1["conclusion"] == UNIQUE_STOICH,
        "def1 fails on delta_1 <= 1": code_def1 == 2 and delta_cond["status"] == FAIL,
        "runtime < 1 s": elapsed < 1.0,
    }
    bad = [k for k, ok in checks.items() if not ok]
    report("AC1 Example 1 regression", not bad, f"failed {bad}" if bad else f"{elapsed:.3f} s")


def test_ac2_example_two(report):
    ca = analyze_class(mass_action_poly_system(finest_independent_decomposition(example_two())))
    ok_pass = verdict(example_two()).condition("(I)").status == PASS
    ok_fail = verdict(example_two(EX2_K15_4)).condition("(I)").status == FAIL
    ok = ca.b_tilde == (3, -2, -1) and ok_pass and ok_fail
    report("AC2 Example 2 condition (I) at k15 = 1 and k15 = 4", ok,
           f"b_tilde = {tuple(map(str, ca.b_tilde))}, (I) pass at k15=1: {ok_pass}, fail at k15=4: {ok_fail}")


def test_ac3_example_three(report):
    d = structural_report(example_three()).d
    v_pass, v_fail = verdict(example_three(EX3_K32_3)), verdict(example_three())
    ok = d == 0 and v_pass.status == PASS and v_fail.status == FAIL
    report("AC3 Example 3 at k32 = 3 and k32 = 1", ok, f"d = {d}, k32=3: {v_pass.status}, k32=1: {v_fail.status}")


def test_ac4_intro_example(report):
    r = structural_report(example_two())
    ell = finest_independent_decomposition(example_two()).ell
    got = (r.l, r.t, r.t_prime, r.delta, r.d, ell)
    report("AC4 intro network counts", got == (1, 2, 1, 2, 1, 1), f"(l, t, t', delta, d, ell) = {got}")


@pytest.mark.parametrize(
    "name, args, anchor",
    [
        ("Example 1", ("example1.crn",), (1.0, 1.0)),
        ("Example 3 k32=3", ("example3.crn", "--k", "k32=3"), (1.0, 1.0)),
    ],
)
def test_ac5_equilibrium(report, capsys, name, args, anchor):
    start = time.perf_counter()
    code, out = cli(capsys, "solve", NETWORKS / args[0], *args[1:],
                    "--anchor", ",".join(f"X{i + 1}={a}" for i, a in enumerate(anchor)), "--json")
    elapsed = time.perf_counter() - start
    doc = json.loads(out)
    eq = doc["equilibrium"]
    x, x_star = np.array(eq["x"]), np.array(eq["x_star"])
    S = structural_report(_with_rates(load_network(NETWORKS / args[0]), args[1:])).S_basis
    membership = max(birch_memberships(x, np.array(anchor), x_star, S))
    checks = {"exit 0": code == 0, "residual": eq["residual"] <= 1e-8, "membership": membership <= 1e-8,
              "runtime": elapsed < 1.0}
    detail = f"residual {eq['residual']:.1e}, membership {membership:.1e}, {elapsed:.3f} s"
    if name == "Example 1":
        (t,) = eq["t_roots"]
        f = (1 + t) ** 4 / (1 - t) ** 3
        checks["|f(t) - 32|"] = abs(f - 32.0) <= 1e-9 * 32
        detail += f", t = {t:.15g}, |f(t) - 32| = {abs(f - 32.0):.1e}"
    bad = [k for k, ok in checks.items() if not ok]
    report(f"AC5 solve {name}", not bad, detail + (f"; failed {bad}" if bad else ""))


def _with_rates(sys, extra):
    return sys.with_rates(dict(a.split("=") for a in extra[1::2])) if extra else sys


def _suite(name, count, gen, check, report):
    rng = np.random.default_rng(SEED)
    fails = []
    for _ in range(count):
        fails += check(*gen(rng))
    report(name, not fails, f"{count} cases, seed {SEED}" + (f", first failure: {fails[0]}" if fails else ""))


def test_ac6_dependency_identities(report):
    _suite("AC6 dependency identities", 200, lambda rng: (randnet.random_network(rng, 4, 6),),
           check_dependency_identities, report)


def test_ac7_two_block_decomposition(report):
    _suite("AC7 two-block decomposition", 100, randnet.random_two_block_network, check_two_block, report)


def test_ac8_second_salt_theorem(report):
    _suite("AC8 second salt theorem", 500, lambda rng: randnet.random_one_component_digraph(rng, 8),
           check_salt, report)


def test_ac9_d1_root_counting(report):
    rng = np.random.default_rng(SEED)
    fails, unique, nonexist = [], 0, 0
    for _ in range(100):
        out = check_d1_system(randnet.random_d1_system(rng, 5), rng, n_c=100)
        fails += out.failures
        unique += out.one_class_pass
        if out.unreachable_roots is not None:
            nonexist += 1
            if out.unreachable_roots != 0:
                fails.append("constructed c has a root")
    detail = f"100 systems, {unique} pass the one-class test, {nonexist} fail existence"
    report("AC9 d = 1 theorem vs root counting", not fails and unique > 0 and nonexist > 0,
           detail + (f", first failure: {fails[0]}" if fails else ""))


def test_ac10_birch(report):
    rng = np.random.default_rng(SEED)
    fails, worst_it, worst_mem, worst_drift = [], 0, 0.0, 0.0
    for _ in range(100):
        out = check_birch(*randnet.random_birch_instance(rng, 6), rng, shifts=10)
        fails += out.failures
        worst_it = max(worst_it, out.iterations)
        worst_mem = max(worst_mem, *out.membership)
        worst_drift = max(worst_drift, out.coset_drift)
    report("AC10 Birch intersection", not fails,
           f"100 instances, max iterations {worst_it}, membership {worst_mem:.1e}, coset drift {worst_drift:.1e}")
