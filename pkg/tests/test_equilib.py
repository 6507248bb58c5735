import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import brentq

from crndep import randnet
from crndep.decomp import finest_independent_decomposition
from crndep.depone import analyze_class, check_mass_action, mass_action_poly_system
from crndep.equilib import (
    UnivariateProfile,
    birch_intersect,
    log1p_qtanh,
    profile_for_class,
    solve_equilibrium,
    solve_univariate,
)
from crndep.massaction import evaluate_vector_field, structural_report
from crndep.properties import birch_memberships, check_birch
from crndep.ratlin import RatMatrix

from conftest import example_one, example_three, example_two, reversible_pair

EX3_K32_3 = (1, 1, 3, 1, 1)


def solve(sys, anchor, kind="stoichiometric"):
    dec = finest_independent_decomposition(sys)
    return solve_equilibrium(sys, dec, check_mass_action(sys, dec), anchor, kind)


def test_example_one_target_is_32():
    ca = analyze_class(mass_action_poly_system(finest_independent_decomposition(example_one())))
    c_star = Fraction(1)
    for y, b in zip(ca.y_bar, ca.b):
        c_star *= y ** -b
    assert c_star == 32
    assert profile_for_class(ca, np.zeros(4)).c_star == pytest.approx(32.0, rel=1e-14)


def test_example_one_root_matches_brentq():
    p = UnivariateProfile((1, 0, -1), (4, -1, -3), math.log(32.0))
    t = solve_univariate(p)
    oracle = brentq(lambda s: (1 + s) ** 4 / (1 - s) ** 3 - 32.0, -0.99, 0.99, xtol=1e-15)
    assert t == pytest.approx(oracle, abs=1e-12)
    assert abs((1 + t) ** 4 / (1 - t) ** 3 - 32.0) <= 1e-9 * 32
    assert round(t, 3) == 0.472


def test_symmetric_root():
    assert solve_univariate(UnivariateProfile((1, -1), (1, -1), 0.0)) == pytest.approx(0.0, abs=1e-12)


def test_quadratic_closed_form():
    # (1+t)^2 / (1-t) = 4  <=>  t^2 + 6t - 3 = 0
    t = solve_univariate(UnivariateProfile((1, -1), (2, -1), math.log(4.0)))
    assert t == pytest.approx(-3 + 2 * math.sqrt(3), abs=1e-12)


def test_non_monotone_profile_rejected():
    with pytest.raises(ValueError):
        solve_univariate(UnivariateProfile((1, 0, -1), (1, -3, 2), 0.0))


def test_extreme_targets_stay_inside_interval():
    p = UnivariateProfile((1, -1), (1, -1), 80.0)
    root = solve_univariate(p, full_output=True)
    assert abs(p.log_f_u(root.u) - 80.0) <= 1e-12
    assert root.t <= 1.0


@settings(max_examples=100, deadline=None)
@given(st.floats(-1, 1), st.floats(-30, 30))
def test_log1p_qtanh_matches_direct(q, u):
    direct = math.log1p(q * math.tanh(u)) if 1 + q * math.tanh(u) > 1e-300 else None
    if direct is not None and abs(1 + q * math.tanh(u)) > 1e-8:
        assert log1p_qtanh(q, u) == pytest.approx(direct, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.floats(-20, 20))
def test_univariate_against_brentq(b1, b2, log_c):
    p = UnivariateProfile((1, -1), (b1, -b2), log_c)
    t = solve_univariate(p)
    assert abs(p.log_f(t) - log_c) <= 1e-9 or abs(t) > 1 - 1e-6
    if abs(log_c) < 10:
        oracle = brentq(lambda s: p.log_f(s) - log_c, -1 + 1e-12, 1 - 1e-12, xtol=1e-15)
        assert t == pytest.approx(oracle, abs=1e-9)


def test_birch_closed_form():
    x = birch_intersect([2.0, 3.0], RatMatrix([[1], [-1]]), [1.0, 1.0])
    assert np.allclose(x, [0.8, 1.2], atol=1e-12)


def test_birch_full_space_returns_x_star():
    x = birch_intersect([2.0, 3.0], RatMatrix.identity(2), [1.0, 5.0])
    assert np.array_equal(x, [2.0, 3.0])


def test_birch_fixed_point():
    x, info = birch_intersect([2.0, 3.0, 0.5], RatMatrix([[1], [1], [0]]), [2.0, 3.0, 0.5], full_output=True)
    assert np.allclose(x, [2.0, 3.0, 0.5]) and info.iterations == 0


def test_birch_accepts_float_basis():
    x = birch_intersect([2.0, 3.0], np.array([[1.0], [-1.0]]), [1.0, 1.0])
    assert np.allclose(x, [0.8, 1.2], atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_birch_random_instances(seed):
    rng = np.random.default_rng(seed)
    assert check_birch(*randnet.random_birch_instance(rng), rng).failures == []


def test_solve_example_one():
    res = solve(example_one(), [1.0, 1.0])
    assert res.residual <= 1e-8
    assert np.allclose(res.x_in_class, [1.39533699447, 0.513619829564], rtol=1e-10)
    f = evaluate_vector_field(example_one(), res.x_in_class)
    assert np.abs(f).max() <= 1e-8 * max(1.0, np.abs(res.x_in_class).max())
    S = structural_report(example_one()).S_basis
    assert max(birch_memberships(res.x_in_class, res.anchor, res.x_star, S)) <= 1e-8


def test_solve_example_three_d_zero():
    sys = example_three(EX3_K32_3)
    res = solve(sys, [1.0, 1.0])
    assert res.residual <= 1e-8 and res.t_roots == (None,)
    assert np.allclose(res.x_in_class, [1.0, 2.0])


def test_solve_reversible_pair():
    res = solve(reversible_pair(), [1.0, 1.0])
    assert np.allclose(res.x_in_class, [1.0, 1.0])
    res = solve(reversible_pair(), [0.5, 3.0])
    assert np.allclose(res.x_in_class, [1.75, 1.75])
    assert res.x_in_class.sum() == pytest.approx(3.5)


def test_solve_kinetic_class():
    res = solve(example_one(), [2.0, 0.1], "kinetic")
    assert res.class_kind == "kinetic" and res.residual <= 1e-8


def test_refuses_without_conclusion():
    with pytest.raises(ValueError, match="does not establish"):
        solve(example_two((1, 1, 1, 1, 1, 4)), [1.0, 1.0])


def test_rejects_bad_anchor():
    with pytest.raises(ValueError):
        solve(example_one(), [1.0, -1.0])
