import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crndep import randnet
from crndep.massaction import (
    NetworkError,
    ReactionNetwork,
    build_matrices,
    evaluate_vector_field,
    relative_residual,
    structural_report,
)
from crndep.graph import Digraph
from crndep.properties import check_dependency_identities

from conftest import example_one, example_three, reversible_pair


def test_example_one_matrices():
    m = build_matrices(example_one())
    assert m.Gamma_k.to_rows() == [[1, 1, -1, 1], [1, -1, 0, 0]]
    assert m.Y_s.to_rows() == [[0, 2, 3, 1], [0, 1, 0, 1]]


def test_example_three_gamma():
    m = build_matrices(example_three())
    assert m.Gamma_k.to_rows() == [[0, 0, 1], [1, 1, -1]]


def test_reversible_pair_matrices():
    m = build_matrices(reversible_pair())
    assert m.N.to_rows() == [[-1, 1], [1, -1]]
    assert m.Gamma_k == m.N


def test_example_one_counts():
    r = structural_report(example_one())
    assert (r.n_vertices, r.l, r.dim_S, r.delta) == (5, 1, 2, 2)
    assert (r.n_sources, r.dim_L, r.d) == (4, 2, 1)


def test_example_three_counts():
    r = structural_report(example_three())
    assert r.delta == 2
    assert (r.n_sources, r.l, r.dim_L, r.d) == (3, 1, 2, 0)


def test_reversible_pair_counts():
    r = structural_report(reversible_pair())
    assert (r.delta, r.d) == (0, 0)
    assert r.K_equals_S and r.L_equals_S and r.K_equals_L


def test_vector_field_example_one():
    assert np.allclose(evaluate_vector_field(example_one(), [1.0, 1.0]), [2.0, 0.0])


def test_vector_field_reversible_pair_symmetric():
    assert np.allclose(evaluate_vector_field(reversible_pair(), [0.7, 0.7]), [0.0, 0.0])


def test_relative_residual_scale():
    A = np.array([[1.0, -1.0]])
    assert relative_residual(A, np.array([2.0, 2.0])) == 0.0
    assert relative_residual(A, np.array([1.0, 0.0])) == pytest.approx(0.5)


def test_network_validation():
    with pytest.raises(NetworkError):
        ReactionNetwork(("X1",), Digraph(2, ((0, 1),)), ((1,), (1, 0)))
    with pytest.raises(NetworkError):
        ReactionNetwork(("X1",), Digraph(3, ((0, 1),)), ((1,), (0,), (2,)))
    with pytest.warns(RuntimeWarning):
        ReactionNetwork(("X1",), Digraph(2, ((0, 1),)), ((1,), (1,)))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 100_000))
def test_dependency_identities(seed):
    sys = randnet.random_network(np.random.default_rng(seed))
    assert check_dependency_identities(sys) == []


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_weakly_reversible_kinetic_equals_stoichiometric(seed):
    r = structural_report(randnet.random_weakly_reversible(np.random.default_rng(seed)))
    assert r.stats.weakly_reversible
    assert r.t == r.l and r.K_equals_S
