import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crndep import randnet
from crndep.decomp import (
    NotApplicableError,
    combined_matrices,
    decompose,
    decomposition_checks,
    finest_independent_decomposition,
)
from crndep.massaction import build_matrices
from crndep.properties import check_two_block
from crndep.ratlin import RatMatrix, kernel_basis

from conftest import example_one, example_three, example_two, make_system


def two_pairs(k=(1, 2, 3, 4)):
    # X1 <-> X2 and X3 <-> X4
    cx = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    return make_system(("X1", "X2", "X3", "X4"), cx, [(0, 1), (1, 0), (2, 3), (3, 2)], k)


def test_two_pairs_split():
    dec = finest_independent_decomposition(two_pairs())
    assert dec.ell == 2
    assert dec.edge_partition == ((0, 1), (2, 3))


def test_example_two_single_class():
    assert finest_independent_decomposition(example_two()).ell == 1


def test_three_edge_kernel_support():
    # 0 -> X1, X1 -> 0, 0 -> X2: ker N spanned by (1, 1, 0)
    sys = make_system(("X1", "X2"), [(0, 0), (1, 0), (0, 1)], [(0, 1), (1, 0), (0, 2)])
    kb = kernel_basis(build_matrices(sys).N)
    assert [tuple(v) for v in kb] == [(1, 1, 0)]
    assert finest_independent_decomposition(sys).edge_partition == ((0, 1), (2,))


def test_brute_force_product_of_kernels():
    sys = make_system(("X1", "X2"), [(0, 0), (1, 0), (0, 1)], [(0, 1), (1, 0), (0, 2)])
    dec = finest_independent_decomposition(sys)
    N = build_matrices(sys).N
    total = sum(kernel_basis(N.select_columns(block)).dim for block in dec.edge_partition)
    assert total == kernel_basis(N).dim


@pytest.mark.parametrize("factory", [example_one, example_two, example_three])
def test_single_class_combined_equals_plain(factory):
    sys = factory()
    dec = finest_independent_decomposition(sys)
    comb = combined_matrices(dec)
    plain = build_matrices(sys)
    assert dec.ell == 1
    assert comb.Gamma_k == plain.Gamma_k
    assert comb.I_E == plain.I_E and comb.R_k == plain.R_k and comb.Y_s == plain.Y_s


def test_example_one_gamma_combined():
    comb = combined_matrices(finest_independent_decomposition(example_one()))
    assert comb.Gamma_k.to_rows() == [[1, 1, -1, 1], [1, -1, 0, 0]]


def test_two_pairs_block_laplacian():
    comb = combined_matrices(finest_independent_decomposition(two_pairs()))
    expected = RatMatrix([[-1, 2, 0, 0], [1, -2, 0, 0], [0, 0, -3, 4], [0, 0, 3, -4]])
    assert comb.R_k == expected


def test_example_one_checks():
    chk = decomposition_checks(finest_independent_decomposition(example_one()))
    assert chk.all_ok
    assert (chk.d, chk.d_parts, chk.delta, chk.delta_parts) == (1, (1,), 2, (2,))


def test_two_pairs_checks():
    chk = decomposition_checks(finest_independent_decomposition(two_pairs()))
    assert chk.all_ok
    assert (chk.d, chk.d_parts, chk.delta, chk.delta_parts) == (0, (0, 0), 0, (0, 0))
    assert chk.vertex_excess == 0 == chk.ell_minus_l


def test_disconnected_subnetwork_not_applicable():
    # one kernel class spanning two separate reversible pairs that share a species pattern
    sys = two_pairs()
    dec = decompose(sys, [(0, 1, 2, 3)])
    assert not dec.connected_ok
    with pytest.raises(NotApplicableError, match="not applicable"):
        decomposition_checks(dec)


def test_partition_must_cover_edges():
    with pytest.raises(ValueError):
        decompose(two_pairs(), [(0, 1)])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_random_two_block(seed):
    assert check_two_block(*randnet.random_two_block_network(np.random.default_rng(seed))) == []


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 100_000))
def test_random_weakly_reversible_identities(seed):
    dec = finest_independent_decomposition(randnet.random_weakly_reversible(np.random.default_rng(seed)))
    if dec.connected_ok:
        assert decomposition_checks(dec).all_ok
