from __future__ import annotations

import pytest

from crndep.graph import Digraph
from crndep.massaction import MassActionSystem, ReactionNetwork


def make_system(species, complexes, edges, k=None, names=()):
    g = Digraph(len(complexes), tuple(edges))
    net = ReactionNetwork(tuple(species), g, tuple(complexes))
    k = tuple(k) if k is not None else (1,) * len(edges)
    return MassActionSystem(net, k, tuple(names))


def example_one(k=None):
    # 0 -> X1+X2 -> 2X1+X2 -> 3X1 -> 2X1
    complexes = [(0, 0), (2, 1), (3, 0), (1, 1), (2, 0)]
    edges = [(0, 3), (3, 1), (1, 2), (2, 4)]
    return make_system(("X1", "X2"), complexes, edges, k)


def example_two(k=None):
    complexes = [(1, 0), (1, 1), (0, 1), (3, 0), (0, 0)]
    edges = [(0, 1), (1, 0), (1, 2), (2, 3), (3, 2), (0, 4)]
    return make_system(("X1", "X2"), complexes, edges, k)


def example_three(k=None):
    complexes = [(0, 1), (1, 0), (2, 0), (3, 1), (4, 0)]
    edges = [(1, 0), (1, 2), (2, 1), (2, 3), (3, 4)]
    return make_system(("X1", "X2"), complexes, edges, k)


def reversible_pair():
    # X1 <-> X2
    return make_system(("X1", "X2"), [(1, 0), (0, 1)], [(0, 1), (1, 0)])


@pytest.fixture
def ex1():
    return example_one()


@pytest.fixture
def ex2():
    return example_two()


@pytest.fixture
def ex3():
    return example_three()
