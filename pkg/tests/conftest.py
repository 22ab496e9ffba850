import random
from fractions import Fraction

import pytest

from treecenter.tree import Tree


def F(*args):
    return Fraction(*args)


def make_tree(weights, edges):
    """Tree from 0-based (u, v, length) triples with Fraction scalars."""
    return Tree(
        n=len(weights),
        weights=tuple(Fraction(w) for w in weights),
        edges=tuple((u, v, Fraction(L)) for u, v, L in edges),
    )


def path_tree(weights, lengths):
    edges = [(i, i + 1, lengths[i]) for i in range(len(weights) - 1)]
    return make_tree(weights, edges)


@pytest.fixture
def rng():
    return random.Random(0xA11CE)
