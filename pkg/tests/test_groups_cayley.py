import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st
from sympy.combinatorics import Permutation, PermutationGroup as SymPermGroup

from conftest import to_nx
from lgrigid.cayley import GenSet, build_S_N, cayley_ball, cayley_graph, distortion_rho, word_length, word_lengths
from lgrigid.errors import PreconditionError, TruncationError
from lgrigid.groups import (
    Cyclic,
    DirectProduct,
    FiniteAbelian,
    FreeAbelian,
    FreeGroup,
    LatticeQuotient,
    PermutationGroup,
    cyclic_semidirect,
    find_group_isomorphism,
    generated_subgroup,
    group_from_json,
)
from lgrigid.graph import automorphism_group, torus_graph

FINITE_GROUPS = [
    {"kind": "cyclic", "n": 7},
    {"kind": "abelian", "moduli": [2, 4]},
    {"kind": "perm", "degree": 4, "gens": [[1, 0, 2, 3], [1, 2, 3, 0]]},
    {"kind": "product", "left": {"kind": "cyclic", "n": 3}, "right": {"kind": "cyclic", "n": 2}},
    {"kind": "semidirect", "n": 5, "m": 2, "multiplier": 4},
    {"kind": "lattice_quotient", "d": 2, "basis": [[4, 0], [2, 2]]},
    {"kind": "central_ext", "base": {"kind": "cyclic", "n": 2}, "cocycle": [[1, 1, 1]]},
]


@pytest.mark.parametrize("desc", FINITE_GROUPS)
def test_group_axioms_and_json(desc):
    G = group_from_json(desc)
    assert group_from_json(G.to_json()).elements() == G.elements()
    els = G.elements()
    e = G.identity()
    for a in els:
        assert G.multiply(a, e) == a == G.multiply(e, a)
        assert G.multiply(a, G.invert(a)) == e
        assert G.parse(G.serialize(a)) == a
        for b in els[:6]:
            for c in els[:6]:
                assert G.multiply(G.multiply(a, b), c) == G.multiply(a, G.multiply(b, c))


def test_permutation_group_order_matches_sympy():
    gens = [[1, 0, 2, 3, 4], [1, 2, 3, 4, 0]]
    G = PermutationGroup(5, gens)
    assert G.order() == SymPermGroup([Permutation(g) for g in gens]).order() == 120


def test_orders():
    assert Cyclic(12).order_of(8) == 3
    assert group_from_json({"kind": "semidirect", "n": 5, "m": 2, "multiplier": 4}).order() == 10
    assert LatticeQuotient([[4, 0], [2, 2]]).order() == 8
    assert FreeAbelian(2).order_of((1, 0)) == float("inf")


def test_find_group_isomorphism():
    ext = group_from_json(FINITE_GROUPS[-1])
    assert find_group_isomorphism(ext, Cyclic(4)) is not None
    assert find_group_isomorphism(FiniteAbelian([2, 2]), Cyclic(4)) is None
    assert find_group_isomorphism(LatticeQuotient([[4, 0], [2, 2]]), FiniteAbelian([2, 4])) is not None
    assert find_group_isomorphism(cyclic_semidirect(3, 2, 2), PermutationGroup(3, [[1, 0, 2], [1, 2, 0]])) is not None


def test_free_group_reduction_and_truncation():
    F = FreeGroup(2, 4)
    assert F.parse("abBA") == ()
    assert F.serialize(F.multiply(F.parse("ab"), F.parse("Ba"))) == "aa"
    with pytest.raises(TruncationError):
        F.multiply(F.parse("aaa"), F.parse("bb"))


def test_genset_checks():
    G = Cyclic(6)
    with pytest.raises(PreconditionError):
        GenSet(G, [1])
    with pytest.raises(PreconditionError):
        GenSet(G, [0, 1, 5])
    S = GenSet(G, [1, 5, 3])
    assert S.inversion_classes == ((1, 5), (3,))


def test_cayley_graphs_match_networkx():
    assert nx.is_isomorphic(to_nx(cayley_graph(Cyclic(9), GenSet(Cyclic(9), [1, 8]))), nx.cycle_graph(9))
    Z88 = FiniteAbelian([8, 8])
    S = GenSet(Z88, [(1, 0), (7, 0), (0, 1), (0, 7)])
    assert nx.is_isomorphic(to_nx(cayley_graph(Z88, S)), to_nx(torus_graph(8)))
    # vertex-transitive: a single orbit
    assert automorphism_group(cayley_graph(Z88, S)).vertex_orbit_count == 1


def test_cayley_ball_of_free_group():
    F = FreeGroup(2, 6)
    S = GenSet.symmetrized(F, [F.generator(0), F.generator(1)])
    b = cayley_ball(F, S, 3)
    assert b.graph.n == 1 + 4 + 12 + 36
    assert nx.is_tree(to_nx(b.graph))


def test_word_lengths_and_distortion():
    Z = FreeAbelian(1)
    S = GenSet(Z, [(1,), (-1,)])
    assert word_length(Z, S, (5,)) == 5
    H = Cyclic(12)
    T = GenSet(H, [1, 11])
    S2 = GenSet(H, [3, 9])
    # 3Z/12 inside Z/12: elements within T-distance 6 are 0, 3, 6, 9 with S-lengths 0, 1, 2, 1
    assert distortion_rho(None, S2, H, T, 6, in_G=lambda h: h % 3 == 0) == 2
    assert word_lengths(H, S2, [1])[1] is None


def test_build_S_N():
    G = Cyclic(20)
    S1 = GenSet(G, [1, 19])
    SN = build_S_N(G, S1, 3)
    assert sorted(SN) == [1, 2, 3, 17, 18, 19]
    with pytest.raises(PreconditionError):
        build_S_N(G, S1, 2)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 30), st.data())
def test_generated_subgroup_of_cyclic(n, data):
    G = Cyclic(n)
    gens = data.draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=3))
    from math import gcd

    d = n
    for g in gens:
        d = gcd(d, g)
    assert sorted(generated_subgroup(G, gens)) == list(range(0, n, d))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-3, 3).filter(bool), max_size=6), st.lists(st.integers(-3, 3).filter(bool), max_size=6))
def test_free_group_inverse_law(a, b):
    F = FreeGroup(3, 30)
    x, y = F.parse(a), F.parse(b)
    assert F.multiply(F.multiply(x, y), F.invert(y)) == x


def test_free_group_parse_reduces():
    F = FreeGroup(3, 30)
    assert F.parse([1, -1]) == F.parse("aA") == ()
    assert F.parse([2, 1, -1, 3]) == F.parse("bc") == (2, 3)
    with pytest.raises(ValueError):
        F.parse([4])
    with pytest.raises(ValueError):
        F.parse("d")
