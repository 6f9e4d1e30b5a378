import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from conftest import to_nx
from lgrigid.cayley import GenSet, cayley_ball, cayley_graph
from lgrigid.discreteness import (
    INCREMENT_TABLE,
    AugmentationFailed,
    allowed_increments,
    augment_genset,
    build_discrete_genset,
    build_padded_genset,
    closure_chain,
    discreteness_certificate,
    fiber_clique_certificate,
    n3,
    n3_profile,
    padding_violation,
    primes_above,
)
from lgrigid.errors import PreconditionError
from lgrigid.graph import edge_triangle_count, regular_tree_ball
from lgrigid.groups import Cyclic, DirectProduct, FiniteAbelian, FreeAbelian, cyclic_semidirect

Z = FreeAbelian(1)
Z2 = FreeAbelian(2)


def z(*xs):
    return [(x,) for x in xs]


def random_finite_instance(rng):
    n = rng.choice([5, 7])
    G = rng.choice([Cyclic(rng.randint(5, 24)), FiniteAbelian([rng.randint(2, 5), rng.randint(2, 5)]),
                    cyclic_semidirect(n, 2, n - 1)])
    els = [g for g in G.elements() if g != G.identity()]
    picks = rng.sample(els, rng.randint(1, min(5, len(els))))
    return G, GenSet.symmetrized(G, picks)


def test_n3_matches_triangle_counts_on_twenty_instances():
    rng = random.Random(2024)
    for _ in range(20):
        G, S = random_finite_instance(rng)
        g = cayley_graph(G, S)
        idx = {x: i for i, x in enumerate(G.elements())}
        e = idx[G.identity()]
        prof = n3_profile(G, S)
        for s in S:
            assert prof[s] == edge_triangle_count(g, e, idx[s])
            h = to_nx(g)
            assert prof[s] == len(set(h[e]) & set(h[idx[s]]))


def test_increment_table():
    assert INCREMENT_TABLE[2] == {(2, 0), (4, 0)}
    assert allowed_increments(3) == {(1, 1), (2, 2), (3, 3)}
    assert allowed_increments(4) == {(1, 0), (2, 0), (2, 2)}
    assert allowed_increments(float("inf")) == allowed_increments(9) == {(1, 0), (2, 0), (2, 1)}


def check_step(G, S, res):
    s0 = res.step.s0
    sq = G.multiply(s0, s0)
    pair = (n3(G, res.S, s0) - n3(G, S, s0), n3(G, res.S, sq) - n3(G, S, sq))
    assert pair == res.achieved
    assert pair in allowed_increments(G.order_of(s0))
    assert set(res.S) == set(S) | set(res.step.delta)
    for d in res.step.delta:
        assert n3(G, res.S, d) <= 6


@pytest.mark.parametrize("m,expected", [(2, (4, 0)), (3, (2, 2)), (4, (2, 0)), (5, (2, 0))])
def test_augment_torsion_generator(m, expected):
    G = DirectProduct(Z, Cyclic(m))
    S = GenSet.symmetrized(G, [((1,), 0), ((0,), 1), ((1,), 1)])
    res = augment_genset(G, S, ((0,), 1), ((1,), 0))
    assert res.step.n == 3 and res.achieved == expected
    check_step(G, S, res)
    assert [n for n, _ in res.rejections] == [1, 2]


def test_augment_logs_rejections_and_fails_on_small_bound():
    S = GenSet(Z, z(1, -1))
    res = augment_genset(Z, S, (1,), (1,))
    assert res.step.n == 4 and res.step.delta == ((4,), (-4,), (3,), (-3,))
    assert all("word length" in why for _, why in res.rejections)
    with pytest.raises(AugmentationFailed) as exc:
        augment_genset(Z, S, (1,), (1,), search_bound=3)
    assert len(exc.value.rejections) == 3


def test_augment_needs_infinite_gamma():
    G = Cyclic(50)
    with pytest.raises(PreconditionError):
        augment_genset(G, GenSet(G, [1, 49]), 1, 1)


def test_discrete_genset_on_integers():
    D = build_discrete_genset(Z, GenSet(Z, z(1, -1)), (1,))
    assert sorted(x for (x,) in D.S if x > 0) == [1, 3, 4, 9, 10, 15, 16, 21, 22]
    assert D.profile[(1,)] == D.profile[(-1,)] == 8
    assert all(D.profile[s] <= 6 for s in D.S if s not in D.S0)
    assert D.separated()
    for r in D.steps:
        assert r.achieved in {(1, 0), (2, 0), (2, 1)}


def test_discrete_genset_two_classes():
    D = build_discrete_genset(Z, GenSet(Z, z(1, -1, 2, -2)), (1,))
    assert (D.profile[(1,)], D.profile[(2,)]) == (8, 9)
    assert D.chain == ((((1,), (-1,)),), (((2,), (-2,)),))
    assert D.separated()


def test_discrete_genset_lattice():
    S0 = GenSet(Z2, [(1, 0), (-1, 0), (0, 1), (0, -1)])
    D = build_discrete_genset(Z2, S0, (1, 0))
    assert len(D.S) == 40
    assert {D.profile[(1, 0)], D.profile[(0, 1)]} == {8, 10}
    assert D.separated()


def test_closure_chain_respects_square_roots():
    S0 = GenSet(Z, z(1, -1, 2, -2))
    blocks = closure_chain(Z, S0)
    seen = set()
    for block in blocks:
        for cls in block:
            seen.update(cls)
        # closed: s^2 in the union forces s in the union
        assert all(s in seen for s in S0 if (2 * s[0],) in seen)


def test_finite_groups_are_rejected():
    G = FiniteAbelian([2, 2, 2])
    with pytest.raises(PreconditionError):
        build_discrete_genset(G, GenSet(G, [(1, 0, 0), (0, 1, 0)]), (1, 0, 0))


def test_primes_above():
    assert primes_above(5, 2) == [7, 11]
    assert primes_above(1, 3) == [2, 3, 5]


def test_padding_violation():
    G = Cyclic(7)
    assert padding_violation(G, GenSet(G, [1, 6])) == 1
    assert padding_violation(Cyclic(5), GenSet(Cyclic(5), [1, 2, 3, 4])) is None
    with pytest.raises(PreconditionError):
        build_padded_genset(G, GenSet(G, [1, 6]))


def test_padded_genset_fibres_are_the_largest_cliques():
    G = Cyclic(5)
    P = build_padded_genset(G, GenSet(G, [1, 2, 3, 4]))
    assert (P.clique_number, P.primes) == (5, (7, 11))
    cert = fiber_clique_certificate(P)
    assert cert.clique_number == 77 and cert.fibers_only and cert.cliques_at_max == 5
    # networkx oracle on the same graph
    g = cayley_graph(P.group, P.S)
    cliques = list(nx.find_cliques(to_nx(g)))
    top = max(map(len, cliques))
    els = P.group.elements()
    at_top = [c for c in cliques if len(c) == top]
    assert top == 77 and len(at_top) == 5
    assert all(len({els[v][0] for v in c}) == 1 for c in at_top)


def test_discreteness_certificate():
    D = build_discrete_genset(Z, GenSet(Z, z(1, -1)), (1,))
    b = cayley_ball(Z, D.S, 4)
    cert = discreteness_certificate(b.graph, 2, vertices=[0])
    assert cert.discrete and cert.r_c == 1
    # the prism C20 x K2: a vertex stabilizer of order 2, trivial once a 1-ball is fixed
    G = DirectProduct(Cyclic(2), Cyclic(20))
    S = GenSet.symmetrized(G, [(1, 0), (0, 1)])
    cert = discreteness_certificate(cayley_graph(G, S), 1)
    assert cert.r_c == 1 and cert.stabilizer_orders == (2, 1)
    # tree balls: leaves can always be swapped
    cert = discreteness_certificate(regular_tree_ball(3, 4), 2, vertices=[0])
    assert not cert.discrete and cert.stabilizer_orders[-1] > 1


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_n3_symmetric_under_inversion(seed):
    G, S = random_finite_instance(random.Random(seed))
    prof = n3_profile(G, S)
    for s in S:
        assert prof[s] == prof[G.invert(s)]


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(1, 6), min_size=1, max_size=2, unique=True), st.integers(1, 3))
def test_augmentation_steps_on_integers(gens, gamma):
    S = GenSet.symmetrized(Z, [(g,) for g in gens])
    res = augment_genset(Z, S, (gens[0],), (gamma,))
    check_step(Z, S, res)
