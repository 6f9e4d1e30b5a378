import itertools
import json

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st
from networkx.algorithms.isomorphism import GraphMatcher

from conftest import to_nx
from lgrigid.errors import BudgetExceeded, PreconditionError
from lgrigid.graph import (
    SimpleGraph,
    automorphism_group,
    ball,
    ball_isometric,
    complete_graph,
    cycle_graph,
    edge_triangle_count,
    empirical_rc,
    grid_ball,
    is_r_locally,
    iter_ball_isometries,
    local_stabilizer_probe,
    max_clique_size,
    maximal_cliques,
    path_graph,
    petersen_graph,
    regular_tree_ball,
    torus_graph,
)

# (graph, vertices, edges, |Aut|, clique number, triangles), frozen from networkx
FROZEN = [
    (petersen_graph(), 10, 15, 120, 2, 0),
    (torus_graph(4), 16, 32, 384, 2, 0),
    (torus_graph(5), 25, 50, 200, 2, 0),
    (torus_graph(6), 36, 72, 288, 2, 0),
    (torus_graph(3, 4), 12, 24, 48, 3, 4),
    (cycle_graph(9), 9, 9, 18, 2, 0),
    (complete_graph(6), 6, 15, 720, 6, 20),
    (grid_ball(2)[0], 13, 16, 8, 2, 0),
    (regular_tree_ball(3, 3), 22, 21, 3072, 2, 0),
]


def brute_aut_order(g):
    edges = set(g.edges())
    count = 0
    for p in itertools.permutations(range(g.n)):
        if all(tuple(sorted((p[u], p[v]))) in edges for u, v in edges):
            count += 1
    return count


def graphs_on(n, p, seed):
    h = nx.gnp_random_graph(n, p, seed=seed)
    return SimpleGraph(n, list(h.edges()))


small_graphs = st.builds(
    graphs_on, st.integers(1, 7), st.floats(0.0, 1.0), st.integers(0, 10_000)
)


@pytest.mark.parametrize("g,n,m,aut,omega,tri", FROZEN)
def test_frozen_invariants(g, n, m, aut, omega, tri):
    assert (g.n, g.edge_count) == (n, m)
    assert automorphism_group(g).order == aut
    assert max_clique_size(g) == omega
    assert sum(edge_triangle_count(g, u, v) for u, v in g.edges()) == 3 * tri


def test_json_round_trip_with_labels():
    g = SimpleGraph(3, [(0, 1), (1, 2)], edge_labels=["a", "b"], vertex_labels=[0, 1, 0])
    text = json.dumps(g.to_json())
    assert SimpleGraph.from_json(json.loads(text)) == g


def test_rejects_malformed():
    with pytest.raises(ValueError):
        SimpleGraph(2, [(0, 0)])
    with pytest.raises(ValueError):
        SimpleGraph(2, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        SimpleGraph(2, [(0, 2)])
    with pytest.raises(ValueError):
        SimpleGraph.from_json({"vertices": 2, "edges": [[1, 0]]})


def test_tree_ball_shape():
    t = regular_tree_ball(3, 3)
    assert t.degree(0) == 3
    assert nx.is_tree(to_nx(t))
    assert max(t.distances_from(0)) == 3


def test_ball_uses_intrinsic_metric():
    # carrier ids are ordered by distance from the root, then by ambient id
    b = ball(cycle_graph(7), 0, 2)
    assert b.vertices == (0, 1, 6, 2, 5)
    assert b.intrinsic_dist == (0, 1, 1, 2, 2)
    # C4 ball of radius 1 loses the antipode; the induced path has diameter 2
    b = ball(cycle_graph(4), 0, 1)
    assert b.distance(1, 2) == 2


def test_rooted_isometries_of_torus_ball():
    b = ball(torus_graph(8), 0, 2)
    assert sum(1 for _ in iter_ball_isometries(b, b)) == 8


def test_is_r_locally_torus_and_failure():
    model = [ball(torus_graph(8), 0, 2)]
    assert is_r_locally(torus_graph(6), model, 2).verdict
    rep = is_r_locally(torus_graph(4), model, 2)
    assert not rep.verdict and rep.failing_vertex == 0
    # a cylinder boundary has degree 3 and is not locally the torus
    cyl = SimpleGraph(12, [(i * 4 + j, i * 4 + (j + 1) % 4) for i in range(3) for j in range(4)]
                      + [(i * 4 + j, (i + 1) * 4 + j) for i in range(2) for j in range(4)])
    assert not is_r_locally(cyl, model, 1).verdict


def test_ball_isometric_requires_equal_radius():
    with pytest.raises(PreconditionError):
        ball_isometric(ball(cycle_graph(5), 0, 1), ball(cycle_graph(5), 0, 2))


def test_stabilizers_and_rc():
    T = torus_graph(8)
    assert local_stabilizer_probe(T, 0, 0) == 8
    assert local_stabilizer_probe(T, 0, 1) == 1
    assert empirical_rc(T, 3) == 1
    # the tree ball has non-trivial stabilizers of every interior ball
    assert empirical_rc(regular_tree_ball(3, 3), 1, vertices=[0]) is None


def test_budget_exceeded_carries_partial():
    with pytest.raises(BudgetExceeded) as exc:
        automorphism_group(torus_graph(6), budget=3)
    assert "nodes" in exc.value.partial


def test_maximal_cliques_match_networkx():
    g = torus_graph(3, 4)
    ours = {frozenset(c) for c in maximal_cliques(g)}
    theirs = {frozenset(c) for c in nx.find_cliques(to_nx(g))}
    assert ours == theirs


@settings(max_examples=60, deadline=None)
@given(small_graphs)
def test_aut_order_matches_permutation_enumeration(g):
    assert automorphism_group(g).order == brute_aut_order(g)


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 12), st.floats(0.1, 0.9), st.integers(0, 10_000))
def test_aut_order_matches_networkx(n, p, seed):
    g = graphs_on(n, p, seed)
    h = to_nx(g)
    assert automorphism_group(g).order == sum(1 for _ in GraphMatcher(h, h).isomorphisms_iter())


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 14), st.floats(0.0, 1.0), st.integers(0, 10_000))
def test_cliques_and_triangles_match_networkx(n, p, seed):
    g = graphs_on(n, p, seed)
    h = to_nx(g)
    omega = max((len(c) for c in nx.find_cliques(h)), default=0)
    assert max_clique_size(g) == omega
    for u, v in g.edges():
        assert edge_triangle_count(g, u, v) == len(set(h[u]) & set(h[v]))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 10), st.floats(0.1, 0.9), st.integers(0, 10_000), st.randoms(use_true_random=False))
def test_aut_order_is_relabelling_invariant(n, p, seed, rnd):
    g = graphs_on(n, p, seed)
    perm = list(range(n))
    rnd.shuffle(perm)
    assert automorphism_group(g.relabeled(perm)).order == automorphism_group(g).order


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.floats(0.0, 1.0), st.integers(0, 10_000))
def test_generators_are_automorphisms(n, p, seed):
    g = graphs_on(n, p, seed)
    edges = set(g.edges())
    for perm in automorphism_group(g).generators:
        assert {tuple(sorted((perm[u], perm[v]))) for u, v in edges} == edges


def test_small_families():
    assert path_graph(4).edge_count == 3
    assert nx.is_isomorphic(to_nx(petersen_graph()), nx.petersen_graph())
    assert nx.is_isomorphic(to_nx(torus_graph(5)), nx.grid_2d_graph(5, 5, periodic=True))
