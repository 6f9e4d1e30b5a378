import itertools
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st
from networkx.algorithms.isomorphism import GraphMatcher

from conftest import to_nx
from lgrigid.errors import PreconditionError
from lgrigid.gluing import (
    INNER,
    OUTER,
    VERTICAL,
    PartitionedBase,
    admissible_edge_analysis,
    bilipschitz_compare,
    build_Xtilde,
    check_cayley_triangle_condition,
    check_triangle_condition,
    choose_marking_genset,
    detect_vertical_relation,
    fiber_isomorphism,
    glue,
    is_admissible,
    trivial_cover,
)
from lgrigid.graph import SimpleGraph, automorphism_group, cycle_graph, edge_triangle_count
from lgrigid.groups import Cyclic
from lgrigid.cayley import GenSet
from lgrigid.rigidity import verify_covering


def prism(n):
    edges = [(i, (i + 1) % n) for i in range(n)] + [(n + i, n + (i + 1) % n) for i in range(n)]
    edges += [(i, n + i) for i in range(n)]
    return SimpleGraph(2 * n, edges)


def double_cycle_cover(n):
    return verify_covering([i % n for i in range(2 * n)], cycle_graph(2 * n), cycle_graph(n))


def prism_base(n):
    return PartitionedBase(prism(n), cycle_graph(n), (tuple(range(n)), tuple(range(n, 2 * n))))


def admissible_by_definition(glued, E):
    reach = {v: set() for v in range(glued.graph.n)}
    for u, v in E:
        reach[u].add(glued.projection[v])
        reach[v].add(glued.projection[u])
    return all(set(glued.base.neighbors(glued.projection[x])) <= reach[x] for x in reach)


def brute_disconnecting(glued):
    """Exists a non-constant 2-colouring whose monochromatic edges are admissible."""
    n = glued.graph.n
    edges = glued.graph.edges()
    for bits in range(1, 2 ** (n - 1)):
        side = [(bits >> v) & 1 for v in range(n)]
        E = [(u, v) for u, v in edges if side[u] == side[v]]
        if admissible_by_definition(glued, E):
            return True
    return False


# ----------------------------------------------------------------------
# Small glued graphs with exhaustive oracles
# ----------------------------------------------------------------------

@pytest.mark.parametrize("n,covers,expected", [
    (3, ("triv", "triv"), True),
    (3, ("cyc", "triv"), False),
    (3, ("cyc", "cyc"), False),
    (4, ("cyc", "triv"), False),
    (4, ("triv", "triv"), True),
])
def test_admissible_search_matches_brute_force(n, covers, expected):
    base = prism_base(n)
    pick = {"triv": trivial_cover(base.Y), "cyc": double_cycle_cover(n)}
    glued = glue(base, [pick[c] for c in covers])
    res = admissible_edge_analysis(glued)
    assert res.disconnecting == expected == brute_disconnecting(glued)
    if res.disconnecting:
        assert admissible_by_definition(glued, res.edges)
        assert is_admissible(glued, res.edges)
        assert nx.number_connected_components(_spanning(glued.graph.n, res.edges)) > 1


def _spanning(n, edges):
    h = nx.empty_graph(n)
    h.add_edges_from(edges)
    return h


def test_glue_edge_kinds():
    base = prism_base(3)
    glued = build_Xtilde(base, double_cycle_cover(3))
    assert glued.graph.n == 12
    assert len(glued.edges_of_kind(INNER)) == 12
    assert len(glued.edges_of_kind(VERTICAL)) == 6
    assert len(glued.edges_of_kind(OUTER)) == 12
    for u, v in glued.edges_of_kind(VERTICAL):
        assert glued.projection[u] == glued.projection[v]
    assert all(len(f) == 2 for f in glued.fibers)


def test_partitioned_base_validation():
    with pytest.raises(PreconditionError):
        PartitionedBase(prism(3), cycle_graph(3), ((0, 1, 2),))
    with pytest.raises(PreconditionError):
        PartitionedBase(prism(3), cycle_graph(3), ((0, 1, 2), (2, 3, 4)))
    with pytest.raises(PreconditionError):
        glue(prism_base(3), [trivial_cover(cycle_graph(3))])


# ----------------------------------------------------------------------
# The Z/24 instance
# ----------------------------------------------------------------------

def test_cayley_triangle_condition(gluing):
    tc = check_cayley_triangle_condition(gluing.H, gluing.T, gluing.S)
    assert tc.holds and (tc.max_triangles, tc.threshold, tc.margin) == (9, 11, 1)
    X = gluing.cb.base.X
    assert check_triangle_condition(X, gluing.cb.base.Y).holds == tc.holds


def test_x0_structure(gluing):
    X0 = gluing.X0
    assert (X0.graph.n, X0.graph.edge_count) == (48, 648)
    vertical = X0.edges_of_kind(VERTICAL)
    outside = len([t for t in gluing.T if not gluing.in_G(t)])
    assert len(vertical) == 24
    assert {edge_triangle_count(X0.graph, u, v) for u, v in vertical} == {2 * outside}
    others = [edge_triangle_count(X0.graph, u, v) for u, v in X0.graph.edges() if X0.kind(u, v) != VERTICAL]
    assert max(others) == 16
    # X0 is the glued graph of trivial covers
    triv = glue(gluing.cb.base, [trivial_cover(gluing.cb.base.Y)] * len(gluing.cb.base.pieces))
    assert fiber_isomorphism(X0, triv) is not None


def test_xq_structure(gluing):
    Xq = gluing.Xq
    assert Xq.graph.n == 48 and Xq.graph.is_connected()
    assert fiber_isomorphism(gluing.X0, Xq) is None


def test_fibres_recovered_blind(gluing):
    for glued in (gluing.X0, gluing.Xq):
        rel = detect_vertical_relation(glued.graph)
        assert rel.found
        assert sorted(rel.fibers) == sorted(tuple(sorted(f)) for f in glued.fibers)
    assert not detect_vertical_relation(cycle_graph(6)).found


def test_automorphisms_preserve_vertical_edges(gluing):
    for glued, order in ((gluing.X0, 768), (gluing.Xq, 192)):
        A = automorphism_group(glued.graph)
        assert A.order == order
        vertical = set(glued.edges_of_kind(VERTICAL))
        for p in A.generators:
            assert {tuple(sorted((p[u], p[v]))) for u, v in vertical} == vertical


def test_x0_aut_order_matches_networkx(gluing):
    h = to_nx(gluing.X0.graph)
    assert sum(1 for _ in GraphMatcher(h, h).isomorphisms_iter()) == 768


def test_admissible_on_instance(gluing):
    r0 = admissible_edge_analysis(gluing.X0)
    assert r0.disconnecting and is_admissible(gluing.X0, r0.edges)
    assert admissible_by_definition(gluing.X0, r0.edges)
    assert nx.number_connected_components(_spanning(48, r0.edges)) > 1
    rq = admissible_edge_analysis(gluing.Xq)
    assert not rq.disconnecting


def test_bilipschitz(gluing):
    r = bilipschitz_compare(gluing.X0, gluing.Xq)
    assert r.forward <= 2 and r.backward <= 2
    assert (r.forward, r.backward) == (Fraction(2), Fraction(2))
    assert bilipschitz_compare(gluing.X0, gluing.X0).bilipschitz == 1


def test_marking_genset_adds_long_elements():
    H = Cyclic(24)
    in_G = lambda h: h % 4 == 0
    m = choose_marking_genset(H, in_G, GenSet(H, [1, 23, 4, 20]))
    prof_ok = max(m.profile.values()) + 1 < len([t for t in m.T if not in_G(t)])
    assert prof_ok
    m2 = choose_marking_genset(H, in_G, GenSet(H, [4, 20, 6, 18]), radius=8)
    assert max(m2.profile.values()) + 1 < len([t for t in m2.T if not in_G(t)])
    assert all(not in_G(h) for h in m2.added)


@settings(max_examples=10, deadline=None)
@given(st.integers(3, 6), st.sampled_from([("triv", "triv"), ("cyc", "triv"), ("cyc", "cyc")]))
def test_prism_gluings_against_brute_force(n, covers):
    base = prism_base(n)
    pick = {"triv": trivial_cover(base.Y), "cyc": double_cycle_cover(n)}
    glued = glue(base, [pick[c] for c in covers])
    if glued.graph.n <= 16:
        assert admissible_edge_analysis(glued).disconnecting == brute_disconnecting(glued)
    # every edge kind is consistent with the projection
    for u, v in glued.graph.edges():
        pu, pv = glued.projection[u], glued.projection[v]
        kind = glued.kind(u, v)
        assert (kind == VERTICAL) == (pu == pv)
        if kind == OUTER:
            assert base.piece_of[pu] != base.piece_of[pv]
