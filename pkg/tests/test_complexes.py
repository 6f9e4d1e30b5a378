import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from conftest import to_nx
from lgrigid.complexes import (
    fill_radius,
    fills_within,
    is_k_simply_connected,
    k_universal_cover_ball,
    short_cycle_cells,
)
from lgrigid.errors import PreconditionError
from lgrigid.graph import (
    SimpleGraph,
    ball,
    ball_isometric,
    complete_graph,
    cycle_graph,
    grid_ball,
    path_graph,
    petersen_graph,
    torus_graph,
)


@pytest.mark.parametrize("g,k,count", [
    (torus_graph(4), 4, 24),
    (torus_graph(5), 4, 25),
    (complete_graph(5), 4, 25),
    (petersen_graph(), 5, 12),
    (cycle_graph(6), 5, 0),
])
def test_cell_counts(g, k, count):
    cells = short_cycle_cells(g, k)
    assert len(cells) == count
    assert len(cells) == sum(1 for c in nx.simple_cycles(to_nx(g), length_bound=k) if len(c) >= 3)
    for c in cells.cells:
        assert all(g.has_edge(c[i], c[(i + 1) % len(c)]) for i in range(len(c)))


def test_cycle_cover_is_line():
    for R in range(1, 5):
        cb = k_universal_cover_ball(cycle_graph(6), 0, 3, R)
        assert cb.exact
        assert ball_isometric(cb.ball, ball(path_graph(2 * R + 1), R, R)) is not None
        assert [cb.projection[i] for i in range(len(cb.projection))].count(0) >= 1


def test_torus_cover_is_lattice():
    for R in range(1, 4):
        cb = k_universal_cover_ball(torus_graph(8), 0, 4, R)
        g, _ = grid_ball(R)
        assert cb.exact
        assert ball_isometric(cb.ball, ball(g, 0, R)) is not None


def test_cover_of_simply_connected_complex_is_itself():
    cb = k_universal_cover_ball(cycle_graph(6), 0, 6, 3)
    assert cb.closed and cb.ball.carrier.n == 6


def test_simple_connectivity_verdicts():
    assert is_k_simply_connected(cycle_graph(6), 6).verdict == "yes"
    res = is_k_simply_connected(torus_graph(8), 4)
    assert res.verdict == "no"
    loop = res.certificate["loop"]
    T = torus_graph(8)
    assert loop[0] == loop[-1] == 0
    assert all(T.has_edge(a, b) for a, b in zip(loop, loop[1:]))
    assert is_k_simply_connected(cycle_graph(6), 5).verdict == "no"
    assert is_k_simply_connected(complete_graph(5), 3).verdict == "yes"
    # Petersen: pentagons and hexagons fill everything
    assert is_k_simply_connected(petersen_graph(), 6).verdict == "yes"
    assert is_k_simply_connected(torus_graph(8), 8).verdict == "yes"


def test_budget_gives_unknown():
    assert is_k_simply_connected(torus_graph(8), 4, budget=50).verdict == "unknown"
    cb = k_universal_cover_ball(torus_graph(8), 0, 4, 6, fuel=50)
    assert cb.status == "fuel-exhausted"


def test_disconnected_rejected():
    g = SimpleGraph(4, [(0, 1), (2, 3)])
    with pytest.raises(PreconditionError):
        is_k_simply_connected(g, 4)


def test_fill_radius():
    T = torus_graph(6)
    assert fill_radius(T, 4, 1, vertices=[0]) == 1
    assert fills_within(T, 0, 4, 2, 2)
    # radius-1 balls are stars; radius-2 balls hold squares that triangles cannot fill
    assert fill_radius(T, 3, 1, vertices=[0]) == 1
    assert fill_radius(T, 3, 2, vertices=[0]) is None


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 10), st.integers(3, 10))
def test_cycle_k_simply_connected_iff_k_at_least_length(n, k):
    assert is_k_simply_connected(cycle_graph(n), k).verdict == ("yes" if k >= n else "no")


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(5, 9))
def test_torus_cover_ball_sizes(R, a):
    cb = k_universal_cover_ball(torus_graph(a), 0, 4, R)
    assert cb.ball.carrier.n == 2 * R * R + 2 * R + 1
