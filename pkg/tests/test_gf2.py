import itertools

from hypothesis import given, settings, strategies as st
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from lgrigid import gf2

F2 = GF(2)


def sympy_rank(rows, nvars):
    if not rows:
        return 0
    M = DomainMatrix([[F2(r >> j & 1) for j in range(nvars)] for r in rows], (len(rows), nvars), F2)
    return M.rank()


systems = st.integers(1, 8).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.integers(0, 2 ** n - 1), max_size=10),
    )
)


@settings(max_examples=200, deadline=None)
@given(systems)
def test_rank_matches_sympy(sys_):
    n, rows = sys_
    assert gf2.rank(rows) == sympy_rank(rows, n)


@settings(max_examples=200, deadline=None)
@given(systems)
def test_nullspace_is_a_basis_of_the_kernel(sys_):
    n, rows = sys_
    basis = gf2.nullspace(rows, n)
    assert len(basis) == n - sympy_rank(rows, n)
    assert gf2.rank(basis) == len(basis)
    for v in basis:
        assert all(gf2.dot(r, v) == 0 for r in rows)


@settings(max_examples=200, deadline=None)
@given(systems, st.data())
def test_solve_matches_brute_force(sys_, data):
    n, rows = sys_
    rhs = data.draw(st.lists(st.integers(0, 1), min_size=len(rows), max_size=len(rows)))
    brute = [x for x in range(2 ** n) if all(gf2.dot(r, x) == b for r, b in zip(rows, rhs))]
    res = gf2.solve(rows, rhs, n)
    assert res.solvable == bool(brute)
    if res.solvable:
        assert res.solution in brute
    else:
        # the certificate rows sum to zero while their right-hand sides sum to one
        acc, val = 0, 0
        for i in res.certificate:
            acc ^= rows[i]
            val ^= rhs[i]
        assert acc == 0 and val == 1


def test_bits_and_echelon():
    assert gf2.bits(0b1011) == [0, 1, 3]
    e = gf2.Echelon()
    assert e.add(0b110)[0] == 0b110
    assert e.add(0b011)[0] != 0
    assert e.contains(0b101)
    assert not e.contains(0b001)
    assert e.rank == 2


def test_exhaustive_three_variables():
    for rows in itertools.combinations(range(8), 3):
        assert gf2.rank(rows) == sympy_rank(list(rows), 3)
