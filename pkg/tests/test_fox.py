import pytest
from hypothesis import given, settings, strategies as st
from sympy import GF, symbols
from sympy.polys.matrices import DomainMatrix

from lgrigid.errors import PreconditionError
from lgrigid.fox import (
    GF2m,
    ChainConditionError,
    Laurent,
    Presentation,
    RatFunc,
    betti_bound,
    clmul,
    fox_matrix,
    free_group_product,
    is_irreducible,
    parse_word,
    pdivmod,
    product_presentation_counts,
    random_specialization_ranks,
    rank_at,
    rank_over_fraction_field,
    surface_presentation,
    surface_product_counts,
)

t = symbols("t")
POLY = GF(2)[t]
FRAC = GF(2).frac_field(t)

exps = st.lists(st.integers(-6, 6), max_size=6)
laurents = exps.map(Laurent.from_exponents)


def shifted(x: Laurent, shift: int = 8):
    """``t^shift * x`` as a sympy polynomial over GF(2)."""
    return POLY.convert(sum((t ** (e + shift) for e in x.exponents()), 0))


def sympy_rank(M):
    rows = [[FRAC.convert(sum((t ** (e + 16) for e in x.exponents()), 0)) for x in row] for row in M]
    return DomainMatrix(rows, (len(rows), len(rows[0])), FRAC).rank()


@settings(max_examples=80, deadline=None)
@given(laurents, laurents)
def test_laurent_ring_matches_sympy(a, b):
    assert shifted(a + b) == shifted(a) + shifted(b)
    assert shifted(a * b, 16) == shifted(a) * shifted(b)
    assert a + a == Laurent()
    assert Laurent.from_exponents(a.exponents()) == a


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2 ** 12), st.integers(1, 2 ** 8))
def test_polynomial_division(a, b):
    q, r = pdivmod(a, b)
    assert clmul(q, b) ^ r == a and r.bit_length() < b.bit_length()


@settings(max_examples=60, deadline=None)
@given(laurents, laurents.filter(bool), laurents.filter(bool))
def test_rational_functions_form_a_field(a, b, c):
    x, y = RatFunc(a, b), RatFunc(c)
    assert (x * y) / y == x
    assert x + x == RatFunc()
    if x:
        assert x * x.inverse() == RatFunc(1)


def test_gf2_16_field():
    assert is_irreducible(0x1100B)
    assert not is_irreducible(0b101)  # (t + 1)^2
    assert is_irreducible(0b111) and is_irreducible(0b1011)
    F = GF2m()
    assert F.size == 2 ** 16
    for a in (1, 2, 0x1234, 0xFFFF):
        assert F.mul(a, F.inverse(a)) == 1
    assert F.power(2, F.size - 1) == 1


def test_irreducibility_against_sympy():
    from sympy import Poly
    for m in range(2, 512):
        poly = Poly(sum((t ** i for i in range(m.bit_length()) if m >> i & 1), 0), t, modulus=2)
        assert is_irreducible(m) == poly.is_irreducible


def test_parse_word():
    assert parse_word("aB", ["a", "b"]) == [(0, 1), (1, -1)]
    assert parse_word([["b", 1], ["a", -1]], ["a", "b"]) == [(1, 1), (0, -1)]
    with pytest.raises(PreconditionError):
        parse_word("ac", ["a", "b"])
    with pytest.raises(PreconditionError):
        parse_word([["a", 2]], ["a", "b"])


def test_presentation_validation():
    with pytest.raises(PreconditionError):
        Presentation.make(["a", "b"], ["ab"], [1, 1])  # u does not vanish
    with pytest.raises(PreconditionError):
        Presentation.make(["a", "a"], [], [1, 1])
    with pytest.raises(PreconditionError):
        Presentation.make(["a", "b"], ["abAB"], [1, 1], r3=1)
    with pytest.raises(PreconditionError):
        betti_bound(Presentation.make(["a"], [], [0]))


def test_broken_three_cells_rejected():
    pres = Presentation.make(["a", "b"], ["abAB"], [1, 0], r3=1, d3=[[Laurent(1)]])
    with pytest.raises(ChainConditionError):
        betti_bound(pres)


def test_valid_three_cell_cancels_cycle():
    # a repeated relator gives the 2-cycle (1, 1), which a 3-cell can bound
    pres = Presentation.make(["a", "b"], ["abAB", "abAB"], [1, 0])
    one = Laurent.from_exponents([0])
    with_cell = Presentation.make(["a", "b"], ["abAB", "abAB"], [1, 0], r3=1, d3=[[one, one]])
    assert betti_bound(pres).n == 1
    assert betti_bound(with_cell).n == 0


def test_free_product_of_free_groups():
    pres = free_group_product(2, 2)
    M = fox_matrix(pres)
    assert len(M.D2) == 4 and len(M.D2[0]) == 4
    assert rank_over_fraction_field(M.D2) == sympy_rank(M.D2) == 3
    b = betti_bound(pres)
    assert (b.n, b.bound, b.infinite_H2_certificate, b.rank_D2) == (1, 1, True, 3)


def test_abelian_rank_two():
    pres = Presentation.make(["a", "b"], ["abAB"], [1, 0])
    assert [x.exponents() for x in fox_matrix(pres).D2[0]] == [[], [0, 1]]
    b = betti_bound(pres)
    assert (b.n, b.bound, b.infinite_H2_certificate) == (0, 0, False)
    b = betti_bound(Presentation.make(["a", "b"], ["abAB"], [1, 1]))
    assert (b.n, b.bound, b.infinite_H2_certificate) == (0, 0, False)


def test_surfaces_and_larger_products():
    b = betti_bound(surface_presentation(2))
    assert (b.n, b.bound) == (0, -2)
    b = betti_bound(free_group_product(3, 2))
    assert (b.n, b.bound, b.rank_D2) == (2, 2, 4)


@pytest.mark.parametrize("p1,p2", [(1, 1), (1, 3), (2, 3), (3, 3)])
def test_free_products_against_sympy(p1, p2):
    pres = free_group_product(p1, p2)
    M = fox_matrix(pres)
    r = sympy_rank(M.D2)
    assert rank_over_fraction_field(M.D2) == r
    b = betti_bound(pres)
    assert b.n == p1 * p2 - r
    assert b.n == (p1 - 1) * (p2 - 1)


def test_product_counts():
    c = surface_product_counts(2, 2)
    assert (c.p, c.q, c.r, c.excess, c.product_formula) == (8, 18, 8, 2, 2)
    c = product_presentation_counts(2, 0, 2, 0)
    assert (c.p, c.q, c.r, c.excess, c.product_formula) == (4, 4, 0, 0, 0)
    with pytest.raises(PreconditionError):
        product_presentation_counts(-1, 0, 1, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 5), st.integers(0, 5), st.integers(0, 5), st.integers(0, 5))
def test_product_formula_offset(p1, q1, p2, q2):
    c = product_presentation_counts(p1, q1, p2, q2)
    assert c.product_formula == c.excess + q1 * q2
    # Euler characteristic is multiplicative once the q1 q2 four-cells are counted
    assert 1 - c.p + c.q - c.r + q1 * q2 == (1 - p1 + q1) * (1 - p2 + q2)


def test_specialization_never_exceeds_symbolic_rank():
    M = fox_matrix(free_group_product(2, 3)).D2
    exact = rank_over_fraction_field(M)
    ranks = random_specialization_ranks(M, 100, seed=1)
    assert all(r <= exact for r in ranks)
    assert sum(r == exact for r in ranks) >= 95
    # t = 1 kills every Fox derivative of a commutator
    assert rank_at(M, 1) == 0


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(exps, min_size=3, max_size=3), min_size=1, max_size=3))
def test_random_matrix_rank_vs_sympy(rows):
    M = [[Laurent.from_exponents(e) for e in row] for row in rows]
    exact = rank_over_fraction_field(M)
    assert exact == sympy_rank(M)
    assert all(r <= exact for r in random_specialization_ranks(M, 5, seed=0))


def test_presentation_json_round_trip():
    pres = Presentation.make(["a", "b"], ["abAB"], [1, 0], r3=1, d3=[[Laurent.from_exponents([0])]])
    assert Presentation.from_json(pres.to_json()) == pres
