import networkx as nx
import pytest

from lgrigid.gluing import build_X0, build_Xq, coset_base
from lgrigid.cayley import GenSet
from lgrigid.cocycles import carry_cocycle, two_covering_from_cocycle
from lgrigid.groups import Cyclic
from lgrigid.rigidity import verify_covering

# Gluing instance: H = Z/24, G = 4Z/24 (order 6), T chosen by search so that the
# Cayley triangle condition holds.
Z24_T = [2, 3, 4, 5, 6, 7, 11, 13, 17, 18, 19, 20, 21, 22]


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


class GluingInstance:
    def __init__(self):
        self.H = Cyclic(24)
        self.T = GenSet(self.H, Z24_T)
        self.in_G = lambda h: h % 4 == 0
        self.S = GenSet(self.H, [t for t in self.T if self.in_G(t)])
        self.cb = coset_base(self.H, self.T, self.in_G)
        C = Cyclic(6)
        cover = two_covering_from_cocycle(C, GenSet(C, [s // 4 for s in self.S]), carry_cocycle(6))
        gidx = {g: i for i, g in enumerate(self.cb.group_elements)}
        self.q = verify_covering([gidx[4 * x[1]] for x in cover.elements], cover.total, self.cb.base.Y)
        self.X0 = build_X0(self.H, self.T, self.in_G)
        self.Xq = build_Xq(self.cb, self.q)


@pytest.fixture(scope="session")
def gluing():
    return GluingInstance()
