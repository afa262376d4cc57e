"""Independent recomputation of the small values that disagree with the stated ones.

Groups are enumerated here as plain tuples of matrix entries, without the
package's field, group or solver code.  Nilpotency of class <= 2 of <x, y> is
tested by [x, y] commuting with x and y; plain nilpotency by uniqueness of
every Sylow subgroup of the closure; the independence number by networkx.
"""

import itertools

import networkx as nx
import pytest
from sympy import factorint

from nilcover.groups import INF
from nilcover.nilgraph import omega_exact

# -- GF(p) and GF(4) matrices as tuples --------------------------------------------

GF4_MUL = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]]  # x^2 = x + 1, x -> 2


def matmul(a, b, n, add, mul):
    out = []
    for i in range(n):
        for j in range(n):
            s = 0
            for k in range(n):
                s = add(s, mul(a[i * n + k], b[k * n + j]))
            out.append(s)
    return tuple(out)


def sl2(p):
    els = [m for m in itertools.product(range(p), repeat=4) if (m[0] * m[3] - m[1] * m[2]) % p == 1]
    return els, (lambda a, b: matmul(a, b, 2, lambda x, y: (x + y) % p, lambda x, y: x * y % p))


def su3_2():
    add = lambda x, y: x ^ y
    mul = lambda x, y: GF4_MUL[x][y]
    conj = lambda x: mul(x, x)
    M = lambda a, b: matmul(a, b, 3, add, mul)
    J = (0, 0, 1, 0, 1, 0, 1, 0, 0)

    def det(a):
        t = 0
        for perm in itertools.permutations(range(3)):
            t ^= mul(mul(a[perm[0]], a[3 + perm[1]]), a[6 + perm[2]])  # characteristic 2: signs vanish
        return t

    els = []
    for a in itertools.product(range(4), repeat=9):
        if det(a) != 1:
            continue
        ah = tuple(conj(a[j * 3 + i]) for i in range(3) for j in range(3))
        if M(M(ah, J), a) == J:
            els.append(a)
    return els, M


class RawGroup:
    def __init__(self, elements, mul):
        self.els = elements
        self.pos = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        self.T = [[self.pos[mul(elements[i], elements[j])] for j in range(n)] for i in range(n)]
        self.e = next(i for i in range(n) if all(self.T[i][j] == j for j in range(n)))
        self.inv = [next(j for j in range(n) if self.T[i][j] == self.e) for i in range(n)]

    def comm(self, x, y):
        T, inv = self.T, self.inv
        return T[T[inv[x]][inv[y]]][T[x][y]]

    def commute(self, x, y):
        return self.T[x][y] == self.T[y][x]

    def class_le2(self, x, y):
        z = self.comm(x, y)
        return self.commute(z, x) and self.commute(z, y)

    def closure(self, gens):
        seen = {self.e}
        frontier = [self.e]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = self.T[a][g]
                    if b not in seen:
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return seen

    def order_of(self, x):
        k, y = 1, x
        while y != self.e:
            y, k = self.T[y][x], k + 1
        return k

    def nilpotent(self, x, y):
        H = self.closure([x, y])
        for t, e in factorint(len(H)).items():
            # nilpotent iff each Sylow subgroup is normal iff the t-elements form a group of order t^e
            if sum(1 for h in H if t ** 20 % self.order_of(h) == 0) != t**e:
                return False
        return True


def alpha(G: RawGroup, related):
    """Largest set of elements pairwise not related, after merging twins."""
    n = len(G.els)
    rows = {}
    for x in range(n):
        key = frozenset(y for y in range(n) if y == x or related(x, y))
        rows.setdefault(key, x)
    reps = [x for key, x in rows.items() if len(key) < n]  # universal vertices never help
    g = nx.Graph()
    g.add_nodes_from(reps)
    g.add_edges_from((a, b) for a, b in itertools.combinations(reps, 2) if not related(a, b))
    clique, _ = nx.max_weight_clique(g, weight=None)
    return max(len(clique), 1)


@pytest.fixture(scope="module")
def raw_sl2_3():
    return RawGroup(*sl2(3))


@pytest.fixture(scope="module")
def raw_sl2_5():
    return RawGroup(*sl2(5))


@pytest.fixture(scope="module")
def raw_su3_2():
    return RawGroup(*su3_2())


def test_raw_orders(raw_sl2_3, raw_sl2_5, raw_su3_2):
    assert (len(raw_sl2_3.els), len(raw_sl2_5.els), len(raw_su3_2.els)) == (24, 120, 216)


def test_sl2_3_values(raw_sl2_3, groups):
    G = raw_sl2_3
    assert alpha(G, G.commute) == 7
    assert alpha(G, G.class_le2) == 5
    assert omega_exact(groups("SL2", 3), 1).value == 7


def test_sl2_5_values(raw_sl2_5, groups):
    G = raw_sl2_5
    assert alpha(G, G.commute) == 31
    assert alpha(G, G.class_le2) == 21
    assert omega_exact(groups("SL2", 5), 1).value == 31


def test_su3_2_values(raw_su3_2, groups):
    G = raw_su3_2
    assert alpha(G, G.commute) == 31
    w2 = alpha(G, G.class_le2)
    assert w2 == 10
    # omega_inf <= omega_2 = 10; the package's witness, re-read as raw matrices, attains it
    H = groups("SU3", 2)
    res = omega_exact(H, INF, "mis")
    S = [G.pos[tuple(int(v) for v in H.raw[i])] for i in res.independent_set]
    assert len(S) == 10
    assert all(not G.nilpotent(a, b) for a, b in itertools.combinations(S, 2))
    # and the stated c >= 2 value is out of reach: 31 pairwise non-nilpotent elements cannot exist
    assert w2 < 31


def test_package_group_is_the_raw_group(raw_su3_2, groups):
    H = groups("SU3", 2)
    assert {tuple(int(v) for v in row) for row in H.raw} == set(raw_su3_2.els)
