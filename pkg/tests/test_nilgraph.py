import networkx as nx
import numpy as np
import pytest
from hypothesis import given, strategies as st

from nilcover.groups import INF
from nilcover.nilgraph import (GraphCapExceeded, HintError, NilGraph, build_gamma, clique_cover_upper,
                               cyclic_representatives, graph_metrics, greedy_clique_cover, independence_number,
                               maximal_cliques, mis_omega, omega_exact, verify_independent)

SMALL = [("SL2", 3), ("PGL2", 3), ("PSL2", 3), ("Sz", 2), ("PGL2", 4), ("SL2", 5), ("SU3", 2), ("PGU3", 2)]


def _nx_alpha(adj: np.ndarray) -> int:
    g = nx.complement(nx.from_numpy_array(adj.astype(int)))
    return max(len(c) for c in nx.find_cliques(g)) if len(adj) else 0


@st.composite
def random_graphs(draw):
    n = draw(st.integers(1, 28))
    p = draw(st.floats(0.05, 0.9))
    seed = draw(st.integers(0, 2**31))
    rng = np.random.default_rng(seed)
    a = np.triu(rng.random((n, n)) < p, 1)
    return a | a.T


@given(random_graphs())
def test_mis_matches_networkx(adj):
    gr = NilGraph.from_dense(adj)
    res = independence_number(gr)
    assert res.exact and res.size == res.upper == _nx_alpha(adj)
    assert gr.is_independent(res.witness)


@given(random_graphs())
def test_greedy_clique_cover_is_a_partition_into_cliques(adj):
    gr = NilGraph.from_dense(adj)
    cover = greedy_clique_cover(gr)
    flat = sorted(v for c in cover for v in c)
    assert flat == list(range(gr.n))
    for c in cover:
        assert all(adj[u, v] for u in c for v in c if u != v)
    assert len(cover) >= independence_number(gr).size


def test_timeout_keeps_valid_bounds():
    rng = np.random.default_rng(11)
    a = np.triu(rng.random((160, 160)) < 0.1, 1)
    gr = NilGraph.from_dense(a | a.T)
    res = independence_number(gr, timeout=0.01)
    assert res.size <= res.upper
    assert gr.is_independent(res.witness)


def test_maximal_cliques_small():
    adj = np.zeros((5, 5), dtype=bool)
    for u, v in [(0, 1), (1, 2), (0, 2), (3, 4)]:
        adj[u, v] = adj[v, u] = True
    assert sorted(maximal_cliques(NilGraph.from_dense(adj))) == [[0, 1, 2], [3, 4]]


@pytest.fixture(scope="module", params=SMALL, ids=lambda t: f"{t[0]}({t[1]})")
def G(request, groups):
    return groups(*request.param)


def test_gamma_is_monotone_in_c(G):
    dense = [build_gamma(G, c).dense() for c in (1, 2, 3, INF)]
    for d in dense:
        assert np.array_equal(d, d.T) and not d.diagonal().any()
    for lo, hi in zip(dense, dense[1:]):
        assert np.all(lo <= hi)
    # c = 1 is the commuting graph
    T = G.cayley
    assert np.array_equal(dense[0] | np.eye(G.order, dtype=bool), T == T.T)


def test_cyclic_representatives_cover_group(G):
    reps = cyclic_representatives(G)
    seen = np.zeros(G.order, dtype=bool)
    for r in reps:
        seen[G.power(np.full(int(G.orders[r]), r), np.arange(int(G.orders[r])))] = True
    assert seen.all()


def test_reduction_to_cyclic_reps_preserves_omega(G):
    for c in (1, 2, INF):
        full = independence_number(build_gamma(G, c))
        red = mis_omega(G, c)
        assert full.exact and red.exact
        assert full.size == red.value


def test_omega_is_monotone_in_c(G):
    vals = [omega_exact(G, c, "mis").value for c in (1, 2, 3, INF)]
    assert vals == sorted(vals, reverse=True)


@pytest.mark.parametrize("family,q", [("PGL2", 5), ("PGL2", 7), ("SL2", 7), ("Sz", 8)])
def test_certified_and_brute_agree(groups, family, q):
    G = groups(family, q)
    for c in (1, INF):
        cert = omega_exact(G, c, "certify")
        brute = omega_exact(G, c, "mis")
        assert cert.method == "certified" and brute.method == "brute"
        assert cert.value == brute.value
        assert verify_independent(G, brute.independent_set, c) is None


def test_witness_and_cover_sizes_match(groups):
    res = omega_exact(groups("PGU3", 2), 1)
    assert res.value == 71
    assert res.certificate_sizes() == {"independent_set": 71, "cover": 71}
    d = res.to_dict(groups("PGU3", 2), with_elements=True)
    assert d["schema"] == "nilcover.omega/1" and len(d["independent_set"]) == 71


def test_clique_cover_upper(groups):
    G = groups("PGL2", 3)
    gr = build_gamma(G, 1)
    size, members = clique_cover_upper(gr)
    assert size >= mis_omega(G, 1).value
    S4 = G.whole
    with pytest.raises(HintError):
        clique_cover_upper(gr, [S4])


def test_graph_metrics_and_dimacs(groups):
    gr = build_gamma(groups("Sz", 2), INF)
    m = graph_metrics(gr)
    assert m["independence_number"] == 6 and m["equality"] is True
    text = gr.to_dimacs()
    assert text.splitlines()[1] == f"p edge 20 {gr.edge_count}"
    assert len(text.splitlines()) == 2 + gr.edge_count


def test_graph_cap(groups):
    with pytest.raises(GraphCapExceeded):
        build_gamma(groups("SL2", 5), 1, cap=100)


def test_bad_strategy(groups):
    with pytest.raises(ValueError):
        omega_exact(groups("Sz", 2), 1, "guess")
