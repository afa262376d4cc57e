"""The graph Gamma_c(G) and exact independence numbers.

Vertices are group elements; x != y are adjacent when <x, y> is nilpotent of
class at most c.  omega_c(G) is the independence number of this graph.

The exact solver works on Python-int bitsets.  Before branching it applies
two safe reductions:

* domination: if N[u] is contained in N[v] for adjacent u, v then some maximum
  independent set avoids v.  In Gamma_c this fires whenever <v> < <u>, so the
  graph shrinks to one generator per maximal cyclic subgroup at least.
* simplicial vertices: if N[v] is a clique, v belongs to some maximum
  independent set.

What remains is split into components and solved by branch and bound, with a
greedy clique partition as the bound (a max-clique search on the complement
in the style of Tomita's MCQ).
"""

from __future__ import annotations

import json
import logging
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .groups import INF, NONNIL, FiniteGroup, Subgroup, format_bound, is_c_nilpotent

log = logging.getLogger(__name__)

GRAPH_CAP = 8192


class GraphCapExceeded(RuntimeError):
    pass


class SolverTimeout(RuntimeError):
    pass


# -- bitset helpers ---------------------------------------------------------------

def bits_of(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask.astype(bool), bitorder="little").tobytes(), "little")


def iter_bits(b: int):
    while b:
        low = b & -b
        yield low.bit_length() - 1
        b ^= low


def popcount(b: int) -> int:
    return bin(b).count("1")


# -- the graph --------------------------------------------------------------------

@dataclass
class NilGraph:
    n: int
    c: float | int
    rows: np.ndarray  # packed adjacency rows, np.packbits(bitorder="little")
    group: FiniteGroup | None = field(default=None, repr=False)
    vertices: np.ndarray | None = None  # group indices of the vertices (None = all of G)

    @classmethod
    def from_dense(cls, adj: np.ndarray, c=INF, group=None, vertices=None) -> "NilGraph":
        adj = np.asarray(adj, dtype=bool)
        assert adj.shape[0] == adj.shape[1]
        assert np.array_equal(adj, adj.T), "adjacency must be symmetric"
        adj = adj.copy()
        np.fill_diagonal(adj, False)
        return cls(len(adj), c, np.packbits(adj, axis=1, bitorder="little"), group, vertices)

    def dense(self) -> np.ndarray:
        return np.unpackbits(self.rows, axis=1, count=self.n, bitorder="little").astype(bool)

    def row(self, i: int) -> np.ndarray:
        return np.unpackbits(self.rows[i], count=self.n, bitorder="little").astype(bool)

    def neighbors(self) -> list[int]:
        nb = []
        for i in range(self.n):
            nb.append(int.from_bytes(self.rows[i].tobytes(), "little"))
        return nb

    def degrees(self) -> np.ndarray:
        return self.dense().sum(axis=1)

    @property
    def edge_count(self) -> int:
        return int(self.degrees().sum()) // 2

    def edges(self):
        adj = self.dense()
        iu, ju = np.nonzero(np.triu(adj, 1))
        return iu, ju

    def is_independent(self, S) -> bool:
        S = np.asarray(list(S), dtype=np.int64)
        if len(S) < 2:
            return True
        return not self.dense()[np.ix_(S, S)].any()

    def induced(self, verts) -> "NilGraph":
        verts = np.asarray(verts, dtype=np.int64)
        sub = self.dense()[np.ix_(verts, verts)]
        gv = self.vertices[verts] if self.vertices is not None else verts
        return NilGraph.from_dense(sub, self.c, self.group, gv if self.group is not None else None)

    def to_dimacs(self) -> str:
        iu, ju = self.edges()
        lines = [f"c Gamma_{format_bound(self.c)} graph", f"p edge {self.n} {len(iu)}"]
        lines += [f"e {u + 1} {v + 1}" for u, v in zip(iu.tolist(), ju.tolist())]
        return "\n".join(lines) + "\n"


def _class_rows(G: FiniteGroup, xs, ys, c) -> np.ndarray:
    """Boolean block: <x, y> is c-nilpotent, for x in xs and y in ys."""
    ys = np.asarray(ys, dtype=np.int64)
    out = np.zeros((len(xs), len(ys)), dtype=bool)
    bound = 2**40 if c == INF else int(c)
    for i, x in enumerate(xs):
        v = G.pair_class_row(int(x), ys)
        out[i] = (v != NONNIL) & (v <= bound)
    return out


def build_gamma(G: FiniteGroup, c, vertices=None, cap: int = GRAPH_CAP) -> NilGraph:
    """Gamma_c on all of G (or on the given vertex subset)."""
    verts = np.arange(G.order) if vertices is None else np.asarray(vertices, dtype=np.int64)
    if len(verts) > cap:
        raise GraphCapExceeded(f"{len(verts)} vertices exceed the graph cap {cap}")
    adj = _class_rows(G, verts, verts, c)
    np.fill_diagonal(adj, False)
    adj |= adj.T  # pair_class is symmetric; this only guards rounding of the fast paths
    return NilGraph(len(verts), c, np.packbits(adj, axis=1, bitorder="little"), G,
                    None if vertices is None else verts)


# -- reductions ---------------------------------------------------------------------

@dataclass
class Reduction:
    kept: list[int]  # residual vertices
    forced: list[int]  # vertices placed in the independent set
    removed: int  # dominated vertices dropped


def cyclic_representatives(G: FiniteGroup, vertices=None) -> np.ndarray:
    """One generator (least index) for each maximal cyclic subgroup meeting the vertex set."""
    verts = np.arange(G.order) if vertices is None else np.asarray(vertices, dtype=np.int64)
    vset = np.zeros(G.order, dtype=bool)
    vset[verts] = True
    covered = np.zeros(G.order, dtype=bool)
    reps = []
    orders = G.orders
    for x in sorted(verts.tolist(), key=lambda v: (-int(orders[v]), v)):
        if covered[x]:
            continue
        o = int(orders[x])
        powers = G.power(np.full(o, x), np.arange(o))
        covered[powers] = True
        reps.append(x)
    return np.array(sorted(reps), dtype=np.int64)


def reduce_graph(nb: list[int], active: int, deadline: float | None = None) -> Reduction:
    """Iterate domination and simplicial rules to a fixpoint."""
    forced: list[int] = []
    removed = 0
    changed = True
    while changed and active:
        changed = False
        # simplicial vertices (neighborhood inside active is a clique)
        for v in list(iter_bits(active)):
            if not active >> v & 1:
                continue
            N = nb[v] & active
            ok = True
            for u in iter_bits(N):
                if (N & ~nb[u]) & ~(1 << u):
                    ok = False
                    break
            if ok:
                forced.append(v)
                active &= ~(N | (1 << v))
                changed = True
        # domination: remove v if some active neighbour u has N[u] within N[v]
        for v in list(iter_bits(active)):
            if not active >> v & 1:
                continue
            Nv = (nb[v] | (1 << v)) & active
            for u in iter_bits(nb[v] & active):
                Nu = (nb[u] | (1 << u)) & active
                if Nu & ~Nv == 0:
                    active &= ~(1 << v)
                    removed += 1
                    changed = True
                    break
        if deadline is not None and time.monotonic() > deadline:
            break
    return Reduction(list(iter_bits(active)), forced, removed)


def components(nb: list[int], active: int) -> list[int]:
    out = []
    rest = active
    while rest:
        seed = rest & -rest
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= nb[v]
            nxt &= rest & ~comp
            comp |= nxt
            frontier = nxt
        out.append(comp)
        rest &= ~comp
    return out


# -- branch and bound -------------------------------------------------------------

class _MIS:
    """Maximum independent set on vertex bitset ``P`` (max clique in the complement)."""

    def __init__(self, nb: list[int], P: int, deadline: float | None, lower: list[int] | None = None):
        self.nb = nb
        self.P = P
        self.verts = list(iter_bits(P))
        self.comp = {v: (P & ~nb[v]) & ~(1 << v) for v in self.verts}  # complement neighbours
        self.deadline = deadline
        self.best: list[int] = list(lower or [])
        self.nodes = 0
        self.timed_out = False

    def greedy(self) -> list[int]:
        """Min-degree greedy independent set."""
        P = self.P
        S = []
        while P:
            v = min(iter_bits(P), key=lambda u: (popcount(self.nb[u] & P), u))
            S.append(v)
            P &= ~(self.nb[v] | (1 << v))
        return S

    def clique_partition(self, P: int) -> tuple[list[int], list[int]]:
        """Greedy partition of P into cliques of the graph; returns (order, bound at each position)."""
        order, bounds = [], []
        k = 0
        Q = P
        while Q:
            k += 1
            R = Q
            while R:
                v = (R & -R).bit_length() - 1
                order.append(v)
                bounds.append(k)
                R &= self.nb[v]  # keep only vertices adjacent to all chosen so far
                Q &= ~(1 << v)
        return order, bounds

    def solve(self) -> tuple[list[int], bool]:
        g = self.greedy()
        if len(g) > len(self.best):
            self.best = g
        limit = sys.getrecursionlimit()
        sys.setrecursionlimit(max(10000, limit))  # depth is bounded by the independence number
        try:
            self._expand([], self.P)
        except SolverTimeout:
            self.timed_out = True
        finally:
            sys.setrecursionlimit(limit)
        return self.best, not self.timed_out

    def _expand(self, R: list[int], P: int):
        self.nodes += 1
        if self.deadline is not None and self.nodes % 256 == 0 and time.monotonic() > self.deadline:
            raise SolverTimeout
        order, bounds = self.clique_partition(P)
        for i in range(len(order) - 1, -1, -1):
            if len(R) + bounds[i] <= len(self.best):
                return
            v = order[i]
            newP = P & self.comp[v]
            R.append(v)
            if newP:
                self._expand(R, newP)
            elif len(R) > len(self.best):
                self.best = list(R)
            R.pop()
            P &= ~(1 << v)


@dataclass
class MISResult:
    size: int
    witness: list[int]  # vertex indices of the graph
    exact: bool
    upper: int
    nodes: int = 0
    reduced_vertices: int = 0
    elapsed: float = 0.0


def clique_partition_size(nb: list[int], P: int) -> int:
    m = _MIS(nb, P, None)
    _, bounds = m.clique_partition(P)
    return max(bounds) if bounds else 0


def independence_number(gr: NilGraph, timeout: float | None = None, prereduce: int | None = None) -> MISResult:
    """Exact maximum independent set (bounds on timeout); witness is verified."""
    t0 = time.monotonic()
    deadline = None if timeout is None else t0 + timeout
    nb = gr.neighbors()
    active = prereduce if prereduce is not None else (1 << gr.n) - 1
    red = reduce_graph(nb, active, deadline)
    witness = list(red.forced)
    exact = True
    upper = len(red.forced)
    nodes = 0
    for comp in components(nb, sum(1 << v for v in red.kept)):
        solver = _MIS(nb, comp, deadline)
        best, done = solver.solve()
        nodes += solver.nodes
        witness += best
        if done:
            upper += len(best)
        else:
            exact = False
            upper += clique_partition_size(nb, comp)
    witness.sort()
    assert gr.is_independent(witness), "solver produced a dependent set"
    return MISResult(len(witness), witness, exact, upper, nodes, len(red.kept), time.monotonic() - t0)


def greedy_clique_cover(gr: NilGraph) -> list[list[int]]:
    """Greedy partition of the vertex set into cliques of the graph."""
    nb = gr.neighbors()
    Q = (1 << gr.n) - 1
    out = []
    while Q:
        # start from the vertex with fewest remaining neighbours
        v = min(iter_bits(Q), key=lambda u: (popcount(nb[u] & Q), u))
        clique = [v]
        R = nb[v] & Q
        while R:
            u = max(iter_bits(R), key=lambda w: (popcount(nb[w] & R), -w))
            clique.append(u)
            R &= nb[u]
        for u in clique:
            Q &= ~(1 << u)
        out.append(sorted(clique))
    return out


# -- group-level omega ----------------------------------------------------------

@dataclass
class OmegaResult:
    family: str
    q: int
    c: float | int
    value: int | None
    lower: int
    upper: int
    method: str  # formula | certified | brute
    independent_set: list[int] | None = None  # group element indices
    cover: list[Subgroup] | None = None
    notes: list[str] = field(default_factory=list)
    elapsed_ms: float = 0.0

    @property
    def exact(self) -> bool:
        return self.value is not None

    def certificate_sizes(self) -> dict:
        d = {}
        if self.independent_set is not None:
            d["independent_set"] = len(self.independent_set)
        if self.cover is not None:
            d["cover"] = len(self.cover)
        return d

    def to_dict(self, G: FiniteGroup | None = None, with_elements: bool = False) -> dict:
        d = {"schema": "nilcover.omega/1", "family": self.family, "q": self.q, "c": format_bound(self.c)}
        if self.exact:
            d["value"] = self.value
        else:
            d["bounds"] = [self.lower, self.upper]
        d["method"] = self.method
        d["certificate_sizes"] = self.certificate_sizes()
        d["elapsed_ms"] = round(self.elapsed_ms, 1)
        if self.notes:
            d["notes"] = list(self.notes)
        if with_elements and G is not None and self.independent_set is not None:
            d["independent_set"] = [G.element_hex(i) for i in self.independent_set]
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(**kw), sort_keys=True)


def verify_independent(G: FiniteGroup, S, c) -> tuple[int, int] | None:
    """Pairwise check that S is non-c-nilpotent; returns a failing pair or None."""
    S = np.asarray(sorted(set(int(s) for s in S)), dtype=np.int64)
    bound = 2**40 if c == INF else int(c)
    for i in range(len(S) - 1):
        v = G.pair_class_row(int(S[i]), S[i + 1:])
        bad = np.flatnonzero((v != NONNIL) & (v <= bound))
        if len(bad):
            return int(S[i]), int(S[i + 1 + bad[0]])
    return None


def mis_omega(G: FiniteGroup, c, timeout: float | None = None, family: str = "", q: int = 0) -> OmegaResult:
    """omega_c(G) as the independence number of Gamma_c(G).

    The graph is built on one generator per maximal cyclic subgroup; the
    discarded vertices are dominated by their overgroup generator, so the
    independence number is unchanged.
    """
    t0 = time.monotonic()
    reps = cyclic_representatives(G)
    gr = build_gamma(G, c, vertices=reps)
    res = independence_number(gr, timeout=timeout)
    S = [int(reps[i]) for i in res.witness]
    assert verify_independent(G, S, c) is None, "independent set failed recheck"
    notes = [f"reduced graph {len(reps)} -> {res.reduced_vertices} vertices, {res.nodes} search nodes"]
    value = res.size if res.exact else None
    if not res.exact:
        notes.append("solver budget expired")
    return OmegaResult(family, q, c, value, res.size, res.upper, "brute", S, None, notes,
                       (time.monotonic() - t0) * 1000)


def graph_metrics(gr: NilGraph, timeout: float | None = None) -> dict:
    res = independence_number(gr, timeout=timeout)
    cover = greedy_clique_cover(gr)
    return {
        "vertices": gr.n,
        "edges": gr.edge_count,
        "independence_number": res.size if res.exact else None,
        "independence_bounds": [res.size, res.upper],
        "greedy_clique_cover": len(cover),
        "equality": res.exact and len(cover) == res.size,
    }


def maximal_cliques(gr: NilGraph, limit: int = 100000) -> list[list[int]]:
    """Bron-Kerbosch with pivoting; best-effort for small graphs."""
    nb = gr.neighbors()
    out: list[list[int]] = []

    def bk(R, P, X):
        if len(out) >= limit:
            return
        if not P and not X:
            out.append(sorted(R))
            return
        pivot = max(iter_bits(P | X), key=lambda u: popcount(nb[u] & P))
        for v in list(iter_bits(P & ~nb[pivot])):
            bk(R + [v], P & nb[v], X & nb[v])
            P &= ~(1 << v)
            X |= 1 << v

    bk([], (1 << gr.n) - 1, 0)
    return out



class HintError(ValueError):
    pass


def clique_cover_upper(gr: NilGraph, hint=()) -> tuple[int, list[Subgroup]]:
    """Cover of G by c-nilpotent subgroups: the hint, completed by maximal cyclic subgroups.

    Each member is a clique of Gamma_c, so the size bounds omega_c from above.
    """
    G, c = gr.group, gr.c
    members = []
    covered = np.zeros(G.order, dtype=bool)
    for H in hint:
        if not is_c_nilpotent(G.nilpotency_class(H), c):
            raise HintError(f"hint member of order {len(H)} is not {format_bound(c)}-nilpotent")
        members.append(H)
        covered[H.members] = True
    for r in cyclic_representatives(G):
        if covered.all():
            break
        o = int(G.orders[r])
        powers = G.power(np.full(o, r), np.arange(o))
        if not covered[powers].all():
            members.append(Subgroup(G, np.unique(powers), "cyclic-filler"))
            covered[powers] = True
    assert covered.all()
    return len(members), members


def omega_exact(G: FiniteGroup, c, strategy: str = "auto", timeout: float | None = None, spec=None) -> OmegaResult:
    """omega_c(G) by an explicit certified cover or by exact MIS.

    ``certify`` verifies the explicit construction (members c-nilpotent,
    exact union, distinguished elements pairwise non-c-nilpotent); ``mis``
    solves Gamma_c and then tries the closed neighbourhoods of the witness
    as a second, solver-independent certificate.  ``auto`` prefers certify
    whenever a construction exists.
    """
    from .covers import neighbourhood_cover, construction_cover, verify_2minimal

    if strategy not in ("auto", "mis", "certify"):
        raise ValueError(f"unknown strategy {strategy!r}")
    t0 = time.monotonic()
    spec = spec or G.spec
    family, q = (spec.family, spec.q) if spec is not None else (G.name, 0)
    notes: list[str] = []
    if strategy in ("auto", "certify"):
        cv = construction_cover(G, spec, c) if spec is not None else None
        if cv is None:
            if strategy == "certify":
                notes.append(f"no explicit construction for {family}({q}); falling back to mis")
        else:
            cert = verify_2minimal(cv)
            if cert.ok:
                n = len(cv)
                return OmegaResult(family, q, c, n, n, n, "certified", list(cv.distinguished), list(cv.members),
                                   notes + cv.notes, (time.monotonic() - t0) * 1000)
            notes.append(f"construction did not certify ({cert.reason}); falling back to mis")
    res = mis_omega(G, c, timeout=timeout, family=family, q=q)
    res.notes = notes + res.notes
    cv = neighbourhood_cover(G, res.independent_set, c)
    cert = verify_2minimal(cv, search=False)
    if cert.ok:
        res.cover = list(cv.members)
        res.notes.append("closed neighbourhoods of the witness form a 2-minimal cover")
        if res.value is None:
            res.value = res.upper = res.lower
    else:
        res.notes.append("neighbourhood cover inconclusive")
    res.elapsed_ms = (time.monotonic() - t0) * 1000
    return res
