"""Enumerated finite groups: closure, nilpotency class, conjugacy and Sylow data.

Group elements are indices into a sorted table of canonical codes.  All heavy
operations are vectorized over index arrays; a full Cayley table is built
lazily for groups up to ``CAYLEY_CAP`` elements.

Nilpotency classes are plain ints; ``None`` marks a non-nilpotent subgroup.
Class bounds ``c`` are ints or ``INF``.
"""

from __future__ import annotations

import json
import logging
import math
import struct
from collections import OrderedDict
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from sympy import factorint

from .elements import Representation, rep_from_header

log = logging.getLogger(__name__)

INF = math.inf
CLOSURE_CAP = 2**22
CAYLEY_CAP = 8192
LOCAL_TABLE_CAP = 256  # Sylow subgroups up to this order get a pair-class table
NONNIL = -1  # array sentinel for "not nilpotent"


class ClosureCapExceeded(RuntimeError):
    """A closure grew past the configured element cap."""


def is_c_nilpotent(cls: int | None, c) -> bool:
    return cls is not None and cls <= c


def parse_bound(text) -> float | int:
    if isinstance(text, (int, float)):
        if text != INF and (int(text) != text or text < 1):
            raise ValueError(f"class bound must be a positive integer or inf, got {text}")
        return text if text == INF else int(text)
    t = str(text).strip().lower()
    if t in ("inf", "infinity", "oo", "∞"):
        return INF
    v = int(t)
    if v < 1:
        raise ValueError("class bound must be >= 1")
    return v


def format_bound(c) -> str:
    return "inf" if c == INF else str(int(c))


def _bound_array_value(c) -> int:
    return 2**40 if c == INF else int(c)


@dataclass(eq=False)
class Subgroup:
    parent: "FiniteGroup"
    members: np.ndarray  # sorted element indices
    kind: str = ""

    def __post_init__(self):
        self.members = np.asarray(self.members, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.members)

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, i) -> bool:
        j = np.searchsorted(self.members, i)
        return bool(j < len(self.members) and self.members[j] == i)

    def contains(self, idx) -> np.ndarray:
        idx = np.asarray(idx)
        j = np.searchsorted(self.members, idx)
        j = np.minimum(j, len(self.members) - 1)
        return self.members[j] == idx

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[self.members] = True
        return m

    @cached_property
    def key(self) -> bytes:
        return self.members.tobytes()

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and other.parent is self.parent and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        k = f" {self.kind}" if self.kind else ""
        return f"<Subgroup{k} of order {len(self)} in {self.parent.name}>"

    @cached_property
    def generators(self) -> list[int]:
        return self.parent.generating_set(self.members)

    def is_abelian(self) -> bool:
        g = self.generators
        G = self.parent
        a = np.repeat(g, len(g))
        b = np.tile(g, len(g))
        return bool(np.all(G.mul(a, b) == G.mul(b, a)))

    def nilpotency_class(self) -> int | None:
        return self.parent.nilpotency_class(self)

    def conjugate(self, g: int) -> "Subgroup":
        return Subgroup(self.parent, np.sort(self.parent.conj(self.members, g)), self.kind)


@dataclass
class SylowData:
    prime: int
    subgroups: list[Subgroup]
    conjugators: np.ndarray  # P_i = P_0^{g_i}
    normalizer: Subgroup  # of P_0
    # CSR map element -> indices of Sylow subgroups containing it
    indptr: np.ndarray = field(repr=False, default=None)
    ids: np.ndarray = field(repr=False, default=None)

    @property
    def count(self) -> int:
        return len(self.subgroups)

    def containing(self, e: int) -> np.ndarray:
        return self.ids[self.indptr[e]:self.indptr[e + 1]]


class FiniteGroup:
    """A fully enumerated finite group over a vectorized representation."""

    spec = None  # set by lie_families.build

    def __init__(self, rep: Representation, raw: np.ndarray, name: str = "G", meta: dict | None = None):
        raw = rep.canon(np.asarray(raw, dtype=np.int32).reshape(-1, rep.width))
        codes = rep.encode(raw)
        codes, first = np.unique(codes, return_index=True)
        self.rep = rep
        self.raw = raw[first]
        self.codes = codes
        self.order = len(codes)
        self.name = name
        self.meta = dict(meta or {})
        self.identity = int(self.index(rep.identity()[None, :])[0])
        self.closure_cap = CLOSURE_CAP
        self._cayley = None
        self._cent_cache: OrderedDict[int, np.ndarray] = OrderedDict()
        self._sylow: dict[int, SylowData] = {}
        self._local_tables: dict[int, np.ndarray] = {}
        self._pair_memo: dict[tuple[int, int], int | None] = {}

    def __repr__(self) -> str:
        return f"<FiniteGroup {self.name} of order {self.order}>"

    def __len__(self) -> int:
        return self.order

    # -- construction ---------------------------------------------------------
    @classmethod
    def generate(cls, rep: Representation, gens: np.ndarray, name: str = "G", meta: dict | None = None,
                 cap: int = CLOSURE_CAP) -> "FiniteGroup":
        """Breadth-first closure of raw generators under right multiplication."""
        gens = rep.canon(np.asarray(gens, dtype=np.int32).reshape(-1, rep.width))
        ident = rep.identity()[None, :]
        known = rep.encode(ident)
        chunks = [ident]
        frontier = ident
        while len(frontier):
            a = np.repeat(frontier, len(gens), axis=0)
            b = np.tile(gens, (len(frontier), 1))
            prod = rep.mul(a, b)
            codes = rep.encode(prod)
            codes, first = np.unique(codes, return_index=True)
            fresh = ~np.isin(codes, known, assume_unique=True)
            frontier = prod[first[fresh]]
            known = np.union1d(known, codes[fresh])
            chunks.append(frontier)
            if len(known) > cap:
                raise ClosureCapExceeded(f"group generation exceeded {cap} elements")
        return cls(rep, np.concatenate(chunks), name=name, meta=meta)

    # -- element lookup -------------------------------------------------------
    def index(self, raw: np.ndarray) -> np.ndarray:
        codes = self.rep.encode(raw)
        j = np.searchsorted(self.codes, codes)
        j = np.minimum(j, self.order - 1)
        if not np.all(self.codes[j] == codes):
            raise KeyError("element not in group (closure violated)")
        return j

    def element_bytes(self, i: int) -> bytes:
        return self.rep.to_bytes(self.raw[i])

    def element_hex(self, i: int) -> str:
        return self.element_bytes(int(i)).hex()

    def describe(self, i: int) -> str:
        return self.rep.describe(self.raw[int(i)])

    # -- arithmetic -----------------------------------------------------------
    @property
    def cayley(self) -> np.ndarray | None:
        if self._cayley is None and self.order <= CAYLEY_CAP:
            n = self.order
            dtype = np.int16 if n < 2**15 else np.int32
            table = np.empty((n, n), dtype=dtype)
            step = max(1, 2**21 // max(n, 1))
            allidx = np.arange(n)
            for lo in range(0, n, step):
                rows = np.arange(lo, min(n, lo + step))
                a = np.repeat(rows, n)
                b = np.tile(allidx, len(rows))
                table[rows] = self._mul_raw(a, b).reshape(len(rows), n)
            self._cayley = table
        return self._cayley

    def _mul_raw(self, a, b):
        return self.index(self.rep.mul(self.raw[a], self.raw[b]))

    def mul(self, a, b) -> np.ndarray:
        table = self._cayley if self._cayley is not None else (self.cayley if self.order <= CAYLEY_CAP else None)
        if table is not None:
            return table[a, b].astype(np.int64)
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        shape = a.shape
        a, b = a.ravel(), b.ravel()
        out = self._mul_raw(a, b) if len(a) else np.zeros(0, dtype=np.int64)
        return out.reshape(shape)

    def ensure_cayley(self) -> bool:
        return self.cayley is not None

    @cached_property
    def _powers(self) -> tuple[np.ndarray, np.ndarray]:
        n = self.order
        allidx = np.arange(n)
        cols = [np.full(n, self.identity), allidx]
        order = np.zeros(n, dtype=np.int64)
        order[self.identity] = 1
        cur = allidx
        k = 1
        while np.any(order == 0):
            k += 1
            cur = self.mul(cur, allidx)
            hit = (cur == self.identity) & (order == 0)
            order[hit] = k
            cols.append(cur)
            if k > n:
                raise RuntimeError("element order exceeds group order")
        table = np.stack(cols[:max(order.max(), 2)], axis=1)
        return order, table

    @property
    def orders(self) -> np.ndarray:
        return self._powers[0]

    @property
    def exponent_bound(self) -> int:
        return int(self.orders.max())

    def power(self, x, k) -> np.ndarray:
        x = np.asarray(x)
        o = self.orders[x]
        return self._powers[1][x, np.asarray(k) % o]

    @cached_property
    def inv(self) -> np.ndarray:
        return self.power(np.arange(self.order), -1)

    def conj(self, x, g) -> np.ndarray:
        """x^g = g^-1 x g."""
        g = np.asarray(g)
        return self.mul(self.mul(self.inv[g], x), g)

    def commutator(self, a, b) -> np.ndarray:
        return self.mul(self.mul(self.inv[a], self.inv[b]), self.mul(a, b))

    @cached_property
    def primes(self) -> list[int]:
        return sorted(factorint(self.order))

    @cached_property
    def components(self) -> dict[int, np.ndarray]:
        """Prime-power parts: components[t][x] = x_t, the t-part of x."""
        out = {}
        orders = self.orders
        allidx = np.arange(self.order)
        for t in self.primes:
            comp = np.full(self.order, self.identity, dtype=np.int64)
            for n in np.unique(orders):
                n = int(n)
                if n % t:
                    continue
                ta = t ** factorint(n)[t]
                rest = n // ta
                k = (rest * pow(rest, -1, ta)) % n if ta > 1 else 0
                sel = allidx[orders == n]
                comp[sel] = self.power(sel, k)
            out[t] = comp
        return out

    # -- subgroups ------------------------------------------------------------
    def closure(self, gens, cap: int | None = None) -> Subgroup:
        members = self._closure_members(gens, cap)
        return Subgroup(self, members)

    def _closure_members(self, gens, cap=None) -> np.ndarray:
        cap = self.closure_cap if cap is None else cap
        gens = np.unique(np.asarray(gens, dtype=np.int64).ravel())
        gens = gens[gens != self.identity]
        visited = np.zeros(self.order, dtype=bool)
        visited[self.identity] = True
        if len(gens) == 0:
            return np.array([self.identity], dtype=np.int64)
        frontier = np.array([self.identity], dtype=np.int64)
        count = 1
        while len(frontier):
            prod = self.mul(frontier[:, None], gens[None, :]).ravel()
            prod = np.unique(prod[~visited[prod]])
            visited[prod] = True
            count += len(prod)
            if count > cap:
                raise ClosureCapExceeded(f"closure exceeded cap {cap}")
            frontier = prod
        members = np.flatnonzero(visited)
        assert self.order % len(members) == 0, "Lagrange violated"
        return members

    def generating_set(self, members) -> list[int]:
        """Greedy irredundant generating set, preferring high-order elements."""
        members = np.asarray(members)
        if len(members) == 1:
            return []
        cand = members[np.argsort(-self.orders[members], kind="stable")]
        gens: list[int] = []
        inside = np.zeros(self.order, dtype=bool)
        inside[self.identity] = True
        for g in cand:
            if inside[g]:
                continue
            gens.append(int(g))
            inside[:] = False
            inside[self._closure_members(gens)] = True
            if inside.sum() == len(members):
                break
        return gens

    def subgroup(self, members, kind: str = "") -> Subgroup:
        return Subgroup(self, np.unique(np.asarray(members, dtype=np.int64)), kind)

    @cached_property
    def whole(self) -> Subgroup:
        return Subgroup(self, np.arange(self.order), "G")

    def normal_closure(self, S, within) -> Subgroup:
        """Normal closure of S in the subgroup generated by ``within``."""
        members, _ = self._normal_closure(S, within)
        return Subgroup(self, members)

    def _normal_closure(self, S, within) -> tuple[np.ndarray, np.ndarray]:
        gens = np.unique(np.asarray(S, dtype=np.int64))
        within = np.asarray(within, dtype=np.int64)
        while True:
            members = self._closure_members(gens)
            if len(gens) == 0 or len(within) == 0:
                return members, gens
            mask = np.zeros(self.order, dtype=bool)
            mask[members] = True
            conj = self.conj(gens[:, None], within[None, :]).ravel()
            new = np.unique(conj[~mask[conj]])
            if len(new) == 0:
                return members, gens
            gens = np.concatenate([gens, new])

    def nilpotency_class(self, H: Subgroup, gens=None) -> int | None:
        """Lower central series length; None when the series stalls above 1.

        gamma_{i+1} is the normal closure in H of [a, g] for a generating
        gamma_i and g generating H.
        """
        if len(H) == 1:
            return 0
        hg = np.asarray(H.generators if gens is None else gens, dtype=np.int64)
        cur = hg
        size = len(H)
        cls = 0
        for _ in range(int(math.log2(len(H))) + 2):
            comms = self.commutator(cur[:, None], hg[None, :]).ravel()
            comms = np.unique(comms[comms != self.identity])
            cls += 1
            if len(comms) == 0:
                return cls
            members, cur = self._normal_closure(comms, hg)
            if len(members) == size:
                return None
            size = len(members)
        raise AssertionError("lower central series did not terminate")

    def is_abelian(self) -> bool:
        return self.whole.is_abelian()

    # -- conjugacy ------------------------------------------------------------
    @cached_property
    def _class_data(self):
        n = self.order
        rep_of = np.full(n, -1, dtype=np.int64)
        conjugator = np.zeros(n, dtype=np.int64)
        reps: list[int] = []
        centralizers: dict[int, np.ndarray] = {}
        allidx = np.arange(n)
        inv = self.inv
        for x in allidx:
            if rep_of[x] >= 0:
                continue
            img = self.mul(self.mul(inv, x), allidx)  # x^g for all g
            uniq, first = np.unique(img, return_index=True)
            rep_of[uniq] = x
            conjugator[uniq] = first
            centralizers[int(x)] = np.flatnonzero(img == x)
            reps.append(int(x))
        return rep_of, conjugator, reps, centralizers

    def conjugacy_classes(self) -> list[np.ndarray]:
        rep_of, _, reps, _ = self._class_data
        return [np.flatnonzero(rep_of == r) for r in reps]

    def class_of(self, x: int) -> np.ndarray:
        rep_of = self._class_data[0]
        return np.flatnonzero(rep_of == rep_of[x])

    def class_rep(self, x) -> np.ndarray:
        return self._class_data[0][np.asarray(x)]

    def conjugator(self, x) -> np.ndarray:
        """g with rep^g = x."""
        return self._class_data[1][np.asarray(x)]

    def centralizer_members(self, x: int) -> np.ndarray:
        rep_of, conjugator, _, cents = self._class_data
        r = int(rep_of[x])
        if r == x:
            return cents[r]
        return np.sort(self.conj(cents[r], conjugator[x]))

    def centralizer(self, x: int) -> Subgroup:
        return Subgroup(self, self.centralizer_members(int(x)), "centralizer")

    def centralizer_mask(self, x: int) -> np.ndarray:
        x = int(x)
        m = self._cent_cache.get(x)
        if m is None:
            m = np.zeros(self.order, dtype=bool)
            m[self.centralizer_members(x)] = True
            self._cent_cache[x] = m
            if len(self._cent_cache) > 512:
                self._cent_cache.popitem(last=False)
        else:
            self._cent_cache.move_to_end(x)
        return m

    @cached_property
    def center(self) -> Subgroup:
        rep_of = self._class_data[0]
        sizes = np.bincount(rep_of, minlength=self.order)
        return Subgroup(self, np.flatnonzero(sizes[rep_of] == 1), "center")

    def normalizer(self, H: Subgroup) -> Subgroup:
        allidx = np.arange(self.order)
        ok = np.ones(self.order, dtype=bool)
        mask = H.mask
        for h in H.generators:
            ok &= mask[self.conj(h, allidx)]
        return Subgroup(self, np.flatnonzero(ok), "normalizer")

    def conjugates(self, H: Subgroup, normalizer: Subgroup | None = None) -> tuple[list[Subgroup], np.ndarray]:
        """All distinct conjugates H^g, with one conjugating g for each."""
        N = self.normalizer(H) if normalizer is None else normalizer
        seen = np.zeros(self.order, dtype=bool)
        out, conjs = [], []
        for g in [self.identity, *range(self.order)]:
            if seen[g]:
                continue
            seen[self.mul(N.members, g)] = True
            out.append(Subgroup(self, np.sort(self.conj(H.members, g)), H.kind))
            conjs.append(g)
        return out, np.asarray(conjs, dtype=np.int64)

    def is_simple(self) -> bool:
        """Normal closure of every nontrivial class representative is G."""
        if self.order == 1:
            return False
        for r in self._class_data[2]:
            if r == self.identity:
                continue
            if len(self._normal_closure([r], self.whole.generators)[0]) != self.order:
                return False
        return True

    # -- Sylow machinery ------------------------------------------------------
    def sylow(self, t: int) -> SylowData:
        if t in self._sylow:
            return self._sylow[t]
        if self.order % t:
            raise ValueError(f"{t} does not divide |G| = {self.order}")
        target = t ** factorint(self.order)[t]
        orders = self.orders
        is_t = np.array([self._is_power_of(int(o), t) for o in orders])
        P = Subgroup(self, np.array([self.identity]))
        while len(P) < target:
            N = self.normalizer(P)
            cand = N.members[is_t[N.members] & ~P.mask[N.members]]
            P = self.closure(list(P.generators) + [int(cand[0])])
        P.kind = f"sylow-{t}"
        N = self.normalizer(P)
        subs, conjs = self.conjugates(P, N)
        assert len(subs) % t == 1 % t and self.order % len(subs) == 0, "Sylow count violates Sylow's theorem"
        members = np.concatenate([s.members for s in subs])
        owners = np.repeat(np.arange(len(subs)), [len(s) for s in subs])
        order = np.argsort(members, kind="stable")
        indptr = np.searchsorted(members[order], np.arange(self.order + 1))
        data = SylowData(t, subs, conjs, N, indptr, owners[order])
        self._sylow[t] = data
        return data

    @staticmethod
    def _is_power_of(n: int, t: int) -> bool:
        while n % t == 0:
            n //= t
        return n == 1

    def sylow_subgroups(self, t: int) -> list[Subgroup]:
        return self.sylow(t).subgroups

    def unique_sylow_members(self, t: int) -> np.ndarray:
        d = self.sylow(t)
        counts = np.diff(d.indptr)
        return np.flatnonzero(counts == 1)

    def sylow_union_mask(self, t: int, e: int) -> np.ndarray:
        d = self.sylow(t)
        m = np.zeros(self.order, dtype=bool)
        for s in d.containing(int(e)):
            m[d.subgroups[s].members] = True
        return m

    # -- pair classification --------------------------------------------------
    def pair_class_closure(self, x: int, y: int) -> int | None:
        """Reference path: nilpotency class of <x, y> from its closure."""
        H = self.closure([x, y])
        return self.nilpotency_class(H, gens=[g for g in {x, y} if g != self.identity])

    def pair_class(self, x: int, y: int) -> int | None:
        v = int(self.pair_class_row(int(x), np.array([int(y)]))[0])
        return None if v == NONNIL else v

    def pair_class_row(self, x: int, ys) -> np.ndarray:
        """Class of <x, y> for each y; NONNIL where not nilpotent.

        Fast paths: commuting pairs are abelian; otherwise <x,y> is nilpotent
        iff the t-parts of x commute with the t'-parts of y for all primes
        t != t' and, for each t, x_t and y_t lie in a common Sylow t-subgroup.
        In that case <x,y> is the direct product of the <x_t, y_t>.
        """
        x = int(x)
        ys = np.asarray(ys, dtype=np.int64)
        out = np.full(len(ys), NONNIL, dtype=np.int64)
        comm = self.centralizer_mask(x)[ys]
        out[comm] = 1
        if x == self.identity:
            out[comm & (ys == self.identity)] = 0
        rest = np.flatnonzero(~comm)
        if len(rest) == 0:
            return out
        yr = ys[rest]
        comps = self.components
        xc = {t: int(comps[t][x]) for t in self.primes}
        nonnil = np.zeros(len(rest), dtype=bool)
        for t in self.primes:
            yt = comps[t][yr]
            for t2 in self.primes:
                if t2 != t and xc[t2] != self.identity:
                    nonnil |= ~self.centralizer_mask(xc[t2])[yt]
            if xc[t] != self.identity:
                nonnil |= ~self.sylow_union_mask(t, xc[t])[yt]
        nil = rest[~nonnil]
        for j in nil:
            y = int(ys[j])
            cls = 1
            for t in self.primes:
                a, b = xc[t], int(comps[t][y])
                if a == self.identity or b == self.identity:
                    continue
                cls = max(cls, self._local_class(t, a, b))
            out[j] = cls
        return out

    def _local_class(self, t: int, a: int, b: int) -> int:
        """Class of <a, b> for t-elements known to share a Sylow t-subgroup."""
        d = self.sylow(t)
        P0 = d.subgroups[0]
        if len(P0) > LOCAL_TABLE_CAP:
            key = (min(a, b), max(a, b))
            if key not in self._pair_memo:
                self._pair_memo[key] = self.pair_class_closure(a, b)
            return self._pair_memo[key]
        common = np.intersect1d(d.containing(a), d.containing(b))
        s = int(common[0])
        g = int(d.conjugators[s])
        ginv = int(self.inv[g])
        # P_s = P0^g, so P0 contains g a g^-1
        a0, b0 = self.conj(np.array([a, b]), ginv)
        table = self._local_table(t)
        ia, ib = np.searchsorted(P0.members, [a0, b0])
        return int(table[ia, ib])

    def _local_table(self, t: int) -> np.ndarray:
        if t not in self._local_tables:
            P0 = self.sylow(t).subgroups[0]
            m = P0.members
            n = len(m)
            table = np.zeros((n, n), dtype=np.int64)
            for i in range(n):
                row = self._closure_row_classes(int(m[i]), m[i:])
                table[i, i:] = row
                table[i:, i] = row
            self._local_tables[t] = table
        return self._local_tables[t]

    def _closure_row_classes(self, x: int, ys) -> np.ndarray:
        out = np.empty(len(ys), dtype=np.int64)
        cm = self.centralizer_mask(x)
        for j, y in enumerate(ys):
            y = int(y)
            if cm[y]:
                out[j] = 0 if (x == self.identity and y == self.identity) else 1
            else:
                c = self.pair_class_closure(x, y)
                out[j] = NONNIL if c is None else c
        return out

    def nilpotent_pair_mask(self, x: int, ys, c) -> np.ndarray:
        """True where <x, y> is c-nilpotent."""
        v = self.pair_class_row(x, ys)
        return (v != NONNIL) & (v <= _bound_array_value(c))


# -- binary dump --------------------------------------------------------------------
# layout (little-endian): b"NCGT1", u16 version, u32 header length, UTF-8 JSON
# header, u64 order, u32 width, then order*width u32 coordinates in code order.

MAGIC = b"NCGT1"
DUMP_VERSION = 1


def dump_group(G: FiniteGroup, path) -> None:
    header = json.dumps({"name": G.name, "rep": G.rep.header(), "meta": G.meta}, sort_keys=True).encode()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<HI", DUMP_VERSION, len(header)))
        fh.write(header)
        fh.write(struct.pack("<QI", G.order, G.rep.width))
        fh.write(np.ascontiguousarray(G.raw, dtype="<u4").tobytes())


def load_group(path) -> FiniteGroup:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:5] != MAGIC:
        raise ValueError("not an NCGT1 group table")
    version, hlen = struct.unpack_from("<HI", data, 5)
    if version != DUMP_VERSION:
        raise ValueError(f"unsupported NCGT1 version {version}")
    off = 11
    header = json.loads(data[off:off + hlen])
    off += hlen
    order, width = struct.unpack_from("<QI", data, off)
    off += 12
    raw = np.frombuffer(data, dtype="<u4", count=order * width, offset=off).astype(np.int32).reshape(order, width)
    rep = rep_from_header(header["rep"])
    G = FiniteGroup(rep, raw, name=header["name"], meta=header["meta"])
    if G.order != order:
        raise ValueError("NCGT1 table has duplicate elements")
    return G
