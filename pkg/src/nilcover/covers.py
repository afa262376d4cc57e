"""Nilpotent covers, partitions and non-nilpotent sets for the rank-one families.

A ``Cover`` is a list of subgroups, each with a kind tag and optionally a
distinguished element.  Verification checks three things independently:

* every member is nilpotent of class at most c,
* the members cover G (exact union),
* distinguished elements of distinct members generate non-c-nilpotent subgroups.

A cover passing all three has exactly omega_c(G) members.

Distinguished elements are chosen deterministically: the least element (in
code order) satisfying the predicate the construction calls for.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .groups import INF, NONNIL, FiniteGroup, Subgroup, format_bound
from .lie_families import FamilySpec, SpecError, maximal_tori, torus_kinds

log = logging.getLogger(__name__)


class CoverError(RuntimeError):
    pass


@dataclass
class Cover:
    group: FiniteGroup | None
    c: float | int
    members: list[Subgroup] = field(default_factory=list)
    distinguished: list[int | None] = field(default_factory=list)
    mode: str = "full"  # full | count
    counts: dict[str, int] = field(default_factory=dict)  # kind -> number of members
    expected: dict[str, int] = field(default_factory=dict)  # counts predicted by the order formulas
    notes: list[str] = field(default_factory=list)

    def add(self, H: Subgroup, kind: str, g: int | None = None):
        H.kind = kind
        self.members.append(H)
        self.distinguished.append(g)
        self.counts[kind] = self.counts.get(kind, 0) + 1

    def __len__(self) -> int:
        if self.mode == "count":
            return sum(self.counts.values())
        return len(self.members)

    @property
    def size(self) -> int:
        return len(self)

    def kinds(self) -> list[str]:
        return [m.kind for m in self.members]

    def to_dict(self, with_elements: bool = True) -> dict:
        d = {"schema": "nilcover.cover/1", "c": format_bound(self.c), "mode": self.mode, "size": len(self),
             "counts": dict(self.counts)}
        if self.group is not None:
            d["group"] = self.group.name
        if self.mode == "full":
            sizes: dict[str, list[int]] = {}
            for m in self.members:
                sizes.setdefault(m.kind, [])
                if len(m) not in sizes[m.kind]:
                    sizes[m.kind].append(len(m))
            d["member_orders"] = sizes
            if with_elements and self.group is not None:
                d["distinguished"] = [None if g is None else self.group.element_hex(g) for g in self.distinguished]
        if self.notes:
            d["notes"] = list(self.notes)
        return d


@dataclass
class Certificate:
    ok: bool
    covering: bool
    nilpotent: bool
    two_minimal: bool
    size: int
    witness: tuple | None = None  # failing pair (i, j) of member positions, or uncovered element
    reason: str = ""

    def to_dict(self) -> dict:
        return {"ok": self.ok, "covering": self.covering, "members_c_nilpotent": self.nilpotent,
                "two_minimal": self.two_minimal, "size": self.size,
                "witness": None if self.witness is None else list(self.witness), "reason": self.reason}


# -- verification -----------------------------------------------------------------

def check_members(cv: Cover) -> tuple[bool, int | None]:
    """Every member c-nilpotent; returns the first failing position otherwise."""
    G = cv.group
    seen: dict[bytes, bool] = {}
    for i, H in enumerate(cv.members):
        ok = seen.get(H.key)
        if ok is None:
            cls = G.nilpotency_class(H)
            ok = cls is not None and cls <= cv.c
            seen[H.key] = ok
        if not ok:
            return False, i
    return True, None


def check_covering(cv: Cover) -> tuple[bool, int | None]:
    G = cv.group
    hit = np.zeros(G.order, dtype=bool)
    for H in cv.members:
        hit[H.members] = True
    if hit.all():
        return True, None
    return False, int(np.flatnonzero(~hit)[0])


def fill_distinguished(cv: Cover) -> None:
    """For members without one, pick the least element lying in no other member."""
    G = cv.group
    count = np.zeros(G.order, dtype=np.int64)
    for H in cv.members:
        count[H.members] += 1
    for i, H in enumerate(cv.members):
        if cv.distinguished[i] is None:
            private = H.members[count[H.members] == 1]
            cv.distinguished[i] = int(private[0]) if len(private) else None


def check_two_minimal(cv: Cover) -> tuple[bool, tuple | None]:
    G = cv.group
    if any(g is None for g in cv.distinguished):
        i = next(i for i, g in enumerate(cv.distinguished) if g is None)
        return False, (i,)
    d = np.asarray(cv.distinguished, dtype=np.int64)
    if len(np.unique(d)) != len(d):
        _, first, counts = np.unique(d, return_index=True, return_counts=True)
        g = d[first[np.flatnonzero(counts > 1)[0]]]
        pos = np.flatnonzero(d == g)
        return False, (int(pos[0]), int(pos[1]))
    bound = 2**40 if cv.c == INF else int(cv.c)
    for i in range(len(d) - 1):
        v = G.pair_class_row(int(d[i]), d[i + 1:])
        bad = np.flatnonzero((v != NONNIL) & (v <= bound))
        if len(bad):
            return False, (i, i + 1 + int(bad[0]))
    return True, None


def verify_2minimal(cv: Cover, search: bool = True) -> Certificate:
    """Full certificate: members c-nilpotent, covering, pairwise distinguished check."""
    if cv.mode != "full":
        raise CoverError("only FULL-mode covers can be verified element by element")
    if search:
        fill_distinguished(cv)
    nil, bad_member = check_members(cv)
    cov, uncovered = check_covering(cv)
    two, pair = check_two_minimal(cv)
    ok = nil and cov and two
    reason = ""
    witness = None
    if not nil:
        reason, witness = "member is not c-nilpotent", (bad_member,)
    elif not two:
        reason, witness = "distinguished elements generate a c-nilpotent subgroup", pair
    elif not cov:
        reason, witness = "element not covered", (uncovered,)
    return Certificate(ok, cov, nil, two, len(cv), witness, reason)


def partition_identity(cv: Cover, core: Subgroup | None = None) -> bool:
    """sum(|X| - |K|) + |K| == |G| where K is the common intersection (trivial for a partition)."""
    G = cv.group
    k = 1 if core is None else len(core)
    return sum(len(H) - k for H in cv.members) + k == G.order


def pairwise_intersections(cv: Cover) -> set[int]:
    G = cv.group
    owner = np.zeros(G.order, dtype=np.int64)
    for H in cv.members:
        owner[H.members] += 1
    return set(np.unique(owner).tolist())


# -- helpers -------------------------------------------------------------------------

def _least(G: FiniteGroup, members: np.ndarray, pred) -> int | None:
    for g in members:
        if pred(int(g)):
            return int(g)
    return None


def _with_center(G: FiniteGroup, H: Subgroup) -> Subgroup:
    Z = G.center
    if np.all(H.mask[Z.members]):
        return H
    return G.closure(list(H.generators) + list(Z.members))


def _spec(G: FiniteGroup, spec: FamilySpec | None) -> FamilySpec:
    spec = spec or getattr(G, "spec", None)
    if spec is None:
        raise SpecError("group has no family metadata")
    return spec


# -- partition covers -------------------------------------------------------------------

def partition_cover(G: FiniteGroup, spec: FamilySpec | None = None, c=INF) -> Cover:
    """Maximal tori together with Sylow p-subgroups (preimages containing Z for SL2)."""
    spec = _spec(G, spec)
    f, q = spec.family, spec.q
    if f == "PGL2" or (f == "SL2" and q % 2 == 0):
        if q <= 3:
            raise SpecError("partition cover needs q > 3")
    elif f == "SL2":
        if q <= 5:
            raise SpecError("SL2 partition cover needs q > 5")
    elif f == "Sz":
        if spec.m == 0:
            raise SpecError("Suzuki partition cover needs m > 0")
    else:
        raise SpecError(f"no partition cover for {f}")
    cv = Cover(G, c)
    Z = G.center
    zmask = Z.mask
    orders = G.orders

    if f == "Sz":
        def tpred(g):
            return g != G.identity
        spred = tpred
    elif len(Z) > 1:  # SL2, q odd: the image of g in PSL2 must have order > 2
        def tpred(g):
            return not zmask[G.power(g, 2)]

        def spred(g):
            return not zmask[g]
    else:
        def tpred(g):
            return orders[g] > 2

        def spred(g):
            return g != G.identity

    for tc in maximal_tori(G, spec):
        for T in tc.members:
            T = _with_center(G, T)
            cv.add(T, "torus", _least(G, T.members, tpred))
    for P in G.sylow_subgroups(spec.p):
        P = _with_center(G, P)
        cv.add(P, f"sylow-{spec.p}", _least(G, P.members, spred))
    cv.notes.append(f"{len(cv.members)} members; intersections {'Z(G)' if len(Z) > 1 else 'trivial'}")
    return cv


def sz_abelian_refinement(G: FiniteGroup, spec: FamilySpec | None = None) -> Cover:
    """Tori plus, in each Sylow 2-subgroup P, the q-1 abelian groups <g_i, Z(P)>."""
    spec = _spec(G, spec)
    if spec.family != "Sz" or spec.m == 0:
        raise SpecError("abelian refinement needs Sz(q) with m > 0")
    cv = Cover(G, 1)
    for tc in maximal_tori(G, spec):
        for T in tc.members:
            cv.add(T, "torus", _least(G, T.members, lambda g: g != G.identity))
    for P in G.sylow_subgroups(2):
        for H, g in sylow_abelian_pieces(G, P):
            cv.add(H, "H_i", g)
    return cv


def sylow_abelian_pieces(G: FiniteGroup, P: Subgroup) -> list[tuple[Subgroup, int]]:
    """Subgroups <g_i, Z(P)>, g_i the least element of each nontrivial coset of Z(P)."""
    ZP = subgroup_center(G, P)
    seen = ZP.mask.copy()
    out = []
    for g in P.members:
        g = int(g)
        if seen[g]:
            continue
        coset = G.mul(g, ZP.members)
        seen[coset] = True
        H = G.closure([g, *ZP.generators])
        out.append((H, g))
    return out


def subgroup_center(G: FiniteGroup, H: Subgroup) -> Subgroup:
    keep = np.ones(len(H), dtype=bool)
    for h in H.generators:
        keep &= G.mul(H.members, h) == G.mul(h, H.members)
    return Subgroup(G, H.members[keep], "center")


def upper_central_second(G: FiniteGroup, H: Subgroup) -> Subgroup:
    """Z_2(H): elements whose commutators with H land in Z(H)."""
    Z = subgroup_center(G, H)
    keep = np.ones(len(H), dtype=bool)
    for h in H.generators:
        keep &= Z.mask[G.commutator(H.members, h)]
    return Subgroup(G, H.members[keep], "Z2")


# -- unitary groups -------------------------------------------------------------------

def _unitary_counts(spec: FamilySpec, c) -> dict[str, int]:
    """Member counts from normalizer orders."""
    q = spec.q
    order = q**3 * (q * q - 1) * (q**3 + 1)
    counts = {}
    if spec.family == "SU3":
        d = spec.delta
    else:
        d = 1
    if c == 1:
        counts["U0xZ"] = order // (q**3 * d * (q - 1))
    else:
        counts["UxZ"] = order // (q**3 * (q * q - 1))
    counts["M"] = order // (q * (q * q - 1))
    for kind, t, w in torus_kinds(FamilySpec("SU3", q)):
        counts[kind] = order // (t * w)
    return counts


def unitary_cover(G: FiniteGroup | None, spec: FamilySpec, c, mode: str = "auto") -> Cover:
    """(U x Z)^G or (U0 x Z)^G, M^G and the three torus classes.

    COUNT mode only evaluates member counts; FULL mode materializes every
    member in an enumerated group.  At q <= 3 the family still covers G but
    need not be 2-minimal; the certificate reports what holds.
    """
    if spec.family not in ("SU3", "PGU3"):
        raise SpecError("unitary cover needs SU3 or PGU3")
    if mode == "auto":
        mode = "full" if G is not None else "count"
    counts = _unitary_counts(spec, c)
    if mode == "count":
        cv = Cover(None, c, mode="count", counts=dict(counts), expected=counts)
        cv.notes.append("member counts only")
        return cv
    cv = Cover(G, c)
    q, p = spec.q, spec.p
    U = G.sylow_subgroups(p)[0]
    ZU = subgroup_center(G, U)
    Z = G.center
    # M: centralizer of g in Z(U) intersected with centralizer of an order-(q+1) element
    g = int(ZU.members[ZU.members != G.identity][0])
    Cg = G.centralizer(g)
    cand = Cg.members[G.orders[Cg.members] % p != 0]
    cand = cand[np.argsort(G.orders[cand] != q + 1, kind="stable")]
    M = None
    for h in cand:
        X = Subgroup(G, np.intersect1d(Cg.members, G.centralizer_members(int(h))))
        if len(X) == q * (q + 1) and X.is_abelian():
            M = X
            break
    if M is None:
        # q = 2 in SU3: the order-(q+1) part of C_G(g) is Z(G) itself
        h = cand[G.orders[cand] == q + 1]
        if len(h) == 0:
            raise CoverError("no M subgroup of order q(q+1)")
        M = G.closure([*ZU.generators, int(h[0])])
        cv.notes.append("M degenerates to Z(U) x Z(G)")
    for X in G.conjugates(M)[0]:
        cv.add(X, "M")
    if c == 1:
        u = int(U.members[~ZU.mask[U.members]][0])
        U0Z = G.centralizer(u)
        for X in G.conjugates(U0Z)[0]:
            cv.add(X, "U0xZ")
    else:
        UZ = _with_center(G, U)
        for X in G.conjugates(UZ)[0]:
            cv.add(X, "UxZ")
    for tc in maximal_tori(G, spec, strict=spec.q > 2):
        for T in tc.members:
            cv.add(T, tc.kind)
        if tc.missing:
            cv.notes.append(f"{tc.kind}: no regular element of order {tc.order}; kind omitted")
        elif tc.degenerate:
            cv.notes.append(f"{tc.kind} equals Z(G); counted once as a subgroup, {tc.count} times as a torus")
    cv.expected = counts
    return cv


# -- Ree groups -------------------------------------------------------------------------

@dataclass
class ReeLocalReport:
    q: int
    Pg_count: int
    Qh_count: int
    Pg_cover_P: bool
    Pg_pairwise_class3: bool
    Qh_cover: bool
    Qh_pairwise_noncommuting: bool
    center_order: int
    z2_order: int

    @property
    def ok(self) -> bool:
        return self.Pg_cover_P and self.Pg_pairwise_class3 and self.Qh_cover and self.Qh_pairwise_noncommuting


def ree_sylow_local(P: FiniteGroup, spec: FamilySpec | None = None) -> ReeLocalReport:
    """The P_g = <g, Z2(P)> and Q_h = <h, Z(P)> families inside P = ReeSylowP(q)."""
    spec = _spec(P, spec)
    q = spec.q
    raw = P.raw
    ZP = Subgroup(P, np.flatnonzero((raw[:, 0] == 0) & (raw[:, 1] == 0)), "Z(P)")
    Z2 = Subgroup(P, np.flatnonzero(raw[:, 0] == 0), "Z2(P)")
    # P_g: one per pair {x, -x} of nonzero x-coordinates
    pg_gens, pg_groups = [], []
    covered = Z2.mask.copy()
    for g in range(P.order):
        if covered[g]:
            continue
        H = P.closure([g, *Z2.generators])
        covered[H.members] = True
        pg_gens.append(g)
        pg_groups.append(H)
    pg_cover = bool(covered.all())
    pg_class3 = True
    for i in range(len(pg_gens)):
        for j in range(i + 1, len(pg_gens)):
            if P.pair_class_closure(pg_gens[i], pg_gens[j]) != 3:
                pg_class3 = False
    # Q_h: one per pair of cosets {hZ, h^-1 Z} outside Z2(P)
    qh_gens = []
    covered = Z2.mask.copy()
    for h in range(P.order):
        if covered[h]:
            continue
        H = P.closure([h, *ZP.generators])
        covered[H.members] = True
        qh_gens.append(h)
    qh_cover = bool(covered.all())
    qh = np.asarray(qh_gens)
    noncomm = True
    for i, h in enumerate(qh[:-1]):
        if P.centralizer_mask(int(h))[qh[i + 1:]].any():
            noncomm = False
            break
    return ReeLocalReport(q, len(pg_gens), len(qh_gens), pg_cover, pg_class3, qh_cover, noncomm,
                          len(ZP), len(Z2))


def ree_counts(spec: FamilySpec, c) -> dict[str, int]:
    """Member counts of the Ree family: tori, then P^G, P_g or Q_h pieces, and F^G."""
    q = spec.q
    nP = q**3 + 1  # Sylow 3-subgroups
    counts = {"torus": q**6}
    if c == INF or c >= 3:
        counts["sylow-3"] = nP
    elif c == 2:
        counts["P_g"] = nP * (q - 1) // 2
    else:
        counts["Q_h"] = nP * q * (q - 1) // 2
    counts["F-centralizer"] = q**2 * nP
    return counts


def ree_cover(G: FiniteGroup | None, spec: FamilySpec, c, mode: str = "auto", local: FiniteGroup | None = None) -> Cover:
    """Ree covers: FULL on Ree3Full, COUNT (plus the Sylow-local check) for q >= 27.

    For q = 3 the generic family degenerates, so the FULL cover is built from a
    maximum independent set: each s contributes the subgroup generated by its
    closed neighbourhood in Gamma_c.
    """
    if spec.family not in ("Ree3Full", "ReeSylowP"):
        raise SpecError("Ree cover needs a Ree family")
    if mode == "auto":
        mode = "full" if spec.family == "Ree3Full" and G is not None else "count"
    if mode == "full":
        if spec.family != "Ree3Full" or G is None:
            raise SpecError("FULL Ree cover only for the enumerated group of q = 3")
        from .nilgraph import mis_omega
        res = mis_omega(G, c)
        cv = neighbourhood_cover(G, res.independent_set, c)
        cv.notes.append(f"built from a maximum independent set of size {len(res.independent_set)}")
        return cv
    if spec.q == 3:
        raise SpecError("the q = 3 values are computed directly, not by counting")
    counts = ree_counts(spec, c)
    cv = Cover(None, c, mode="count", counts=dict(counts), expected=dict(counts))
    if local is not None:
        rep = ree_sylow_local(local)
        cv.notes.append(f"Sylow-local: {rep.Pg_count} P_g, {rep.Qh_count} Q_h, ok={rep.ok}")
        if not rep.ok:
            raise CoverError("Sylow-local Ree families failed verification")
        per_p = {"P_g": rep.Pg_count, "Q_h": rep.Qh_count}
        for k, v in per_p.items():
            if k in counts and counts[k] != v * (spec.q**3 + 1):
                raise CoverError(f"{k} count {v} per Sylow subgroup disagrees with the formula")
    return cv


def su3_cover(G: FiniteGroup | None, spec: FamilySpec, c, mode: str = "auto") -> Cover:
    return unitary_cover(G, spec, c, mode)


# -- neighbourhood covers from independent sets ----------------------------------------

def neighbourhood_cover(G: FiniteGroup, S, c) -> Cover:
    """For each s in S the subgroup generated by its closed neighbourhood in Gamma_c.

    When each such subgroup is c-nilpotent and they cover G, the cover with
    distinguished elements S certifies |S| = omega_c(G).
    """
    cv = Cover(G, c)
    bound = 2**40 if c == INF else int(c)
    allidx = np.arange(G.order)
    for s in S:
        v = G.pair_class_row(int(s), allidx)
        nbhd = np.flatnonzero((v != NONNIL) & (v <= bound))
        H = G.closure(nbhd) if len(nbhd) < G.order else G.whole
        cv.add(H, "N[s]", int(s))
    return cv


# -- constructive lower bound -------------------------------------------------------

@dataclass
class SylowSet:
    elements: list[int]
    parts: dict[int, int]  # prime -> number of elements contributed (nu_t)
    verified: bool
    witness: tuple | None = None

    def __len__(self) -> int:
        return len(self.elements)


def sylow_lower_bound_set(G: FiniteGroup, spec: FamilySpec | None, tori_primes, weyl_order: int = 2) -> SylowSet:
    """One element per Sylow subgroup for p and each listed torus prime.

    Each chosen element lies in a unique Sylow subgroup of its prime (for the
    torus primes it generates the t-part of a unique torus).  The union is
    checked pairwise for non-nilpotence.
    """
    spec = _spec(G, spec)
    primes = [spec.p] + [int(t) for t in tori_primes]
    for t in primes[1:]:
        if weyl_order % t == 0:
            raise SpecError(f"prime {t} divides |W| = {weyl_order}")
        if G.order % t:
            raise SpecError(f"prime {t} does not divide |G|")
    chosen: list[int] = []
    parts = {}
    for t in primes:
        d = G.sylow(t)
        unique = np.diff(d.indptr) == 1
        picked = 0
        for P in d.subgroups:
            cand = P.members[unique[P.members] & (P.members != G.identity)]
            if t != spec.p:
                cand = cand[G.orders[cand] == G.orders[P.members].max()]
            if len(cand) == 0:
                raise CoverError(f"a Sylow {t}-subgroup has no element in a unique Sylow subgroup")
            chosen.append(int(cand[0]))
            picked += 1
        parts[t] = picked
    from .nilgraph import verify_independent
    bad = verify_independent(G, chosen, INF)
    return SylowSet(chosen, parts, bad is None, bad)


# -- dispatcher ----------------------------------------------------------------------

def construction_cover(G: FiniteGroup, spec: FamilySpec, c) -> Cover | None:
    """The explicit 2-minimal construction for (family, q, c), or None when there is none.

    Small q (direct computation) and the unitary families, whose constructions
    start at q = 4, return None; so does anything not enumerated.
    """
    f, q = spec.family, spec.q
    try:
        if f == "Sz" and spec.m > 0:
            return sz_abelian_refinement(G, spec) if c == 1 else partition_cover(G, spec, c)
        if f == "PGL2" and q > 3:
            return partition_cover(G, spec, c)
        if f == "SL2" and ((q % 2 == 0 and q > 3) or q > 5):
            return partition_cover(G, spec, c)
    except SpecError:
        return None
    return None
