"""Conjugacy classes as non-nilpotent sets.

For a class C, omega_inf(C) is the largest subset of C whose elements pairwise
generate non-nilpotent subgroups; C is a non-nilpotent class when that is all
of C.  The ratio omega_inf(C)/|C| is conjectured to stay at most 1/2 for
nontrivial classes of simple groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .groups import INF, NONNIL, FiniteGroup, Subgroup, format_bound
from .nilgraph import build_gamma, independence_number

EXACT_CLASS_CAP = 2000  # larger classes get a short greedy-quality search only


class NotSimpleError(ValueError):
    pass


@dataclass
class ClassReport:
    representative: int
    encoding: str
    size: int
    element_order: int
    omega: int | None  # exact value, None when only bounds are known
    bounds: tuple[int, int]
    witness: list[int] = field(default_factory=list)
    c: float | int = INF

    @property
    def ratio(self) -> Fraction | None:
        return None if self.omega is None else Fraction(self.omega, self.size)

    @property
    def non_nilpotent_class(self) -> bool | None:
        if self.omega is None:
            return False if self.bounds[1] < self.size else None
        return self.omega == self.size

    def to_dict(self) -> dict:
        r = self.ratio
        return {"representative": self.encoding, "size": self.size, "element_order": self.element_order,
                "c": format_bound(self.c), "omega": self.omega, "bounds": list(self.bounds),
                "ratio": None if r is None else str(r), "non_nilpotent_class": self.non_nilpotent_class}


def class_omega(G: FiniteGroup, cls, c=INF, timeout: float | None = 60.0, exact_cap: int = EXACT_CLASS_CAP) -> ClassReport:
    """Maximum non-c-nilpotent subset of one conjugacy class (c = 1 gives the non-commuting variant)."""
    cls = np.asarray(sorted(int(x) for x in cls), dtype=np.int64)
    rep = int(G.class_rep(int(cls[0])))
    if len(cls) != len(G.class_of(rep)):
        raise ValueError("not a full conjugacy class")
    gr = build_gamma(G, c, vertices=cls)
    if len(cls) > exact_cap:
        timeout = min(timeout or 1.0, 1.0)
    res = independence_number(gr, timeout=timeout)
    witness = [int(cls[i]) for i in res.witness]
    value = res.size if res.exact else None
    return ClassReport(rep, G.element_hex(rep), len(cls), int(G.orders[rep]), value, (res.size, res.upper), witness, c)


def analyze_classes(G: FiniteGroup, c=INF, timeout: float | None = 60.0) -> list[ClassReport]:
    """Reports for every nontrivial (non-central) class."""
    out = []
    for cls in G.conjugacy_classes():
        if len(cls) == 1:
            continue
        out.append(class_omega(G, cls, c, timeout))
    return out


@dataclass
class RatioCheck:
    max_ratio: Fraction | None
    witness: ClassReport | None
    holds: bool | None  # max ratio <= 1/2; None if some class stayed inexact
    reports: list[ClassReport]

    def to_dict(self) -> dict:
        return {"max_ratio": None if self.max_ratio is None else str(self.max_ratio),
                "witness_class": None if self.witness is None else self.witness.to_dict(),
                "conjecture_holds": self.holds, "classes": [r.to_dict() for r in self.reports]}


def ratio_conjecture_check(G: FiniteGroup, override: bool = False, timeout: float | None = 60.0) -> RatioCheck:
    if not override and not G.is_simple():
        raise NotSimpleError(f"{G.name} is not simple")
    reports = analyze_classes(G, INF, timeout)
    exact = [r for r in reports if r.omega is not None]
    best = max(exact, key=lambda r: (r.ratio, -r.size), default=None)
    mx = None if best is None else best.ratio
    if len(exact) < len(reports):
        # an inexact class can only break the bound if its upper bound allows it
        if any(Fraction(r.bounds[1], r.size) > Fraction(1, 2) for r in reports if r.omega is None):
            return RatioCheck(mx, best, None, reports)
    return RatioCheck(mx, best, mx is None or mx <= Fraction(1, 2), reports)


def isolated_class_check(G: FiniteGroup, t: int) -> list[np.ndarray]:
    """Classes of order-t elements no two of which lie in a common Sylow t-subgroup."""
    d = G.sylow(t)
    out = []
    for cls in G.conjugacy_classes():
        if int(G.orders[cls[0]]) != t:
            continue
        seen = np.zeros(d.count, dtype=np.int64)
        for x in cls:
            seen[d.ids[d.indptr[x]:d.indptr[x + 1]]] += 1
        if seen.max() <= 1:
            out.append(cls)
    return out


def baer_suzuki_check(G: FiniteGroup) -> dict[int, bool]:
    """Per nontrivial class: does it contain a pair generating a non-nilpotent subgroup?"""
    out = {}
    for cls in G.conjugacy_classes():
        if len(cls) == 1:
            continue
        rep = int(G.class_rep(int(cls[0])))
        out[rep] = bool((G.pair_class_row(rep, cls) == NONNIL).any())
    return out


def is_frobenius_complement(G: FiniteGroup, H: Subgroup) -> bool:
    """1 < H < G with H meeting each of its other conjugates trivially."""
    if len(H) in (1, G.order):
        return False
    conj, _ = G.conjugates(H)
    if len(conj) != G.order // len(H):  # self-normalizing
        return False
    return all(np.count_nonzero(H.mask[K.members]) == 1 for K in conj if K != H)


def central_complement_classes(G: FiniteGroup, H: Subgroup) -> list[np.ndarray]:
    """Classes of G meeting Z(H) outside the identity."""
    Z = [int(z) for z in H.members if z != G.identity and G.centralizer_mask(int(z))[H.members].all()]
    reps = sorted({int(G.class_rep(z)) for z in Z})
    return [G.class_of(r) for r in reps]
