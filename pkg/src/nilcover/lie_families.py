"""Constructors for the rank-one families and their metadata."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .elements import MatrixRep, ReeTripleRep, SemilinearRep
from .galois import FieldError, make_field, prime_power
from .groups import FiniteGroup, Subgroup, load_group

log = logging.getLogger(__name__)

FAMILIES = ("SL2", "PGL2", "PSL2", "SU3", "GU3", "PGU3", "PSU3", "Sz", "Ree3Full", "ReeSylowP")

# largest q each family is enumerated at by default
ENUM_CAPS = {"SL2": 13, "PGL2": 13, "PSL2": 13, "SU3": 3, "GU3": 3, "PGU3": 3, "PSU3": 3,
             "Sz": 8, "Ree3Full": 3, "ReeSylowP": 27}


class SpecError(ValueError):
    pass


class EnumerationCapExceeded(SpecError):
    """The family/q pair is valid but too large to enumerate."""


@dataclass(frozen=True)
class FamilySpec:
    family: str
    q: int
    p: int = field(init=False)
    a: int = field(init=False)

    def __post_init__(self):
        fam = canonical_family(self.family)
        object.__setattr__(self, "family", fam)
        try:
            p, a = prime_power(self.q)
        except FieldError as exc:
            raise SpecError(str(exc)) from None
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "a", a)
        if fam == "Sz" and (p != 2 or a % 2 == 0):
            raise SpecError("Sz needs q = 2^(2m+1)")
        if fam in ("Ree3Full", "ReeSylowP") and (p != 3 or a % 2 == 0):
            raise SpecError("Ree families need q = 3^(2m+1)")
        if fam == "Ree3Full" and self.q != 3:
            raise SpecError("Ree3Full is only enumerated at q = 3")

    @property
    def m(self) -> int | None:
        if self.family in ("Sz", "Ree3Full", "ReeSylowP"):
            return (self.a - 1) // 2
        return None

    @property
    def delta(self) -> int:
        """|Z| where the family has a nontrivial center formula."""
        if self.family in ("SU3", "GU3", "PSU3", "PGU3"):
            return math.gcd(3, self.q + 1)
        if self.family == "SL2":
            return math.gcd(2, self.q - 1)
        return 1

    @property
    def pgu3_distinct(self) -> bool:
        """PGU3(q) differs from SU3(q) only when q = -1 mod 3."""
        return self.family == "PGU3" and self.q % 3 == 2

    def expected_order(self) -> int:
        q, f = self.q, self.family
        if f in ("SL2", "PGL2"):
            return q * (q * q - 1)
        if f == "PSL2":
            return q * (q * q - 1) // math.gcd(2, q - 1)
        su3 = q**3 * (q * q - 1) * (q**3 + 1)
        if f in ("SU3", "PGU3"):
            return su3
        if f == "GU3":
            return su3 * (q + 1)
        if f == "PSU3":
            return su3 // self.delta
        if f == "Sz":
            return q * q * (q * q + 1) * (q - 1)
        if f == "Ree3Full":
            return 1512
        if f == "ReeSylowP":
            return q**3
        raise SpecError(f)

    def label(self) -> str:
        return f"{self.family}({self.q})"

    def as_dict(self) -> dict:
        d = {"family": self.family, "q": self.q, "p": self.p, "a": self.a, "delta": self.delta}
        if self.m is not None:
            d["m"] = self.m
        return d


_ALIASES = {f.lower(): f for f in FAMILIES}
_ALIASES.update({"suzuki": "Sz", "ree": "Ree3Full", "reesylow": "ReeSylowP", "2b2": "Sz", "2g2": "Ree3Full"})


def canonical_family(name: str) -> str:
    f = _ALIASES.get(str(name).lower())
    if f is None:
        raise SpecError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    return f


# -- builders ---------------------------------------------------------------------

def build(spec: FamilySpec, cap: int | None = None) -> FiniteGroup:
    cap_q = ENUM_CAPS[spec.family] if cap is None else cap
    if spec.q > cap_q:
        raise EnumerationCapExceeded(f"{spec.label()} is beyond the enumeration cap (q <= {cap_q})")
    builder = {
        "SL2": _build_sl2, "PGL2": _build_pgl2, "PSL2": _build_psl2,
        "SU3": _build_su3, "GU3": _build_gu3, "PGU3": _build_pgu3, "PSU3": _build_psu3,
        "Sz": _build_sz, "Ree3Full": _build_ree_full, "ReeSylowP": _build_ree_sylow,
    }[spec.family]
    G = builder(spec)
    G.meta.update(spec.as_dict())
    G.spec = spec
    assert G.order == spec.expected_order(), f"{spec.label()}: built {G.order}, expected {spec.expected_order()}"
    log.info("built %s of order %d", spec.label(), G.order)
    return G


def load(path) -> FiniteGroup:
    """Read an NCGT1 table written by ``groups.dump_group`` and restore its spec."""
    G = load_group(path)
    if "family" in G.meta:
        G.spec = FamilySpec(G.meta["family"], int(G.meta["q"]))
    return G


def _all_2x2(F) -> np.ndarray:
    v = np.arange(F.q, dtype=np.int32)
    return np.array(np.meshgrid(v, v, v, v, indexing="ij")).reshape(4, -1).T.copy()


def _build_sl2(spec):
    F = make_field(spec.p, spec.a)
    rep = MatrixRep(F, 2)
    A = _all_2x2(F)
    return FiniteGroup(rep, A[rep.det(A) == 1], name=spec.label())


def _build_pgl2(spec):
    F = make_field(spec.p, spec.a)
    rep = MatrixRep(F, 2, projective=True)
    A = _all_2x2(F)
    return FiniteGroup(rep, A[rep.det(A) != 0], name=spec.label())


def _build_psl2(spec):
    F = make_field(spec.p, spec.a)
    rep = MatrixRep(F, 2, projective=True)
    A = _all_2x2(F)
    return FiniteGroup(rep, A[MatrixRep(F, 2).det(A) == 1], name=spec.label())


# unitary groups over GF(q^2) with the antidiagonal Hermitian form

def _antidiag(n, F):
    J = np.zeros((n, n), dtype=np.int32)
    J[np.arange(n), n - 1 - np.arange(n)] = F.one
    return J.reshape(1, -1)


def unitary_mask(rep: MatrixRep, q: int, A: np.ndarray) -> np.ndarray:
    """Rows A with A^T J A^sigma = J, sigma = x -> x^q."""
    F = rep.field
    J = _antidiag(rep.n, F)
    e = F.k // 2  # x^q = frobenius^(a)
    lhs = rep.mul(rep.mul(rep.transpose(A), np.broadcast_to(J, A.shape)), rep.frob(A, e))
    return np.all(lhs == J, axis=1)


def _unitary_generators(spec, general: bool):
    q = spec.q
    F = make_field(spec.p, 2 * spec.a)
    t = F.tables
    rep = MatrixRep(F, 3)
    # upper unitriangular candidates
    v = np.arange(F.q, dtype=np.int32)
    a, b, c = (x.ravel() for x in np.meshgrid(v, v, v, indexing="ij"))
    U = np.zeros((len(a), 9), dtype=np.int32)
    U[:, [0, 4, 8]] = F.one
    U[:, 1], U[:, 2], U[:, 5] = a, b, c
    U = U[unitary_mask(rep, q, U)]
    assert len(U) == q**3, "unitary unipotent radical has wrong order"
    lam = np.arange(1, F.q)
    qm1 = np.array([F.pow(int(x), q - 1) for x in lam])
    mq = np.array([F.pow(int(x), -q) for x in lam])
    T0 = np.zeros((len(lam), 9), dtype=np.int32)
    T0[:, 0], T0[:, 4], T0[:, 8] = lam, qm1, mq
    w = t.neg[_antidiag(3, F)]
    gens = [U, T0, w]
    if general:
        mus = [x for x in range(1, F.q) if F.pow(x, q + 1) == 1]
        D = np.zeros((len(mus), 9), dtype=np.int32)
        D[:, 0] = D[:, 8] = F.one
        D[:, 4] = mus
        gens.append(D)
    gens = np.concatenate(gens)
    assert unitary_mask(rep, q, gens).all()
    return F, gens


def _build_su3(spec):
    F, gens = _unitary_generators(spec, general=False)
    return FiniteGroup.generate(MatrixRep(F, 3), gens, name=spec.label())


def _build_gu3(spec):
    F, gens = _unitary_generators(spec, general=True)
    return FiniteGroup.generate(MatrixRep(F, 3), gens, name=spec.label())


def _build_pgu3(spec):
    F, gens = _unitary_generators(spec, general=True)
    return FiniteGroup.generate(MatrixRep(F, 3, projective=True), gens, name=spec.label())


def _build_psu3(spec):
    F, gens = _unitary_generators(spec, general=False)
    return FiniteGroup.generate(MatrixRep(F, 3, projective=True), gens, name=spec.label())


# Suzuki groups

def suzuki_generators(spec) -> tuple[MatrixRep, np.ndarray]:
    q, m = spec.q, spec.m
    F = make_field(2, spec.a)
    t = F.tables
    theta = t.frob_power(m + 1)
    rep = MatrixRep(F, 4)
    mul, add, inv = t.mul, t.add, t.inv

    def S(a, b):
        at = theta[a]
        a2t = mul[mul[a, a], at]
        r30 = add[add[a2t, mul[a, b]], theta[b]]
        r31 = add[mul[a, at], b]
        return [1, 0, 0, 0, a, 1, 0, 0, b, at, 1, 0, r30, r31, a, 1]

    k = F.primitive_element() if q > 2 else 1
    h = 2**m
    kh = F.pow(k, h)
    D = [F.pow(k, 1 + h), 0, 0, 0, 0, kh, 0, 0, 0, 0, int(inv[kh]), 0, 0, 0, 0, F.pow(k, -1 - h)]
    W = [0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0]
    gens = [S(a, 0) for a in range(1, q)] + [S(0, b) for b in range(1, q)] + [D, W]
    return rep, np.array(gens, dtype=np.int32)


def _build_sz(spec):
    rep, gens = suzuki_generators(spec)
    return FiniteGroup.generate(rep, gens, name=spec.label())


def _build_ree_full(spec):
    rep = SemilinearRep()
    F = rep.field
    A = _all_2x2(F)
    A = A[MatrixRep(F, 2).det(A) != 0]
    A = np.unique(rep.mat.canon(A), axis=0)
    rows = np.concatenate([np.concatenate([A, np.full((len(A), 1), e, dtype=np.int32)], axis=1)
                           for e in range(3)])
    return FiniteGroup(rep, rows, name=spec.label())


def _build_ree_sylow(spec):
    rep = ReeTripleRep(spec.m)
    v = np.arange(spec.q, dtype=np.int32)
    rows = np.array(np.meshgrid(v, v, v, indexing="ij")).reshape(3, -1).T.copy()
    return FiniteGroup(rep, rows, name=spec.label())


def ree_mul(a, b, m: int) -> tuple[int, int, int]:
    """Product of two triples in the Sylow 3-subgroup of 2G2(3^(2m+1))."""
    rep = _ree_rep(m)
    out = rep.mul(np.asarray([a], dtype=np.int32), np.asarray([b], dtype=np.int32))[0]
    return tuple(int(v) for v in out)


def ree_mul_batch(a, b, m: int) -> np.ndarray:
    """Row-wise products of two (N, 3) arrays of triples."""
    return _ree_rep(m).mul(np.asarray(a, dtype=np.int32), np.asarray(b, dtype=np.int32))


_REE_REPS: dict[int, ReeTripleRep] = {}


def _ree_rep(m: int) -> ReeTripleRep:
    if m not in _REE_REPS:
        _REE_REPS[m] = ReeTripleRep(m)
    return _REE_REPS[m]


def ree_inverse(a, m: int) -> tuple[int, int, int]:
    """Closed-form inverse: (x,y,z)^-1 = (-x, -y, -z + x y).

    With x' = -x the three x^(s+2) terms of the z coordinate sum to 3 x^(s+2) = 0.
    """
    F = _ree_rep(m).field
    x, y, z = (int(v) for v in a)
    return F.neg(x), F.neg(y), F.add(F.neg(z), F.mul(x, y))


# -- maximal tori -----------------------------------------------------------------

TORUS_FAMILIES = ("SL2", "PGL2", "PSL2", "SU3", "PGU3", "Sz")


@dataclass
class TorusClass:
    kind: str
    order: int
    weyl: int  # |N_G(T)/T| for a generic torus of this kind
    representative: Subgroup | None
    members: list[Subgroup]
    regular: int | None  # a regular semisimple element, None when the torus is central
    count: int  # number of tori of this kind (with multiplicity when T is central)

    @property
    def degenerate(self) -> bool:
        return self.regular is None

    @property
    def missing(self) -> bool:
        return self.representative is None


def torus_kinds(spec: FamilySpec) -> list[tuple[str, int, int]]:
    """(kind, order, |W_F|) per conjugacy class of maximal tori."""
    q, f = spec.q, spec.family
    if f in ("PGL2", "SL2"):
        return [("split", q - 1, 2), ("nonsplit", q + 1, 2)]
    if f == "PSL2":
        d = math.gcd(2, q - 1)
        return [("split", (q - 1) // d, 2), ("nonsplit", (q + 1) // d, 2)]
    if f in ("SU3", "PGU3"):
        return [("T0", q * q - 1, 2), ("T1", (q + 1) ** 2, 6), ("T2", q * q - q + 1, 3)]
    if f == "Sz":
        r = math.isqrt(2 * q)
        return [("T0", q - 1, 2), ("T+", q + r + 1, 4), ("T-", q - r + 1, 4)]
    raise SpecError(f"no torus recipe for {f}")


def maximal_tori(G: FiniteGroup, spec: FamilySpec | None = None, strict: bool = True) -> list[TorusClass]:
    """Maximal tori as abelian centralizers of regular semisimple elements.

    An element s of order prime to p counts as regular when C_G(s) is abelian
    of one of the family's torus orders; its tori are the conjugates of C_G(s).
    When a torus order equals |Z(G)| and no such element exists, the torus is
    Z(G) itself and its multiplicity is |G| / (|T| |W_F|).  With strict=False
    any other kind without a regular element (small q) comes back with no
    members instead of raising.
    """
    spec = spec or G.spec
    kinds = torus_kinds(spec)
    reps: dict[int, tuple[Subgroup, int]] = {}
    classes: list[tuple[Subgroup, int]] = []
    for r in G._class_data[2]:
        o = int(G.orders[r])
        if r == G.identity or o % spec.p == 0:
            continue
        C = G.centralizer(r)
        if len(C) not in {k[1] for k in kinds} or not C.is_abelian():
            continue
        known = False
        for T, _ in classes:
            if len(T) == len(C) and any(m == C for m in G.conjugates(T)[0]):
                known = True
                break
        if not known:
            C.kind = "torus"
            classes.append((C, int(r)))
    out = []
    used = set()
    for kind, order, w in kinds:
        match = [i for i, (T, _) in enumerate(classes) if len(T) == order and i not in used]
        if match:
            i = match[0]
            used.add(i)
            T, r = classes[i]
            members, _ = G.conjugates(T)
            out.append(TorusClass(kind, order, w, T, members, r, len(members)))
        elif order == len(G.center) and order > 0:
            Z = Subgroup(G, G.center.members, "torus")
            out.append(TorusClass(kind, order, w, Z, [Z], None, G.order // (order * w)))
        elif order == 1:
            T = Subgroup(G, np.array([G.identity]), "torus")
            out.append(TorusClass(kind, order, w, T, [T], None, G.order // w))
        elif not strict:
            out.append(TorusClass(kind, order, w, None, [], None, G.order // (order * w)))
        else:
            raise AssertionError(f"no {kind} torus of order {order} found in {G.name}")
    if strict and len(used) != len(classes):
        extra = [len(classes[i][0]) for i in range(len(classes)) if i not in used]
        raise AssertionError(f"unexpected abelian centralizers of orders {extra} in {G.name}")
    return out


def semisimple_regular_eigen(G: FiniteGroup, i: int) -> bool | None:
    """Distinct-eigenvalue test for 2x2 matrix families (None if inapplicable)."""
    rep = G.rep
    if not isinstance(rep, MatrixRep) or rep.n != 2:
        return None
    F = rep.field
    a, b, c, d = (int(v) for v in G.raw[i])
    tr = F.add(a, d)
    det = F.sub(F.mul(a, d), F.mul(b, c))
    # roots of x^2 - tr x + det in GF(q) or GF(q^2); distinct iff discriminant nonzero
    if F.p == 2:
        return tr != 0
    disc = F.sub(F.mul(tr, tr), F.mul(4 % F.p, det))
    return disc != 0


def iter_specs(families=FAMILIES, qmax: int = 9):
    for f in families:
        for q in range(2, qmax + 1):
            try:
                s = FamilySpec(f, q)
            except SpecError:
                continue
            if q <= ENUM_CAPS[s.family]:
                yield s

