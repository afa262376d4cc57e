"""Vectorized element representations.

A representation stores a batch of group elements as an int32 array of shape
(N, width) and knows how to multiply two batches row by row, canonicalize
rows, and pack each row into an int64 code.  Codes are unique per element, so
an enumerated group is just a sorted code array plus the matching raw rows.
"""

from __future__ import annotations

import numpy as np

from .galois import FiniteField, make_field

TAG_MATRIX = 1
TAG_PROJECTIVE = 2
TAG_REE_TRIPLE = 3
TAG_SEMILINEAR = 4


class Representation:
    tag: int
    width: int
    field: FiniteField

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def canon(self, a: np.ndarray) -> np.ndarray:
        return a

    def identity(self) -> np.ndarray:
        raise NotImplementedError

    def encode(self, a: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64).reshape(-1, self.width)
        base = self.field.q
        code = np.zeros(len(a), dtype=np.int64)
        for j in range(self.width - 1, -1, -1):
            code = code * base + a[:, j]
        return code

    def to_bytes(self, row: np.ndarray) -> bytes:
        """Variant-tagged little-endian byte encoding of one element."""
        return bytes([self.tag]) + np.asarray(row, dtype="<u4").tobytes()

    def describe(self, row: np.ndarray) -> str:
        return str(list(int(v) for v in row))

    def header(self) -> dict:
        return {"tag": self.tag, "width": self.width, "p": self.field.p, "k": self.field.k}


def _matmul(tab, n: int, p: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    A = a.reshape(-1, n, n)
    B = b.reshape(-1, n, n)
    if tab is None:  # prime field: integer matmul then reduce
        C = np.matmul(A.astype(np.int64), B.astype(np.int64)) % p
        return C.reshape(len(C), n * n).astype(np.int32)
    prods = tab.mul[A[:, :, :, None], B[:, None, :, :]]  # (N, i, k, j)
    if p == 2:
        C = np.bitwise_xor.reduce(prods, axis=2)
    else:
        C = prods[:, :, 0, :]
        for k in range(1, n):
            C = tab.add[C, prods[:, :, k, :]]
    return C.reshape(len(C), n * n).astype(np.int32)


class MatrixRep(Representation):
    """n x n matrices over a field; projective=True works modulo scalars."""

    def __init__(self, field: FiniteField, n: int, projective: bool = False):
        self.field = field
        self.n = n
        self.width = n * n
        self.projective = projective
        self.tag = TAG_PROJECTIVE if projective else TAG_MATRIX
        self._tab = None if field.k == 1 else field.tables
        if field.q ** self.width >= 2**63:
            raise ValueError("matrix codes would overflow int64")

    def header(self) -> dict:
        return {**super().header(), "n": self.n, "projective": self.projective}

    def mul(self, a, b):
        C = _matmul(self._tab, self.n, self.field.p, np.asarray(a), np.asarray(b))
        return self.canon(C) if self.projective else C

    def canon(self, a):
        """Scale each row so its first nonzero entry (row-major) is 1."""
        a = np.asarray(a, dtype=np.int32).reshape(-1, self.width)
        if not self.projective:
            return a
        first = np.argmax(a != 0, axis=1)
        lead = a[np.arange(len(a)), first]
        s = self.field.tables.inv[lead] if self._tab is not None else _prime_inv(lead, self.field.p)
        return self.scale(a, s)

    def scale(self, a, s):
        a = np.asarray(a, dtype=np.int32).reshape(-1, self.width)
        s = np.asarray(s)
        if self._tab is None:
            return (a.astype(np.int64) * s.reshape(-1, 1) % self.field.p).astype(np.int32)
        return self._tab.mul[np.broadcast_to(s.reshape(-1, 1), a.shape), a].astype(np.int32)

    def identity(self):
        return self.canon(np.eye(self.n, dtype=np.int32).reshape(1, -1))[0]

    def det(self, a) -> np.ndarray:
        a = np.asarray(a).reshape(-1, self.n, self.n)
        F = self.field
        if self._tab is None:
            return (np.round(np.linalg.det(a.astype(np.float64))).astype(np.int64) % F.p).astype(np.int32)
        tab = self._tab
        if self.n == 2:
            return tab.add[tab.mul[a[:, 0, 0], a[:, 1, 1]], tab.neg[tab.mul[a[:, 0, 1], a[:, 1, 0]]]]
        if self.n == 3:
            def m(i, j, k, l):
                return tab.add[tab.mul[a[:, i, k], a[:, j, l]], tab.neg[tab.mul[a[:, i, l], a[:, j, k]]]]
            t0 = tab.mul[a[:, 0, 0], m(1, 2, 1, 2)]
            t1 = tab.neg[tab.mul[a[:, 0, 1], m(1, 2, 0, 2)]]
            t2 = tab.mul[a[:, 0, 2], m(1, 2, 0, 1)]
            return tab.add[tab.add[t0, t1], t2]
        raise NotImplementedError("det only for n <= 3 over extension fields")

    def frob(self, a, e: int = 1) -> np.ndarray:
        """Entrywise x -> x^(p^e)."""
        if self._tab is None:
            return np.asarray(a, dtype=np.int32)
        return self._tab.frob_power(e)[np.asarray(a)].astype(np.int32)

    def transpose(self, a) -> np.ndarray:
        A = np.asarray(a).reshape(-1, self.n, self.n)
        return np.ascontiguousarray(A.transpose(0, 2, 1)).reshape(len(A), self.width)

    def describe(self, row) -> str:
        F = self.field
        rows = np.asarray(row).reshape(self.n, self.n)
        if F.k == 1:
            return str(rows.tolist())
        return str([[F.coeffs(int(v)) for v in r] for r in rows])


def _prime_inv(a: np.ndarray, p: int) -> np.ndarray:
    table = np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=np.int64)
    return table[np.asarray(a)]


class ReeTripleRep(Representation):
    """Triples (x, y, z) over GF(3^(2m+1)) with the Sylow 3 product of 2G2(q).

    (x1,y1,z1)(x2,y2,z2) = (x1+x2, y1+y2 + x1 x2^s - x1^s x2,
                            z1+z2 + y1 x2 + x1^s x2^2 + x1 x2^(s+1) - x1^2 x2^s),
    s = 3^(m+1).
    """

    tag = TAG_REE_TRIPLE
    width = 3

    def __init__(self, m: int):
        self.m = m
        self.field = make_field(3, 2 * m + 1)
        self.s = 3 ** (m + 1)
        F = self.field
        t = F.tables
        self._t = t
        idx = np.arange(F.q)
        self._pow_s = np.array([F.pow(int(v), self.s) for v in idx], dtype=np.int32)
        self._sq = t.mul[idx, idx]

    def header(self) -> dict:
        return {**super().header(), "m": self.m}

    def identity(self):
        return np.zeros(3, dtype=np.int32)

    def mul(self, a, b):
        a = np.asarray(a).reshape(-1, 3)
        b = np.asarray(b).reshape(-1, 3)
        add, mul, neg = self._t.add, self._t.mul, self._t.neg
        x1, y1, z1 = a[:, 0], a[:, 1], a[:, 2]
        x2, y2, z2 = b[:, 0], b[:, 1], b[:, 2]
        x1s, x2s = self._pow_s[x1], self._pow_s[x2]
        x = add[x1, x2]
        y = add[add[y1, y2], add[mul[x1, x2s], neg[mul[x1s, x2]]]]
        z = add[z1, z2]
        z = add[z, mul[y1, x2]]
        z = add[z, mul[x1s, self._sq[x2]]]
        z = add[z, mul[x1, mul[x2s, x2]]]
        z = add[z, neg[mul[self._sq[x1], x2s]]]
        return np.stack([x, y, z], axis=1).astype(np.int32)

    def describe(self, row) -> str:
        F = self.field
        return "(" + ", ".join(str(F.coeffs(int(v))) for v in row) + ")"


class SemilinearRep(Representation):
    """Pairs (A, e): A a projective 2x2 matrix over GF(8), e in Z/3.

    (A, e)(B, f) = (A . sigma^e(B), e + f), sigma = entrywise squaring.  This
    realizes PSL2(8).3 = PGammaL2(8).
    """

    tag = TAG_SEMILINEAR
    width = 5

    def __init__(self):
        self.field = make_field(2, 3)
        self.mat = MatrixRep(self.field, 2, projective=True)
        t = self.field.tables
        self._frobs = np.stack([t.frob_power(e) for e in range(3)]).astype(np.int32)

    def identity(self):
        return np.concatenate([self.mat.identity(), [0]]).astype(np.int32)

    def mul(self, a, b):
        a = np.asarray(a).reshape(-1, 5)
        b = np.asarray(b).reshape(-1, 5)
        e = a[:, 4]
        Bt = self._frobs[e[:, None], b[:, :4]]
        C = self.mat.mul(a[:, :4], Bt)
        return np.concatenate([C, ((e + b[:, 4]) % 3)[:, None]], axis=1).astype(np.int32)

    def describe(self, row) -> str:
        return f"({self.mat.describe(row[:4])}, frob^{int(row[4])})"


def rep_from_header(h: dict) -> Representation:
    """Rebuild a representation from ``Representation.header()``."""
    tag = h["tag"]
    if tag in (TAG_MATRIX, TAG_PROJECTIVE):
        return MatrixRep(make_field(h["p"], h["k"]), h["n"], projective=bool(h["projective"]))
    if tag == TAG_REE_TRIPLE:
        return ReeTripleRep(h["m"])
    if tag == TAG_SEMILINEAR:
        return SemilinearRep()
    raise ValueError(f"unknown representation tag {tag}")
