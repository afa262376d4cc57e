"""Arithmetic in GF(p^k).

Elements are packed integers: the coefficient vector (c_0, ..., c_{k-1}) of
c_0 + c_1 x + ... + c_{k-1} x^{k-1} is stored as sum(c_i * p**i).  Zero is 0
and one is 1 in every field, so encodings are canonical by construction.

The modulus is the lexicographically least monic irreducible polynomial of
degree k, comparing coefficient vectors low degree first.  Small fields also
carry dense numpy tables used by the vectorized group code.
"""

from __future__ import annotations

import itertools
from functools import cached_property, lru_cache

import numpy as np
from sympy import factorint, isprime

FIELD_ORDER_CAP = 2**31
TABLE_CAP = 1024  # dense add/mul tables only for q <= this


class FieldError(ValueError):
    pass


# -- polynomials over GF(p), coefficient lists low degree first ----------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm:
        f = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - f * mi) % p
        _trim(a)
    return a


def _poly_mulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_mod(out, m, p)


def _poly_powmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result = [1]
    base = _poly_mod(a, m, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, m, p)
        base = _poly_mulmod(base, base, m, p)
        e >>= 1
    return result


def _poly_sub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test for a monic polynomial f (low degree first) over GF(p)."""
    k = len(f) - 1
    if k < 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    if _poly_sub(_poly_powmod(x, p**k, f, p), x, p):
        return False
    for r in factorint(k):
        h = _poly_sub(_poly_powmod(x, p ** (k // r), f, p), x, p)
        if len(_poly_gcd(f, h, p)) != 1:
            return False
    return True


# -- the field ------------------------------------------------------------------

class FiniteField:
    """The field GF(p^k) with elements encoded as ints in [0, p^k)."""

    def __init__(self, p: int, k: int, modulus: tuple[int, ...]):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = modulus  # length k+1, monic, low degree first
        self.zero = 0
        self.one = 1

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    @property
    def order(self) -> int:
        return self.q

    # packing
    def coeffs(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def pack(self, coeffs) -> int:
        v = 0
        for c in reversed(list(coeffs)):
            v = v * self.p + (c % self.p)
        return v

    def element(self, a: int) -> "FieldElement":
        return FieldElement(self, a % self.q if self.k == 1 else a)

    def elements(self) -> range:
        return range(self.q)

    # arithmetic on packed ints
    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.k == 1:
            return (a + b) % self.p
        return self.pack(x + y for x, y in zip(self.coeffs(a), self.coeffs(b)))

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.k == 1:
            return (-a) % self.p
        return self.pack(-x for x in self.coeffs(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return a * b % self.p
        if self._has_logs:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._mul_poly(a, b)

    def _mul_poly(self, a: int, b: int) -> int:
        prod = _poly_mulmod(_trim(self.coeffs(a)), _trim(self.coeffs(b)), list(self.modulus), self.p)
        return self.pack(prod)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 1 if e == 0 else 0
        if self._has_logs:
            return self._exp[(self._log[a] * e) % (self.q - 1)]
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frobenius(self, a: int, e: int = 1) -> int:
        """a^(p^e)."""
        if e < 0:
            raise ValueError("frobenius exponent must be >= 0")
        e %= self.k
        return self.pow(a, self.p**e)

    def element_order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        n = self.q - 1
        for r, mult in factorint(n).items():
            for _ in range(mult):
                if self.pow(a, n // r) == 1:
                    n //= r
                else:
                    break
        return n

    def is_in_subfield(self, a: int, d: int) -> bool:
        """True iff a lies in GF(p^d) (d | k), i.e. a^(p^d) = a."""
        return self.frobenius(a, d) == a

    # log/exp tables (built for q <= 2^20)
    @cached_property
    def _has_logs(self) -> bool:
        if self.k == 1 or self.q > 2**20:
            return False
        self._build_logs()
        return True

    def _build_logs(self) -> None:
        g = self.primitive_element()
        exp = [0] * (self.q - 1)
        log = [0] * self.q
        x = 1
        for i in range(self.q - 1):
            exp[i] = x
            log[x] = i
            x = self._mul_poly(x, g)
        self._exp, self._log = exp, log

    @lru_cache(maxsize=None)
    def primitive_element(self) -> int:
        n = self.q - 1
        primes = list(factorint(n)) if n > 1 else []
        mul = self._mul_poly if self.k > 1 else (lambda a, b: a * b % self.p)

        def pw(a, e):
            r, b = 1, a
            while e:
                if e & 1:
                    r = mul(r, b)
                b = mul(b, b)
                e >>= 1
            return r

        for g in range(1, self.q):
            if all(pw(g, n // r) != 1 for r in primes):
                return g
        raise FieldError("no primitive element")  # unreachable for a field

    # vectorized tables
    @cached_property
    def tables(self) -> "FieldTables":
        if self.q > TABLE_CAP:
            raise FieldError(f"dense tables need q <= {TABLE_CAP}, got {self.q}")
        return FieldTables(self)


class FieldTables:
    """Dense numpy lookup tables for a small field."""

    def __init__(self, F: FiniteField):
        q = F.q
        idx = np.arange(q)
        self.add = np.array([[F.add(a, b) for b in range(q)] for a in range(q)], dtype=np.int32)
        self.mul = np.array([[F.mul(a, b) for b in range(q)] for a in range(q)], dtype=np.int32)
        self.neg = np.array([F.neg(a) for a in idx], dtype=np.int32)
        self.inv = np.array([0] + [F.inv(a) for a in range(1, q)], dtype=np.int32)
        self.frob = np.array([F.frobenius(a, 1) for a in idx], dtype=np.int32)

    def frob_power(self, e: int) -> np.ndarray:
        t = np.arange(len(self.frob))
        for _ in range(e):
            t = self.frob[t]
        return t


class FieldElement:
    """Convenience wrapper giving operator syntax over a FiniteField."""

    __slots__ = ("field", "value")

    def __init__(self, field: FiniteField, value: int):
        if not 0 <= value < field.q:
            raise FieldError(f"{value} is not an element encoding of {field!r}")
        self.field = field
        self.value = value

    def _v(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError("mixed fields")
            return other.value
        return self.field.pack([other]) if isinstance(other, int) else NotImplemented

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._v(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._v(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._v(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._v(other)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.pack([other])
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field, self.value))

    def __repr__(self) -> str:
        return f"{self.field!r}({self.field.coeffs(self.value)})"

    def frobenius(self, e: int = 1) -> "FieldElement":
        return FieldElement(self.field, self.field.frobenius(self.value, e))

    def order(self) -> int:
        return self.field.element_order(self.value)

    def encode(self) -> bytes:
        return self.value.to_bytes(4, "little")


@lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> FiniteField:
    """Build GF(p^k) with the lexicographically least monic irreducible modulus."""
    if not isprime(p):
        raise FieldError(f"{p} is not prime")
    if k < 1:
        raise FieldError("extension degree must be >= 1")
    if p**k > FIELD_ORDER_CAP:
        raise FieldError(f"field order {p}^{k} exceeds cap {FIELD_ORDER_CAP}")
    for low in itertools.product(range(p), repeat=k):
        f = list(low) + [1]
        if is_irreducible(f, p):
            return FiniteField(p, k, tuple(f))
    raise FieldError(f"no irreducible polynomial of degree {k} over GF({p})")  # unreachable


def field_of_order(q: int) -> FiniteField:
    f = factorint(q)
    if len(f) != 1:
        raise FieldError(f"{q} is not a prime power")
    (p, k), = f.items()
    return make_field(p, k)


def prime_power(q: int) -> tuple[int, int]:
    f = factorint(q)
    if len(f) != 1:
        raise FieldError(f"{q} is not a prime power")
    (p, k), = f.items()
    return p, k
