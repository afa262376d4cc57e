"""Closed-form values of omega_c for the rank-one families, torus counts and Zsigmondy primes.

Each family's values are stored as a list of regimes.  A regime is a
predicate on (q, c) plus a polynomial in q with rational coefficients, so a
lookup never extrapolates outside the range the formula was stated for.
The printed small-q values are kept verbatim; ``DIRECT_VALUES`` records the
values obtained by direct computation where the two differ.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np
from sympy import divisors, factorint, isprime

from .galois import FieldError
from .groups import INF, format_bound
from .lie_families import FamilySpec, SpecError, canonical_family, prime_power

F = Fraction


class RegimeError(ValueError):
    """No stated regime covers (family, q, c)."""


@dataclass(frozen=True)
class OmegaFormula:
    family: str
    regime: str  # human-readable c and q condition
    applies: Callable[[int, float], bool]
    coeffs: tuple  # highest degree first; entries Fraction, or callables of delta
    uses_delta: bool = False

    def evaluate(self, q: int, delta: int = 1) -> int:
        total = F(0)
        for a in self.coeffs:
            a = a(delta) if callable(a) else F(a)
            total = total * q + a
        if total.denominator != 1:
            raise ArithmeticError(f"{self.family} {self.regime}: non-integral value {total} at q = {q}")
        return int(total)

    def polynomial(self) -> str:
        deg = len(self.coeffs) - 1
        terms = []
        for i, a in enumerate(self.coeffs):
            e = deg - i
            var = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
            if callable(a):
                terms.append(f"{var or '1'}/d")
                continue
            a = F(a)
            if a == 0:
                continue
            sign, a = ("-", -a) if a < 0 else ("", a)
            if not var:
                body = str(a)
            elif a == 1:
                body = var
            else:
                body = f"{a}*{var}" if a.denominator == 1 else f"({a})*{var}"
            terms.append(sign + body)
        return " + ".join(terms).replace("+ -", "- ") or "0"


def _const(v):
    return (v,)


def _inv_delta(d):
    return F(1, d)


def _ge(c, k):
    return c == INF or c >= k


FORMULAS: dict[str, list[OmegaFormula]] = {
    "PGL2": [
        OmegaFormula("PGL2", "q = 2", lambda q, c: q == 2, _const(4)),
        OmegaFormula("PGL2", "c > 1, q = 3", lambda q, c: q == 3 and _ge(c, 2), _const(7)),
        OmegaFormula("PGL2", "c = 1, q = 3", lambda q, c: q == 3 and c == 1, _const(10)),
        OmegaFormula("PGL2", "q >= 4", lambda q, c: q >= 4, (1, 1, 1)),
    ],
    "SL2": [
        OmegaFormula("SL2", "q = 3", lambda q, c: q == 3, _const(5)),
        OmegaFormula("SL2", "q = 5", lambda q, c: q == 5, _const(21)),
        OmegaFormula("SL2", "q > 5 odd", lambda q, c: q > 5 and q % 2, (1, 1, 1)),
    ],
    "SU3": [
        OmegaFormula("SU3", "c >= 2, q = 2", lambda q, c: q == 2 and _ge(c, 2), _const(31)),
        OmegaFormula("SU3", "c = 1, q = 2", lambda q, c: q == 2 and c == 1, _const(10)),
        OmegaFormula("SU3", "c >= 2, q = 3", lambda q, c: q == 3 and _ge(c, 2), _const(757)),
        OmegaFormula("SU3", "c >= 2, q > 3", lambda q, c: q > 3 and _ge(c, 2), (1, 1, 0, 1, 1, 0, 1)),
        OmegaFormula("SU3", "c = 1, q > 2", lambda q, c: q > 2 and c == 1,
                     (1, 1, _inv_delta, _inv_delta, 1, _inv_delta, _inv_delta), uses_delta=True),
    ],
    "PGU3": [
        OmegaFormula("PGU3", "c >= 2, q = 2", lambda q, c: q == 2 and _ge(c, 2), _const(49)),
        OmegaFormula("PGU3", "c = 1, q = 2", lambda q, c: q == 2 and c == 1, _const(71)),
        OmegaFormula("PGU3", "c >= 2, q > 2", lambda q, c: q > 2 and _ge(c, 2), (1, 1, 0, 1, 1, 0, 1)),
        OmegaFormula("PGU3", "c = 1, q > 2", lambda q, c: q > 2 and c == 1, (1, 1, 1, 1, 1, 1, 1)),
    ],
    "Sz": [
        OmegaFormula("Sz", "q = 2", lambda q, c: q == 2, _const(6)),
        OmegaFormula("Sz", "c >= 2, q > 2", lambda q, c: q > 2 and _ge(c, 2), (1, 0, 1, 0, 1)),
        OmegaFormula("Sz", "c = 1, q > 2", lambda q, c: q > 2 and c == 1, (1, 1, -1, 1, -1)),
    ],
    "Ree": [
        OmegaFormula("Ree", "c >= 2, q = 3", lambda q, c: q == 3 and _ge(c, 2), _const(316)),
        OmegaFormula("Ree", "c = 1, q = 3", lambda q, c: q == 3 and c == 1, _const(372)),
        OmegaFormula("Ree", "c >= 3, q > 3", lambda q, c: q > 3 and _ge(c, 3), (1, 1, 0, 1, 1, 0, 1)),
        OmegaFormula("Ree", "c = 2, q > 3", lambda q, c: q > 3 and c == 2,
                     (1, 1, F(1, 2), F(-1, 2), 1, F(1, 2), F(-1, 2))),
        OmegaFormula("Ree", "c = 1, q > 3", lambda q, c: q > 3 and c == 1,
                     (1, F(3, 2), F(-1, 2), 0, F(3, 2), F(-1, 2), 0)),
    ],
}

# (family, q, c-regime) -> value found by exhaustive computation, where it differs from
# the printed one.  c-regime is "1" or ">=2".
DIRECT_VALUES = {
    ("SL2", 3, "1"): 7,
    ("SL2", 5, "1"): 31,
    ("SU3", 2, "1"): 31,
    ("SU3", 2, ">=2"): 10,
}


@dataclass
class FormulaValue:
    family: str
    q: int
    c: float | int
    value: int
    regime: str
    polynomial: str
    routed_from: str | None = None
    direct_value: int | None = None  # set when exhaustive computation disagrees

    def to_dict(self) -> dict:
        d = {"schema": "nilcover.omega/1", "family": self.family, "q": self.q, "c": format_bound(self.c),
             "value": self.value, "method": "formula", "regime": self.regime, "polynomial": self.polynomial,
             "certificate_sizes": {}}
        if self.routed_from:
            d["routed_from"] = self.routed_from
        if self.direct_value is not None:
            d["direct_value"] = self.direct_value
        return d


def _family_key(family: str) -> str:
    fam = canonical_family(family) if family not in ("Ree", "Ree3Full", "ReeSylowP") else "Ree"
    if fam in ("Ree3Full", "ReeSylowP"):
        fam = "Ree"
    return fam


def omega_lookup(family: str, q: int, c) -> FormulaValue:
    """Regime, polynomial and value of omega_c for (family, q)."""
    if c != INF and (int(c) != c or c < 1):
        raise ValueError("c must be a positive integer or inf")
    fam = _family_key(family)
    routed = None
    if fam == "SL2" and q % 2 == 0:
        fam, routed = "PGL2", "SL2"  # SL2(2^a) = PGL2(2^a)
    if fam == "PGU3" and (q + 1) % 3:
        fam, routed = "SU3", "PGU3"  # PGU3 = PSU3 = SU3 when 3 does not divide q + 1
    if fam not in FORMULAS:
        raise RegimeError(f"no closed form for family {family}")
    delta = _validate(fam, q)
    hits = [f for f in FORMULAS[fam] if f.applies(q, c)]
    if len(hits) != 1:
        raise RegimeError(f"{fam}({q}), c = {format_bound(c)}: {len(hits)} regimes apply")
    f = hits[0]
    regime_c = "1" if c == 1 else ">=2"
    direct = DIRECT_VALUES.get((fam, q, regime_c))
    return FormulaValue(fam, q, c, f.evaluate(q, delta), f.regime, f.polynomial(), routed, direct)


def omega_formula(family: str, q: int, c) -> int:
    return omega_lookup(family, q, c).value


def _validate(fam: str, q: int) -> int:
    try:
        p, a = prime_power(q)
    except FieldError:
        raise RegimeError(f"q = {q} is not a prime power") from None
    if fam == "Sz" and (p != 2 or a % 2 == 0):
        raise RegimeError("Suzuki groups need q = 2^(2m+1)")
    if fam == "Ree" and (p != 3 or a % 2 == 0):
        raise RegimeError("Ree groups need q = 3^(2m+1)")
    if fam == "SL2" and q % 2 == 0:
        raise RegimeError("SL2 with even q is PGL2")
    return math.gcd(3, q + 1) if fam == "SU3" else 1


def regimes(family: str) -> list[OmegaFormula]:
    return list(FORMULAS[_family_key(family)])


# -- root systems and Steinberg counts ------------------------------------------------

@dataclass(frozen=True)
class RootSystemRow:
    label: str
    phi: str  # |Phi| as a function of the rank n
    weyl: str
    isometry: str
    alpha: str
    restriction: str

    def roots(self, n: int) -> int:
        return _ROOTS[self.label[0]](n)

    def weyl_order(self, n: int) -> int:
        return _WEYL[self.label[0]](n)


_ROOTS = {"A": lambda n: n * (n + 1), "B": lambda n: 2 * n * n, "C": lambda n: 2 * n * n,
          "D": lambda n: 2 * n * (n - 1)}
_WEYL = {"A": lambda n: math.factorial(n + 1), "B": lambda n: 2**n * math.factorial(n),
         "C": lambda n: 2**n * math.factorial(n), "D": lambda n: 2 ** (n - 1) * math.factorial(n)}

# Classical families.  The A row is stored as n(n+1) roots and (n+1)! Weyl elements,
# which is what rank n gives (|Phi(A_1)| = 2, |W(A_1)| = 2).
TABLE1 = [
    RootSystemRow("A_n", "n(n+1)", "(n+1)!", "GL_{n+1}(q) / GU_{n+1}(q)", "1 / 2", "unitary: n >= 2"),
    RootSystemRow("B_n", "2n^2", "2^n n!", "O_{2n+1}(q)", "1", "q odd, n >= 3"),
    RootSystemRow("C_n", "2n^2", "2^n n!", "Sp_{2n}(q)", "1", "n >= 2"),
    RootSystemRow("D_n", "2n(n-1)", "2^(n-1) n!", "O+_{2n}(q) / O-_{2n}(q)", "1", "n >= 4"),
]

# twisted rank-one types: (|Phi| of the untwisted system, exponent of q in the squared convention)
_TWISTED = {"2B2": (8, 4), "2G2": (12, 6)}


def root_count(type_: str) -> int:
    """|Phi| for labels such as "A1", "B3", "2A2", "2B2", "G2"."""
    t = type_.replace("_", "")
    if t in _TWISTED:
        return _TWISTED[t][0]
    if t == "G2":
        return 12
    if t.startswith("2"):
        t = t[1:]
    letter, n = t[0], int(t[1:])
    if letter not in _ROOTS:
        raise KeyError(f"unknown root system {type_}")
    return _ROOTS[letter](n)


def steinberg_count(type_: str, q: int) -> int:
    """Number of F-stable maximal tori, q^|Phi|.

    For 2B2 and 2G2 q is taken in the squared convention (q = 2^(2m+1) or
    3^(2m+1)), where the count is q^(|Phi|/2).
    """
    t = type_.replace("_", "")
    if t in _TWISTED:
        return q ** _TWISTED[t][1]
    return q ** root_count(type_)


# -- Zsigmondy primes -----------------------------------------------------------------

def _primitive_part(x: int, n: int) -> int:
    """Phi_n(x) with every prime dividing n removed; its primes are exactly the ppds."""
    num, den = 1, 1
    for d in divisors(n):
        mu = _mobius(n // d)
        if mu == 1:
            num *= x**d - 1
        elif mu == -1:
            den *= x**d - 1
    m = num // den
    g = math.gcd(m, n)
    while g > 1:
        m //= g
        g = math.gcd(m, n)
    return m


@lru_cache(maxsize=None)
def primitive_prime_divisors(x: int, n: int) -> tuple[int, ...]:
    m = _primitive_part(x, n)
    if m == 1:
        return ()
    return tuple(sorted(factorint(m)))


_TRIAL_LIMIT = 1 << 22


@lru_cache(maxsize=1)
def _trial_primes() -> np.ndarray:
    sieve = np.ones(_TRIAL_LIMIT, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(_TRIAL_LIMIT**0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = False
    return np.flatnonzero(sieve).astype(np.int64)


@lru_cache(maxsize=None)
def _primes_1_mod(n: int) -> np.ndarray:
    P = _trial_primes()
    return P[P % n == 1]


def _residues(m: int, R: np.ndarray) -> np.ndarray:
    """m mod R for a Python int m, limb by limb so int64 never overflows."""
    limbs = []
    while m:
        limbs.append(m & 0xFFFFF)
        m >>= 20
    acc = np.zeros(len(R), dtype=np.int64)
    for d in reversed(limbs):
        acc = ((acc << 20) + d) % R
    return acc


def _mobius(n: int) -> int:
    f = factorint(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def _least_ppd(x: int, n: int, above: int = 0) -> int | None:
    m = _primitive_part(x, n)
    if m == 1:
        return None
    if isprime(m):
        return m if m > above else None
    # every ppd r has x of order n mod r, so r = 1 (mod n)
    R = _primes_1_mod(n)
    hits = R[_residues(m, R) == 0]
    for r in hits.tolist():
        if r > above:
            return r
        while m % r == 0:
            m //= r
    if m == 1:
        return None
    if isprime(m):
        return m if m > above else None
    bigger = [r for r in factorint(m) if r > above]
    return min(bigger) if bigger else None


def ppd_exists(x: int, n: int) -> bool:
    """Whether x^n - 1 has a primitive prime divisor (no factoring needed)."""
    if x < 2 or n < 2:
        raise ValueError("need x > 1 and n >= 2")
    return _primitive_part(x, n) > 1


def zsigmondy(x: int, n: int) -> int | None:
    """Least primitive prime divisor of x^n - 1, None when there is none."""
    if x < 2 or n < 2:
        raise ValueError("need x > 1 and n >= 2")
    return _least_ppd(x, n)


def is_primitive_prime_divisor(r: int, x: int, n: int) -> bool:
    if not isprime(r) or pow(x, n, r) != 1:
        return False
    return all(pow(x, k, r) != 1 for k in range(1, n))


def zsigmondy_exception(x: int, n: int) -> bool:
    """Whether (x, n) is one of the known exceptions: (2, 6) or n = 2 with x + 1 a power of 2."""
    if (x, n) == (2, 6):
        return True
    return n == 2 and (x + 1) & x == 0


def fermat_ppd(p: int, a: int, n: int) -> int | None:
    """Least primitive prime divisor r of q^n - 1 (q = p^a) with r > a n.

    Returns None when q^n - 1 has no primitive prime divisor, and also when
    every primitive prime divisor is at most a n; the latter happens only for
    q^n = 64 with q = 8.
    """
    if not isprime(p) or a < 1 or n < 2:
        raise ValueError("need p prime, a >= 1, n >= 2")
    q = p**a
    return _least_ppd(q, n, above=a * n)


def classical_ppd(type_: str, d: int, q: int) -> int | None:
    """The prime t of the classical distinguished-torus lemma, for a group of dimension d.

    A, C, 2D and 2A with d odd use q^d - 1; 2A with d even and B use q^(d-1) - 1;
    D uses q^(d-2) - 1.
    """
    return zsigmondy(q, classical_exponent(type_, d))


def classical_exponent(type_: str, d: int) -> int:
    t = type_.replace("_", "").rstrip("n").upper()
    if t in ("A", "C", "2D"):
        return d
    if t == "2A":
        return d if d % 2 else d - 1
    if t == "B":
        return d - 1
    if t == "D":
        return d - 2
    raise KeyError(f"unknown classical type {type_}")


def family_q_range(family: str, qmax: int):
    """Values of q <= qmax at which the family's formulas are defined."""
    fam = _family_key(family)
    for q in range(2, qmax + 1):
        try:
            _validate(fam, q)
        except RegimeError:
            continue
        yield q


__all__ = [
    "DIRECT_VALUES", "FORMULAS", "TABLE1", "FormulaValue", "OmegaFormula", "RegimeError", "RootSystemRow",
    "classical_exponent", "classical_ppd", "family_q_range", "fermat_ppd", "is_primitive_prime_divisor",
    "omega_formula", "omega_lookup", "ppd_exists", "primitive_prime_divisors", "regimes", "root_count", "steinberg_count",
    "zsigmondy", "zsigmondy_exception",
]
