import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from sympy import factorint, isprime

from nilcover import closed_forms as cf
from nilcover.closed_forms import (DIRECT_VALUES, RegimeError, classical_exponent, classical_ppd, fermat_ppd,
                                   is_primitive_prime_divisor, omega_formula, omega_lookup, ppd_exists,
                                   primitive_prime_divisors, regimes, root_count, steinberg_count, zsigmondy,
                                   zsigmondy_exception)
from nilcover.groups import INF


def _ppds_bruteforce(x, n):
    return sorted(r for r in factorint(x**n - 1) if all(pow(x, k, r) != 1 for k in range(1, n)))


@given(st.integers(2, 60), st.integers(2, 24))
def test_ppds_match_factorization(x, n):
    want = _ppds_bruteforce(x, n)
    assert list(primitive_prime_divisors(x, n)) == want
    assert ppd_exists(x, n) == bool(want)
    assert zsigmondy(x, n) == (want[0] if want else None)
    assert zsigmondy_exception(x, n) == (not want)
    for r in want:
        assert is_primitive_prime_divisor(r, x, n)
        assert r % n == 1


def test_zsigmondy_values():
    assert zsigmondy(2, 4) == 5
    assert zsigmondy(2, 6) is None
    assert zsigmondy(3, 2) is None and zsigmondy(4, 2) == 5
    assert zsigmondy(10, 11) == 21649
    with pytest.raises(ValueError):
        zsigmondy(2, 1)


def test_fermat_ppd():
    assert fermat_ppd(2, 2, 3) == 7
    assert fermat_ppd(2, 3, 2) is None  # q^n = 64: 3 is the only ppd and 3 <= 6
    for p, a, n in [(2, 1, 5), (3, 2, 4), (5, 1, 3), (7, 1, 6), (2, 4, 3)]:
        r = fermat_ppd(p, a, n)
        assert r is not None and r > a * n and is_primitive_prime_divisor(r, p**a, n)
        assert all(not is_primitive_prime_divisor(s, p**a, n) for s in range(a * n + 1, r) if isprime(s))


def test_classical_ppd():
    assert classical_exponent("C", 4) == 4 and classical_exponent("B", 7) == 6
    assert classical_exponent("D", 8) == 6 and classical_exponent("2A", 4) == 3
    assert classical_exponent("2A", 5) == 5 and classical_exponent("2D", 6) == 6
    assert classical_ppd("C", 4, 3) == 5
    assert classical_ppd("B", 7, 3) == 7
    assert classical_ppd("D", 8, 2) is None
    with pytest.raises(KeyError):
        classical_exponent("E", 6)


def test_root_data():
    assert root_count("A1") == 2 and root_count("A2") == 6 and root_count("2A2") == 6
    assert root_count("B2") == 8 and root_count("G2") == 12 and root_count("D4") == 24
    for row in cf.TABLE1:
        for n in (1, 2, 3, 4):
            assert row.roots(n) == root_count(f"{row.label[0]}{n}")
    assert [row.weyl_order(2) for row in cf.TABLE1] == [6, 8, 8, 4]
    assert steinberg_count("A1", 7) == 49
    assert steinberg_count("2B2", 8) == 8**4 and steinberg_count("2G2", 27) == 27**6


@pytest.mark.parametrize("family,q,c,value", [
    ("PGL2", 2, 1, 4), ("PGL2", 3, 1, 10), ("PGL2", 3, 2, 7), ("PGL2", 4, INF, 21), ("PGL2", 9, 1, 91),
    ("SL2", 7, 1, 57), ("SL2", 8, 3, 73), ("Sz", 8, 1, 4551), ("Sz", 8, 2, 4161), ("Sz", 2, 1, 6),
    ("Sz", 32, 1, 32**4 + 32**3 - 32**2 + 32 - 1), ("SU3", 3, 2, 757), ("SU3", 3, 1, 1093),
    ("SU3", 4, 2, 5201), ("SU3", 5, 1, 19027), ("PGU3", 5, 1, 19531), ("PGU3", 2, 1, 71), ("PGU3", 2, 2, 49),
    ("Ree", 3, 1, 372), ("Ree", 3, INF, 316), ("Ree", 27, 1, 408679209), ("Ree", 27, 2, 402026017),
    ("Ree", 27, 3, 401789809), ("Ree3Full", 27, INF, 401789809),
])
def test_formula_values(family, q, c, value):
    assert omega_formula(family, q, c) == value


def test_su3_delta_polynomial():
    # delta = 3 exactly when 3 | q + 1; the value stays integral
    for q in (2, 5, 8, 11, 17):
        d = math.gcd(3, q + 1)
        want = q**6 + q**5 + q**2 + Fraction(q**4 + q**3 + q + 1, d)
        if q > 2:
            assert omega_formula("SU3", q, 1) == want


def test_routing_and_regimes():
    v = omega_lookup("SL2", 8, 1)
    assert v.routed_from == "SL2" and v.family == "PGL2" and v.value == 73
    v = omega_lookup("PGU3", 4, 1)
    assert v.routed_from == "PGU3" and v.value == omega_formula("SU3", 4, 1)
    assert omega_lookup("PGU3", 5, 1).routed_from is None
    for bad in (("Sz", 4, 1), ("Ree", 9, 1), ("PGL2", 6, 1), ("GU3", 3, 1)):
        with pytest.raises(RegimeError):
            omega_formula(*bad)
    with pytest.raises(ValueError):
        omega_formula("PGL2", 5, 0)
    assert list(cf.family_q_range("Sz", 200)) == [2, 8, 32, 128]
    assert omega_lookup("Sz", 8, 2).polynomial == "q^4 + q^2 + 1"


def test_exactly_one_regime_everywhere():
    for fam in ("PGL2", "SL2", "SU3", "PGU3", "Sz", "Ree"):
        for q in cf.family_q_range(fam, 300):
            for c in (1, 2, 3, 4, INF):
                hits = [f for f in regimes(fam) if f.applies(q, c)]
                assert len(hits) == 1, (fam, q, c)


def test_monotone_in_c():
    for fam in ("PGL2", "SL2", "SU3", "PGU3", "Sz", "Ree"):
        for q in cf.family_q_range(fam, 300):
            if (fam, q) == ("SU3", 2):
                continue  # the printed small-q values are swapped; see DIRECT_VALUES
            vals = [omega_formula(fam, q, c) for c in (1, 2, 3, INF)]
            assert vals == sorted(vals, reverse=True), (fam, q, vals)


def test_direct_values_recorded():
    assert DIRECT_VALUES[("SU3", 2, "1")] == 31
    assert omega_lookup("SL2", 5, 1).direct_value == 31
    assert omega_lookup("SL2", 5, 2).direct_value is None
    assert "direct_value" in omega_lookup("SU3", 2, INF).to_dict()
