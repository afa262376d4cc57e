import numpy as np
import pytest
from hypothesis import given, strategies as st

from nilcover import closed_forms as cf
from nilcover.groups import dump_group
from nilcover.lie_families import (EnumerationCapExceeded, FamilySpec, SpecError, build, canonical_family,
                                   iter_specs, load, maximal_tori, ree_inverse, ree_mul, ree_mul_batch,
                                   semisimple_regular_eigen, torus_kinds)


@pytest.mark.parametrize("spec", [s for s in iter_specs(qmax=9) if s.expected_order() <= 20000],
                         ids=lambda s: s.label())
def test_build_orders(spec):
    G = build(spec)
    assert G.order == spec.expected_order()
    assert G.spec == spec


def test_spec_validation():
    assert canonical_family("suzuki") == "Sz"
    assert canonical_family("2G2") == "Ree3Full"
    assert FamilySpec("Sz", 32).m == 2
    assert FamilySpec("SU3", 5).delta == 3 and FamilySpec("SU3", 4).delta == 1
    for fam, q in (("Sz", 4), ("Sz", 3), ("Ree3Full", 27), ("ReeSylowP", 9), ("SL2", 6), ("Nope", 3)):
        with pytest.raises(SpecError):
            FamilySpec(fam, q)
    with pytest.raises(EnumerationCapExceeded):
        build(FamilySpec("PGL2", 16))
    with pytest.raises(EnumerationCapExceeded):
        build(FamilySpec("SU3", 4))


def test_load_restores_spec(tmp_path, groups):
    G = groups("Sz", 2)
    dump_group(G, tmp_path / "sz2.ncg")
    H = load(tmp_path / "sz2.ncg")
    assert H.spec == G.spec and H.order == 20


@pytest.mark.parametrize("family,q,type_", [
    ("PGL2", 4, "A1"), ("PGL2", 5, "A1"), ("PGL2", 7, "A1"), ("PGL2", 9, "A1"), ("SL2", 5, "A1"),
    ("PSL2", 7, "A1"), ("SU3", 2, "2A2"), ("SU3", 3, "2A2"), ("Sz", 2, "2B2"), ("Sz", 8, "2B2"),
])
def test_tori_total_is_steinberg_count(groups, family, q, type_):
    G = groups(family, q)
    tori = maximal_tori(G)
    assert [t.kind for t in tori] == [k for k, _, _ in torus_kinds(G.spec)]
    assert sum(t.count for t in tori) == cf.steinberg_count(type_, q)
    for t in tori:
        if not t.degenerate:
            assert t.representative.is_abelian() and len(t.representative) == t.order
            assert len(G.centralizer(t.regular)) == t.order


def test_pgu3_2_tori_degenerate(groups):
    G = groups("PGU3", 2)
    with pytest.raises(AssertionError):
        maximal_tori(G)
    tori = maximal_tori(G, strict=False)
    assert {t.kind for t in tori if t.missing} == {"T0", "T2"}


def test_eigen_regularity_matches_centralizers(groups):
    G = groups("SL2", 7)
    Z = set(G.center.members.tolist())
    for x in range(G.order):
        if G.orders[x] % 7:
            assert semisimple_regular_eigen(G, x) == (x not in Z)
    assert semisimple_regular_eigen(groups("Sz", 2), 1) is None


triples = st.tuples(st.integers(0, 26), st.integers(0, 26), st.integers(0, 26))


@given(triples, triples, triples)
def test_ree_mul_associative_q27(a, b, c):
    assert ree_mul(ree_mul(a, b, 1), c, 1) == ree_mul(a, ree_mul(b, c, 1), 1)


@given(triples)
def test_ree_inverse_q27(a):
    assert ree_mul(a, ree_inverse(a, 1), 1) == (0, 0, 0)
    assert ree_mul(ree_inverse(a, 1), a, 1) == (0, 0, 0)


def test_ree_inverse_brute_force_q3():
    elems = [(x, y, z) for x in range(3) for y in range(3) for z in range(3)]
    for a in elems:
        inv = [b for b in elems if ree_mul(a, b, 0) == (0, 0, 0)]
        assert inv == [ree_inverse(a, 0)]


def test_ree_batch_matches_scalar():
    rng = np.random.default_rng(3)
    a, b = rng.integers(0, 243, size=(2, 500, 3))
    out = ree_mul_batch(a, b, 2)
    for i in range(0, 500, 37):
        assert tuple(out[i]) == ree_mul(a[i], b[i], 2)


def test_ree_sylow_center(groups):
    P = groups("ReeSylowP", 27)
    Z = P.center
    assert len(Z) == 27
    # the center is the z-axis
    assert np.all(P.raw[Z.members][:, :2] == 0)
