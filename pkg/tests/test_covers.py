import numpy as np
import pytest

from nilcover import closed_forms as cf
from nilcover.covers import (Cover, CoverError, neighbourhood_cover, pairwise_intersections, construction_cover,
                             partition_cover, partition_identity, ree_counts, ree_cover, ree_sylow_local,
                             subgroup_center, sylow_lower_bound_set, sz_abelian_refinement, unitary_cover,
                             upper_central_second, verify_2minimal)
from nilcover.groups import INF
from nilcover.lie_families import FamilySpec, SpecError
from nilcover.nilgraph import mis_omega


@pytest.mark.parametrize("family,q", [("PGL2", 4), ("PGL2", 5), ("PGL2", 7), ("PGL2", 8), ("PGL2", 9),
                                      ("SL2", 7), ("SL2", 9), ("SL2", 8)])
def test_partition_cover_certifies(groups, family, q):
    G = groups(family, q)
    cv = partition_cover(G)
    assert len(cv) == q * q + q + 1
    cert = verify_2minimal(cv)
    assert cert.ok, cert.reason
    Z = G.center
    assert partition_identity(cv, Z if len(Z) > 1 else None)
    # outside the center every element is in exactly one member
    assert pairwise_intersections(cv) == {1, len(cv)}


def test_suzuki_covers(groups):
    G = groups("Sz", 8)
    cv = partition_cover(G)
    assert len(cv) == 4161 and verify_2minimal(cv).ok
    ref = sz_abelian_refinement(G)
    assert len(ref) == 4551 and verify_2minimal(ref).ok
    assert ref.counts["H_i"] == 65 * 7
    with pytest.raises(SpecError):
        partition_cover(groups("Sz", 2))


def test_partition_cover_rejects_small_q(groups):
    for fam, q in (("PGL2", 3), ("SL2", 5), ("SU3", 2)):
        with pytest.raises(SpecError):
            partition_cover(groups(fam, q))
    assert construction_cover(groups("SL2", 5), FamilySpec("SL2", 5), 1) is None


def test_certificate_detects_broken_covers(groups):
    G = groups("PGL2", 5)
    cv = partition_cover(G)
    short = Cover(G, INF, cv.members[1:], cv.distinguished[1:])
    cert = verify_2minimal(short, search=False)
    assert not cert.ok and not cert.covering
    bad = Cover(G, INF, [G.whole] + cv.members[1:], [cv.distinguished[0]] + cv.distinguished[1:])
    assert not verify_2minimal(bad, search=False).nilpotent
    dup = Cover(G, INF, list(cv.members), [cv.distinguished[0]] * len(cv))
    assert not verify_2minimal(dup, search=False).two_minimal


def test_neighbourhood_cover_matches_mis(groups):
    for fam, q in (("SU3", 2), ("PGU3", 2), ("SL2", 3)):
        G = groups(fam, q)
        for c in (1, INF):
            res = mis_omega(G, c)
            cv = neighbourhood_cover(G, res.independent_set, c)
            assert verify_2minimal(cv, search=False).ok
            assert len(cv) == res.value


@pytest.mark.parametrize("family", ["SU3", "PGU3"])
@pytest.mark.parametrize("q", [4, 5, 7, 8, 9, 11, 16])
def test_unitary_counts_match_closed_forms(family, q):
    for c in (1, 2, INF):
        cv = unitary_cover(None, FamilySpec(family, q), c)
        assert cv.mode == "count"
        assert len(cv) == cf.omega_formula(family, q, c)


@pytest.mark.slow
def test_unitary_full_cover_su3_3(groups):
    G = groups("SU3", 3)
    cv = unitary_cover(G, G.spec, 1)
    assert len(cv) == 1093 and verify_2minimal(cv).ok
    cv2 = unitary_cover(G, G.spec, 2)
    cert = verify_2minimal(cv2)
    # the generic family covers but is not 2-minimal this small
    assert cert.covering and cert.nilpotent and not cert.two_minimal
    assert len(cv2) > 757


@pytest.mark.parametrize("q", [27, 243, 2187])
def test_ree_counts_match_closed_forms(q):
    spec = FamilySpec("ReeSylowP", q)
    for c in (1, 2, 3, INF):
        assert sum(ree_counts(spec, c).values()) == cf.omega_formula("Ree", q, c)


def test_ree_sylow_local_27(groups):
    P = groups("ReeSylowP", 27)
    rep = ree_sylow_local(P)
    assert rep.ok
    assert (rep.center_order, rep.z2_order) == (27, 729)
    assert rep.Pg_count == 13 and rep.Qh_count == 27 * 13
    assert len(subgroup_center(P, P.whole)) == 27
    assert len(upper_central_second(P, P.whole)) == 729
    cv = ree_cover(None, FamilySpec("ReeSylowP", 27), 2, local=P)
    assert len(cv) == 402026017


def test_ree_full_cover_q3(groups):
    G = groups("Ree3Full", 3)
    for c, expected in ((1, 372), (2, 316)):
        cv = ree_cover(G, G.spec, c)
        assert len(cv) == expected and verify_2minimal(cv, search=False).ok
    with pytest.raises(SpecError):
        ree_cover(None, FamilySpec("ReeSylowP", 3), 1, mode="count")


def test_sylow_lower_bound_set(groups):
    G = groups("SL2", 7)
    S = sylow_lower_bound_set(G, G.spec, [3])
    assert S.verified and len(S) == 36 and S.parts == {7: 8, 3: 28}
    with pytest.raises(SpecError):
        sylow_lower_bound_set(G, G.spec, [2])
    with pytest.raises(CoverError):
        verify_2minimal(Cover(None, 1, mode="count"))
