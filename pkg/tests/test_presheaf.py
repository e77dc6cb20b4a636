import random

import pytest
from hypothesis import given, settings, strategies as st

from clopen.daseinisation import daseinise
from clopen.errors import ElementNotInSubalgebra, NotRestrictionClosed, ParentMismatch
from clopen.presheaf import (
    coheyting_minus,
    coheyting_not,
    enumerate_subobjects,
    heyting_implies,
    heyting_not,
    stone_iso,
    stone_iso_inv,
    stone_space,
    sub_join,
    sub_meet,
)
from helpers import FIXTURES, lattice, presheaf
from oracles import (
    coheyting_by_search,
    heyting_by_search,
    restriction_by_atoms,
    subobjects_by_filter,
)

COUNTS = {"mo:2": 17, "mo:3": 65, "boolean:2": 5, "boolean:3": 96, "q2-lines": 17}


def test_mo2_fibers(mo2):
    assert mo2.fiber_sizes() == [1, 2, 2]
    assert mo2.npoints == 5


@pytest.mark.parametrize("name", FIXTURES)
def test_functorial(name):
    assert presheaf(name).check_functoriality() is None


@pytest.mark.parametrize("name", FIXTURES)
def test_restrictions_follow_atoms(name):
    P = presheaf(name)
    L = P.lattice
    members = P.poset.members
    for (i, j), table in P.restrictions.items():
        for k, atom in enumerate(members[i].atoms):
            assert table[k] == restriction_by_atoms(L, members[i], atom, members[j])


@pytest.mark.parametrize("name", FIXTURES)
def test_enumeration_matches_filter(name):
    P = presheaf(name)
    got = [S.mask for S in enumerate_subobjects(P)]
    assert len(got) == COUNTS[name]
    assert sorted(got) == subobjects_by_filter(P)


def test_stone_points_are_homomorphisms():
    L = lattice("boolean:3")
    B = presheaf("boolean:3").poset.members[-1]
    for p in stone_space(B).points:
        for x in B.carrier:
            for y in B.carrier:
                assert p(L.meet(x, y)) == p(x) & p(y)
                assert p(L.join(x, y)) == p(x) | p(y)
            assert p(L.orth(x)) == 1 - p(x)
    for b in B.carrier:
        assert stone_iso_inv(B, stone_iso(B, b)) == b


def test_point_outside_subalgebra(mo2):
    B = mo2.poset.members[1]
    outside = next(x for x in range(len(mo2.lattice)) if x not in B.carrier)
    with pytest.raises(ElementNotInSubalgebra):
        stone_space(B).points[0](outside)
    with pytest.raises(ElementNotInSubalgebra):
        stone_iso(B, outside)


def test_unclosed_point_set_rejected(mo2):
    with pytest.raises(NotRestrictionClosed):
        mo2.subobject([[], [0], []])


def test_parent_mismatch(mo2):
    other = presheaf("boolean:2")
    with pytest.raises(ParentMismatch):
        mo2.top() & other.top()
    with pytest.raises(ParentMismatch):
        heyting_implies(mo2.top(), other.top())


def test_mo2_worked_values(mo2):
    L = mo2.lattice
    da, db = daseinise(mo2, L.idx("a")), daseinise(mo2, L.idx("b"))
    assert repr(da) == "Sub(1|10|11)"
    assert repr(da & db) == "Sub(1|10|10)"
    assert heyting_not(da).is_bottom()
    S = da & db
    assert repr(coheyting_not(S)) == "Sub(1|01|01)"
    # paraconsistency: the co-Heyting negation overlaps S
    assert repr(coheyting_not(S) & S) == "Sub(1|00|00)"
    assert coheyting_not(mo2.bottom()).is_top() and coheyting_not(mo2.top()).is_bottom()


@pytest.mark.parametrize("name", ["mo:2", "boolean:2", "q2-lines"])
def test_implications_match_search_exhaustively(name):
    P = presheaf(name)
    subs = P.subobjects
    for S in subs:
        for T in subs:
            assert heyting_implies(S, T) == heyting_by_search(S, T, subs)
            assert coheyting_minus(T, S) == coheyting_by_search(T, S, subs)


@pytest.mark.parametrize("name", ["mo:3", "boolean:3"])
def test_implications_match_search_sampled(name):
    P = presheaf(name)
    subs = P.subobjects
    rng = random.Random(name)
    for _ in range(300):
        S, T = rng.choice(subs), rng.choice(subs)
        assert heyting_implies(S, T) == heyting_by_search(S, T, subs)
        assert coheyting_minus(T, S) == coheyting_by_search(T, S, subs)


def _subs(name):
    subs = presheaf(name).subobjects
    return st.integers(0, len(subs) - 1).map(lambda i: subs[i])


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(["mo:2", "mo:3", "boolean:3"]).flatmap(
    lambda n: st.tuples(_subs(n), _subs(n), _subs(n))))
def test_bi_heyting_laws(triple):
    S, T, R = triple
    P = S.presheaf
    # residuation on both sides
    assert ((S & R) <= T) == (R <= heyting_implies(S, T))
    assert (T <= (S | R)) == (coheyting_minus(T, S) <= R)
    assert (S | coheyting_not(S)).is_top()
    assert (S & heyting_not(S)).is_bottom()
    assert S & (T | R) == (S & T) | (S & R)
    assert sub_meet(S, T, R) == S & T & R
    assert sub_join([S, T, R]) == S | T | R
    assert S & P.top() == S and S | P.bottom() == S
