from itertools import product

import pytest

from clopen.daseinisation import (
    Quotient,
    class_of_element,
    class_star,
    class_to_subobject,
    daseinise,
    daseinise_at,
    element_of_class,
    star,
    star_implies,
    top_class_check,
    upper_adjoint,
    upper_adjoint_reference,
)
from clopen.presheaf import coheyting_not
from helpers import FIXTURES, presheaf
from oracles import daseinisation_by_points


def ids(P, *names):
    return [P.lattice.idx(n) for n in names]


def test_daseinise_at_mo2(mo2):
    L = mo2.lattice
    a, = ids(mo2, "a")
    block_a, block_b = mo2.poset.members[1], mo2.poset.members[2]
    assert a in block_a.carrier and b_not_in(a, block_b)
    assert daseinise_at(L, a, block_a) == a
    assert daseinise_at(L, a, block_b) == L.top
    for B in mo2.poset.members:
        assert daseinise_at(L, L.bottom, B) == L.bottom


def b_not_in(x, B):
    return x not in B.carrier


@pytest.mark.parametrize("name", FIXTURES)
def test_daseinisation_matches_point_oracle(name):
    P = presheaf(name)
    for a in range(len(P.lattice)):
        assert daseinise(P, a).mask == daseinisation_by_points(P, a)
    assert daseinise(P, P.lattice.top).is_top()
    assert daseinise(P, P.lattice.bottom).is_bottom()


@pytest.mark.parametrize("name", FIXTURES)
def test_kernel_adjoint_matches_defining_join(name):
    P = presheaf(name)
    for S in P.subobjects:
        assert upper_adjoint(S) == upper_adjoint_reference(S)


def test_mo2_adjoint_examples(mo2):
    a, b = ids(mo2, "a", "b")
    S = daseinise(mo2, a) & daseinise(mo2, b)
    assert upper_adjoint(S) == mo2.lattice.bottom
    assert upper_adjoint(mo2.bottom()) == mo2.lattice.bottom
    for x in range(len(mo2.lattice)):
        assert upper_adjoint(daseinise(mo2, x)) == x
    assert daseinise(mo2, mo2.lattice.join(a, b)) == daseinise(mo2, a) | daseinise(mo2, b)


def test_mo2_quotient(mo2):
    Q = Quotient(mo2)
    groups = Q.partition()
    assert len(Q) == 6 and len(groups) == 6
    assert sum(len(g) for g in groups.values()) == 17
    a, b = ids(mo2, "a", "b")
    fa, fb = class_of_element(Q, a), class_of_element(Q, b)
    assert Q.meet(fa, fb) == Q.class_of(daseinise(mo2, a) & daseinise(mo2, b))
    assert class_of_element(Q, mo2.lattice.bottom) == Q.class_of(mo2.bottom())
    assert class_of_element(Q, mo2.lattice.top) == Q.top_class


def test_class_lem_failure_witness_from_the_worked_example(mo2):
    Q = Quotient(mo2)
    a, b = ids(mo2, "a", "b")
    S = daseinise(mo2, a) & daseinise(mo2, b)
    joined = Q.join(Q.class_of(S), Q.class_of(coheyting_not(S)))
    assert joined == Q.bottom_class != Q.top_class


@pytest.mark.parametrize("name", FIXTURES)
def test_isomorphism_round_trips(name):
    P = presheaf(name)
    Q = Quotient(P)
    L = P.lattice
    for a in range(len(L)):
        assert element_of_class(class_of_element(Q, a)) == a
    for S in P.subobjects:
        c = Q.class_of(S)
        assert class_of_element(Q, element_of_class(c)) == c
    for a, b in product(range(len(L)), repeat=2):
        fa, fb = class_of_element(Q, a), class_of_element(Q, b)
        assert Q.meet(fa, fb) == class_of_element(Q, L.meet(a, b))
        assert Q.join(fa, fb) == class_of_element(Q, L.join(a, b)) == Q.join_transported(fa, fb)
        assert Q.leq(fa, fb) == L.leq(a, b)


@pytest.mark.parametrize("name", FIXTURES)
def test_class_section(name):
    P = presheaf(name)
    Q = Quotient(P)
    for S in P.subobjects:
        assert upper_adjoint(class_to_subobject(Q.class_of(S))) == upper_adjoint(S)
    bottom = class_of_element(Q, P.lattice.bottom)
    assert class_to_subobject(bottom).is_bottom()
    for c, d in product(Q.classes, repeat=2):
        assert class_to_subobject(Q.join(c, d)) == class_to_subobject(c) | class_to_subobject(d)
        if c != d:
            assert class_to_subobject(c) != class_to_subobject(d)


@pytest.mark.parametrize("name", FIXTURES)
def test_only_top_has_adjoint_one(name):
    P = presheaf(name)
    report = top_class_check(P)
    assert report["only_top"] and report["members"] == [P.top()]


def test_star_examples(mo2):
    L = mo2.lattice
    Q = Quotient(mo2)
    for x in range(len(L)):
        d = daseinise(mo2, x)
        assert star(d) == daseinise(mo2, L.orth(x))
        assert class_star(Q, class_of_element(Q, x)) == class_of_element(Q, L.orth(x))
    a, = ids(mo2, "a")
    da = daseinise(mo2, a)
    assert (da | star(da)).is_top()
    assert repr(da & star(da)) == "Sub(1|00|11)"
    for S in mo2.subobjects:
        assert star_implies(S, S).is_top()
        assert Q.join(Q.class_of(star(S)), Q.class_of(S)) == Q.top_class
