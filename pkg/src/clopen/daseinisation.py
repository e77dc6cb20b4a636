"""Outer daseinisation, its upper adjoint, the quotient lattice and the star negation."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import ParentMismatch
from .presheaf import ClopenSubobject, enumerate_subobjects


def daseinise_at(L, a, B):
    """Least element of the subalgebra ``B`` lying above ``a``."""
    return L.meet_all(b for b in B.carrier if L.leq(a, b))


def _delta_mask(P, a):
    L = P.lattice
    m = 0
    for i, B in enumerate(P.poset.members):
        d = daseinise_at(L, a, B)
        for k, point in enumerate(P.fibers[i].points):
            if point(d) == 1:
                m |= 1 << (P.offsets[i] + k)
    return m


def daseinise(P, a):
    """The clopen subobject picking, over each B, the points true at δ_B(a)."""
    return ClopenSubobject(P, P.delta_masks[a])


def upper_adjoint(S):
    """Join of every lattice element whose daseinisation lies below ``S``."""
    P = S.presheaf
    t = P.tables
    return P.kernels.epsilon(S.mask, t.delta, t.join, t.n, t.bottom)


def upper_adjoint_reference(S):
    """Direct transcription of the defining join; slow, used as a cross-check."""
    P = S.presheaf
    L = P.lattice
    return L.join_all(a for a in range(len(L)) if daseinise(P, a) <= S)


def star(S):
    """Daseinisation of the orthocomplement of the upper adjoint of ``S``."""
    P = S.presheaf
    t = P.tables
    return ClopenSubobject(P, P.kernels.star(S.mask, t.delta, t.join, t.n, t.bottom, t.ortho))


def star_implies(S, T):
    """``S* v T``."""
    if S.presheaf is not T.presheaf:
        raise ParentMismatch("subobjects live over different presheaves")
    return star(S) | T


@dataclass(frozen=True)
class EquivalenceClass:
    """Subobjects sharing one upper-adjoint value, keyed by that value."""

    presheaf: object = field(repr=False)
    element: int
    representative: ClopenSubobject = field(compare=False, repr=False)

    def label(self):
        return self.presheaf.lattice.elements[self.element]


class Quotient:
    """Clopen subobjects modulo equal upper adjoints.

    Classes are built from the lattice (one per element, represented by its
    daseinisation). Meets are taken on representatives; joins are the meet
    of all common upper bounds.
    """

    def __init__(self, P):
        self.presheaf = P
        L = P.lattice
        self.classes = tuple(EquivalenceClass(P, a, daseinise(P, a)) for a in range(len(L)))

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def class_of(self, S):
        if S.presheaf is not self.presheaf:
            raise ParentMismatch("subobject belongs to another presheaf")
        return self.classes[upper_adjoint(S)]

    def _check(self, c):
        if c.presheaf is not self.presheaf:
            raise ParentMismatch("class belongs to another quotient")
        return c

    def meet(self, *cs):
        reps = [self._check(c).representative for c in cs]
        acc = self.presheaf.top()
        for r in reps:
            acc = acc & r
        return self.class_of(acc)

    def leq(self, c, d):
        return self.meet(c, d) == c

    def join(self, *cs):
        uppers = [u for u in self.classes if all(self.leq(c, u) for c in cs)]
        return self.meet(*uppers)

    def join_transported(self, *cs):
        L = self.presheaf.lattice
        return self.classes[L.join_all(self._check(c).element for c in cs)]

    @cached_property
    def top_class(self):
        return self.class_of(self.presheaf.top())

    @cached_property
    def bottom_class(self):
        return self.class_of(self.presheaf.bottom())

    def partition(self, subobjects=None):
        """Group enumerated subobjects by upper adjoint (cross-check mode)."""
        subs = enumerate_subobjects(self.presheaf) if subobjects is None else subobjects
        groups = {}
        for S in subs:
            groups.setdefault(upper_adjoint(S), []).append(S)
        return dict(sorted(groups.items()))


def e_quotient(P):
    return Quotient(P)


def class_of_element(Q, a):
    """The class of the daseinisation of ``a``; inverse of :func:`element_of_class`."""
    return Q.classes[a]


def element_of_class(c):
    return upper_adjoint(c.representative)


def class_to_subobject(c):
    """Canonical subobject of a class: daseinisation of its upper adjoint."""
    return daseinise(c.presheaf, upper_adjoint(c.representative))


def class_star(Q, c):
    return Q.class_of(star(Q._check(c).representative))


def top_class_check(P, subobjects=None):
    """Every subobject whose upper adjoint is 1; should be exactly ``[top]``."""
    subs = enumerate_subobjects(P) if subobjects is None else subobjects
    top = P.lattice.top
    witnesses = [S for S in subs if upper_adjoint(S) == top]
    return {"members": witnesses, "only_top": witnesses == [P.top()]}
