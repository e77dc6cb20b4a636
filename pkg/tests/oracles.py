"""Slow, independent reference implementations used only by the tests."""
from itertools import combinations, product

from clopen.presheaf import ClopenSubobject


def subalgebras_by_closure(L):
    """Carriers of every Boolean subalgebra, by checking every subset of L."""
    n = len(L)
    others = [x for x in range(n) if x not in (L.bottom, L.top)]
    found = set()
    for r in range(len(others) + 1):
        for extra in combinations(others, r):
            S = frozenset((L.bottom, L.top) + extra)
            if any(L.ortho[x] not in S for x in S):
                continue
            if any(L.meet(x, y) not in S or L.join(x, y) not in S for x in S for y in S):
                continue
            if L.is_distributive_on(sorted(S)) is None:
                found.add(S)
    return found


def restriction_by_atoms(L, B, atom, target):
    """The atom of ``target`` above ``atom``; it exists and is unique."""
    above = [y for y in target.atoms if L.leq(atom, y)]
    assert len(above) == 1
    return target.atoms.index(above[0])


def subobjects_by_filter(P):
    """Every point set closed under restriction, found by testing all 2^n sets."""
    L = P.lattice
    members = P.poset.members
    edges = []
    for i, B in enumerate(members):
        for k, atom in enumerate(B.atoms):
            for j in P.poset.below(i):
                t = restriction_by_atoms(L, B, atom, members[j])
                edges.append((P.offsets[i] + k, P.offsets[j] + t))
    masks = []
    for m in range(1 << P.npoints):
        if all(not (m >> a & 1) or m >> b & 1 for a, b in edges):
            masks.append(m)
    return masks


def heyting_by_search(S, T, subs):
    """Join of all R with S ^ R <= T."""
    m = 0
    for R in subs:
        if (S.mask & R.mask) & ~T.mask == 0:
            m |= R.mask
    return ClopenSubobject(S.presheaf, m)


def coheyting_by_search(T, S, subs):
    """Meet of all R with T <= S v R."""
    m = S.presheaf.top_mask
    for R in subs:
        if T.mask & ~(S.mask | R.mask) == 0:
            m &= R.mask
    return ClopenSubobject(S.presheaf, m)


def least_above(L, a, carrier):
    ups = [b for b in carrier if L.leq(a, b)]
    least = [b for b in ups if all(L.leq(b, c) for c in ups)]
    assert len(least) == 1
    return least[0]


def daseinisation_by_points(P, a):
    """Points whose atom lies below the least carrier element above ``a``."""
    L = P.lattice
    m = 0
    for i, B in enumerate(P.poset.members):
        d = least_above(L, a, B.carrier)
        for k, atom in enumerate(B.atoms):
            if L.leq(atom, d):
                m |= 1 << (P.offsets[i] + k)
    return m


def valuations(values, names):
    for combo in product(values, repeat=len(names)):
        yield dict(zip(names, combo))
