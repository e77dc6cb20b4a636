"""Stone spaces, the spectral presheaf and the algebra of clopen subobjects.

A finite Stone space carries the discrete topology, so every subset of a
fiber is clopen and a clopen subobject is just a restriction-closed choice
of points. Subobjects are stored as one integer bitmask over all points of
the presheaf (fibers laid out in subalgebra order).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from . import kernels
from .errors import (
    ElementNotInSubalgebra,
    NotRestrictionClosed,
    ParentMismatch,
    SizeCapExceeded,
)
from .lattice import DEFAULT_SUBALGEBRA_CAP, enumerate_boolean_subalgebras

DEFAULT_SUBOBJECT_CAP = 2 ** 20


@dataclass(frozen=True)
class StonePoint:
    """A two-valued homomorphism on ``source``, identified by its atom."""

    source: object = field(repr=False)
    atom: int

    @property
    def values(self):
        L = self.source.parent
        return {b: int(L.leq(self.atom, b)) for b in sorted(self.source.carrier)}

    def __call__(self, b):
        if b not in self.source.carrier:
            raise ElementNotInSubalgebra(f"element {b} is not in the subalgebra", b)
        return int(self.source.parent.leq(self.atom, b))


@dataclass(frozen=True)
class StoneSpace:
    source: object = field(repr=False)
    points: tuple

    def __len__(self):
        return len(self.points)


def stone_space(B):
    """One point per atom of ``B``, in atom order."""
    return StoneSpace(B, tuple(StonePoint(B, x) for x in B.atoms))


def stone_iso(B, b):
    """The set of points of the Stone space of ``B`` sending ``b`` to 1."""
    if b not in B.carrier:
        raise ElementNotInSubalgebra(f"element {b} is not in the subalgebra", b)
    return frozenset(p for p in stone_space(B).points if p(b) == 1)


def stone_iso_inv(B, points):
    L = B.parent
    return L.join_all(p.atom for p in points)


def _restrict(point, target):
    """The point of ``target`` that agrees with ``point`` on the smaller carrier."""
    want = {b: v for b, v in point.values.items() if b in target.carrier}
    for j, q in enumerate(stone_space(target).points):
        if q.values == want:
            return j
    raise AssertionError("restriction of a homomorphism must be a homomorphism")


class SpectralPresheaf:
    """The presheaf B -> Stone space of B over the Boolean subalgebras of ``lattice``."""

    def __init__(self, lattice, poset=None, backend="auto", subobject_cap=None):
        self.lattice = lattice
        self.subobject_cap = subobject_cap or DEFAULT_SUBOBJECT_CAP
        self.poset = poset if poset is not None else enumerate_boolean_subalgebras(lattice)
        self.fibers = tuple(stone_space(B) for B in self.poset.members)
        offsets, total = [], 0
        for F in self.fibers:
            offsets.append(total)
            total += len(F)
        self.offsets = tuple(offsets)
        self.npoints = total
        self.top_mask = (1 << total) - 1
        self.points = tuple((i, k) for i, F in enumerate(self.fibers) for k in range(len(F)))

        restrictions = {}
        for i, B in enumerate(self.poset.members):
            for j in self.poset.below(i):
                target = self.poset.members[j]
                restrictions[i, j] = tuple(_restrict(p, target) for p in self.fibers[i].points)
        self.restrictions = restrictions

        down = []
        for i, F in enumerate(self.fibers):
            for k in range(len(F)):
                m = 0
                for j in self.poset.below(i):
                    m |= 1 << (self.offsets[j] + restrictions[i, j][k])
                down.append(m)
        self.down_masks = tuple(down)
        self.kernels = kernels.select(total, backend)
        self.compiled = self.kernels is not kernels._pykernels
        self.down = kernels.mask_array(down, self.compiled)

    def __repr__(self):
        return f"<SpectralPresheaf {self.lattice.name or ''} fibers={self.fiber_sizes()}>"

    def fiber_sizes(self):
        return [len(F) for F in self.fibers]

    def global_index(self, fiber, local):
        return self.offsets[fiber] + local

    def check_functoriality(self):
        """Return the first failing (B, B', B'') restriction triple, or None."""
        for i in range(len(self.fibers)):
            ident = self.restrictions[i, i]
            if ident != tuple(range(len(self.fibers[i]))):
                return (i, i, i)
            for j in self.poset.below(i):
                for k in self.poset.below(j):
                    direct = self.restrictions[i, k]
                    composite = tuple(self.restrictions[j, k][x] for x in self.restrictions[i, j])
                    if direct != composite:
                        return (i, j, k)
        return None

    # -- daseinisation tables, filled lazily to keep module boundaries -------

    @cached_property
    def delta_masks(self):
        from .daseinisation import _delta_mask

        return tuple(_delta_mask(self, a) for a in range(len(self.lattice)))

    @cached_property
    def tables(self):
        """Flat tables consumed by the kernels (see ``_pykernels``)."""
        L = self.lattice
        n = len(L)
        join = [L.join(a, b) for a in range(n) for b in range(n)]
        c = self.compiled
        return KernelTables(
            down=self.down,
            delta=kernels.mask_array(self.delta_masks, c),
            join=kernels.word_array(join, c),
            n=n,
            bottom=L.bottom,
            ortho=kernels.word_array(L.ortho, c),
            top=self.top_mask,
        )

    # -- subobjects ----------------------------------------------------------

    def is_closed(self, mask):
        m, i = mask, 0
        while m:
            if m & 1 and self.down_masks[i] & ~mask:
                return False
            m >>= 1
            i += 1
        return True

    def subobject(self, parts):
        """Build a subobject from per-fiber collections of local point indices."""
        if len(parts) != len(self.fibers):
            raise ValueError(f"expected {len(self.fibers)} fibers, got {len(parts)}")
        mask = 0
        for i, part in enumerate(parts):
            for k in part:
                if not 0 <= k < len(self.fibers[i]):
                    raise ValueError(f"fiber {i} has no point {k}")
                mask |= 1 << (self.offsets[i] + k)
        return self.from_mask(mask)

    def from_fiber_masks(self, masks):
        return self.subobject([[k for k in range(len(F)) if m >> k & 1]
                               for F, m in zip(self.fibers, masks)])

    def from_mask(self, mask):
        if mask & ~self.top_mask or not self.is_closed(mask):
            raise NotRestrictionClosed("point set is not closed under restriction", mask)
        return ClopenSubobject(self, mask)

    @cached_property
    def subobjects(self):
        """Every clopen subobject, subject to ``subobject_cap`` (cached)."""
        return enumerate_subobjects(self, cap=self.subobject_cap)

    def top(self):
        return ClopenSubobject(self, self.top_mask)

    def bottom(self):
        return ClopenSubobject(self, 0)


@dataclass(frozen=True)
class ClopenSubobject:
    presheaf: SpectralPresheaf = field(repr=False)
    mask: int

    @property
    def parts(self):
        P = self.presheaf
        return tuple(frozenset(k for k in range(len(F)) if self.mask >> (P.offsets[i] + k) & 1)
                     for i, F in enumerate(P.fibers))

    def fiber_masks(self):
        P = self.presheaf
        return [(self.mask >> P.offsets[i]) & ((1 << len(F)) - 1)
                for i, F in enumerate(P.fibers)]

    def is_top(self):
        return self.mask == self.presheaf.top_mask

    def is_bottom(self):
        return self.mask == 0

    def _same(self, other):
        if not isinstance(other, ClopenSubobject) or other.presheaf is not self.presheaf:
            raise ParentMismatch("subobjects live over different presheaves")
        return other

    def __le__(self, other):
        return not self.mask & ~self._same(other).mask

    def __lt__(self, other):
        return self <= other and self.mask != other.mask

    def __ge__(self, other):
        return self._same(other) <= self

    def __gt__(self, other):
        return self._same(other) < self

    def __and__(self, other):
        return sub_meet(self, other)

    def __or__(self, other):
        return sub_join(self, other)

    def __repr__(self):
        bits = "|".join(format(m, f"0{len(F)}b")[::-1] if len(F) else ""
                        for m, F in zip(self.fiber_masks(), self.presheaf.fibers))
        return f"Sub({bits})"


def spectral_presheaf(L, backend="auto", subalgebra_cap=DEFAULT_SUBALGEBRA_CAP):
    return SpectralPresheaf(L, enumerate_boolean_subalgebras(L, cap=subalgebra_cap), backend)


@dataclass(frozen=True)
class KernelTables:
    down: object
    delta: object
    join: object
    n: int
    bottom: int
    ortho: object
    top: int


def _parent(items):
    items = list(items)
    P = items[0].presheaf
    for S in items[1:]:
        if S.presheaf is not P:
            raise ParentMismatch("subobjects live over different presheaves")
    return P, items


def sub_meet(*subs):
    if len(subs) == 1 and not isinstance(subs[0], ClopenSubobject):
        subs = tuple(subs[0])
    P, items = _parent(subs)
    m = P.top_mask
    for S in items:
        m &= S.mask
    return ClopenSubobject(P, m)


def sub_join(*subs):
    if len(subs) == 1 and not isinstance(subs[0], ClopenSubobject):
        subs = tuple(subs[0])
    P, items = _parent(subs)
    m = 0
    for S in items:
        m |= S.mask
    return ClopenSubobject(P, m)


def sub_top(P):
    return P.top()


def sub_bottom(P):
    return P.bottom()


def heyting_implies(S, T):
    """Largest subobject R with S ^ R <= T, computed fiberwise."""
    P, _ = _parent((S, T))
    return ClopenSubobject(P, P.kernels.heyting_implies(S.mask, T.mask, P.down))


def heyting_not(S):
    return heyting_implies(S, S.presheaf.bottom())


def coheyting_minus(T, S):
    """Smallest subobject R with T <= S v R: the restriction closure of T minus S."""
    P, _ = _parent((T, S))
    return ClopenSubobject(P, P.kernels.coheyting_minus(T.mask, S.mask, P.down))


def coheyting_not(S):
    return coheyting_minus(S.presheaf.top(), S)


def enumerate_subobjects(P, cap=DEFAULT_SUBOBJECT_CAP):
    """All restriction-closed point sets, sorted by size then mask."""
    if 2 ** P.npoints > cap:
        raise SizeCapExceeded(
            f"2^{P.npoints} candidate point sets exceed the subobject cap {cap}", P.npoints)
    # larger subalgebras come later in the poset order, so walking points
    # backwards visits every point before any of its proper restrictions
    order = list(range(P.npoints - 1, -1, -1))
    down = P.down_masks
    found = []

    def walk(pos, mask):
        while pos < len(order) and mask >> order[pos] & 1:
            pos += 1
        if pos == len(order):
            found.append(mask)
            return
        p = order[pos]
        walk(pos + 1, mask)
        walk(pos + 1, mask | down[p])

    walk(0, 0)
    found.sort(key=lambda m: (bin(m).count("1"), m))
    return [ClopenSubobject(P, m) for m in found]
