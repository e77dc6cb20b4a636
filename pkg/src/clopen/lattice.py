"""Finite bounded lattices, orthomodular lattices and their Boolean subalgebras.

Elements are opaque ids. Internally everything is addressed by the position
of the id in the input list, and all structure lives in explicit tables.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

from .errors import (
    LatticeError,
    NotALattice,
    NotAPoset,
    NotOrthomodular,
    OrthoLawViolation,
    SizeCapExceeded,
)

DEFAULT_LATTICE_CAP = 64
DEFAULT_SUBALGEBRA_CAP = 4096
MAX_BOOLEAN_ATOMS = 16


class Lattice:
    """A finite bounded lattice given by its order and meet/join tables."""

    def __init__(self, elements, leq, meet, join, bottom, top, name=None):
        self.elements = tuple(elements)
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.leq_table = leq
        self.meet_table = meet
        self.join_table = join
        self.bottom = bottom
        self.top = top
        self.name = name

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        label = self.name or "lattice"
        return f"<{type(self).__name__} {label} |L|={len(self)}>"

    def idx(self, element_id):
        try:
            return self.index[element_id]
        except KeyError:
            raise LatticeError(f"unknown element id {element_id!r}", element_id) from None

    def leq(self, a, b):
        return self.leq_table[a][b]

    def meet(self, a, b):
        return self.meet_table[a][b]

    def join(self, a, b):
        return self.join_table[a][b]

    def meet_all(self, items):
        acc = self.top
        for x in items:
            acc = self.meet_table[acc][x]
        return acc

    def join_all(self, items):
        acc = self.bottom
        for x in items:
            acc = self.join_table[acc][x]
        return acc

    def is_distributive_on(self, carrier):
        """Return the first triple of ``carrier`` that breaks distributivity, or None."""
        m, j = self.meet_table, self.join_table
        for x, y, z in product(carrier, repeat=3):
            if m[x][j[y][z]] != j[m[x][y]][m[x][z]]:
                return (x, y, z)
        return None


class OrthomodularLattice(Lattice):
    def __init__(self, elements, leq, meet, join, bottom, top, ortho, name=None):
        super().__init__(elements, leq, meet, join, bottom, top, name=name)
        self.ortho = tuple(ortho)

    @property
    def base(self):
        return Lattice(self.elements, self.leq_table, self.meet_table,
                       self.join_table, self.bottom, self.top, name=self.name)

    def orth(self, a):
        return self.ortho[a]

    def validate(self):
        _check_ortho_laws(self)
        _check_orthomodular(self)
        return self


def _closure(n, pairs):
    leq = [[i == j for j in range(n)] for i in range(n)]
    for a, b in pairs:
        leq[a][b] = True
    for k in range(n):
        row_k = leq[k]
        for i in range(n):
            if leq[i][k]:
                row_i = leq[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    return leq


def _bound_tables(n, leq, ids):
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            lower = [x for x in range(n) if leq[x][a] and leq[x][b]]
            glb = [x for x in lower if all(leq[y][x] for y in lower)]
            if len(glb) != 1:
                raise NotALattice(f"{ids[a]!r} and {ids[b]!r} have no greatest lower bound",
                                  (ids[a], ids[b]))
            upper = [x for x in range(n) if leq[a][x] and leq[b][x]]
            lub = [x for x in upper if all(leq[x][y] for y in upper)]
            if len(lub) != 1:
                raise NotALattice(f"{ids[a]!r} and {ids[b]!r} have no least upper bound",
                                  (ids[a], ids[b]))
            meet[a][b] = meet[b][a] = glb[0]
            join[a][b] = join[b][a] = lub[0]
    return meet, join


def build_lattice(elements, leq_pairs, ortho=None, name=None, cap=DEFAULT_LATTICE_CAP):
    """Validate a finite lattice given as ids and order pairs.

    ``leq_pairs`` may be any generating set of the order (e.g. the covering
    relation); its reflexive-transitive closure is taken before checking
    antisymmetry. ``ortho`` is a list of ``(x, y)`` pairs read symmetrically,
    or a dict ``x -> y``. When it is given the result is an
    :class:`OrthomodularLattice` whose orthocomplement and orthomodular laws
    have been verified; otherwise a plain :class:`Lattice`.
    """
    ids = list(elements)
    if len(set(ids)) != len(ids):
        dup = next(e for e in ids if ids.count(e) > 1)
        raise LatticeError(f"duplicate element id {dup!r}", dup)
    n = len(ids)
    if n == 0:
        raise LatticeError("a lattice needs at least one element")
    if n > cap:
        raise SizeCapExceeded(f"lattice has {n} elements, cap is {cap}", n)
    pos = {e: i for i, e in enumerate(ids)}

    def lookup(e):
        if e not in pos:
            raise LatticeError(f"order pair references unknown id {e!r}", e)
        return pos[e]

    pairs = [(lookup(a), lookup(b)) for a, b in leq_pairs]
    leq = _closure(n, pairs)
    for a in range(n):
        for b in range(a + 1, n):
            if leq[a][b] and leq[b][a]:
                raise NotAPoset(f"{ids[a]!r} <= {ids[b]!r} <= {ids[a]!r} breaks antisymmetry",
                                (ids[a], ids[b]))
    meet, join = _bound_tables(n, leq, ids)
    bottom = next(x for x in range(n) if all(leq[x]))
    top = next(x for x in range(n) if all(leq[y][x] for y in range(n)))
    leq_t = tuple(tuple(r) for r in leq)
    meet_t = tuple(tuple(r) for r in meet)
    join_t = tuple(tuple(r) for r in join)
    if ortho is None:
        return Lattice(ids, leq_t, meet_t, join_t, bottom, top, name=name)

    perp = [None] * n
    items = ortho.items() if isinstance(ortho, dict) else ortho
    for a, b in items:
        ia, ib = lookup(a), lookup(b)
        for x, y in ((ia, ib), (ib, ia)):
            if perp[x] is not None and perp[x] != y:
                raise OrthoLawViolation(
                    f"{ids[x]!r} is given two orthocomplements", ids[x])
            perp[x] = y
    missing = [ids[i] for i in range(n) if perp[i] is None]
    if missing:
        raise OrthoLawViolation(f"no orthocomplement for {missing[0]!r}", missing[0])
    oml = OrthomodularLattice(ids, leq_t, meet_t, join_t, bottom, top, perp, name=name)
    return oml.validate()


def _check_ortho_laws(L):
    ids, o = L.elements, L.ortho
    for a in range(len(L)):
        if L.join(a, o[a]) != L.top:
            raise OrthoLawViolation(f"{ids[a]!r} v {ids[a]!r}' != 1", ids[a])
        if L.meet(a, o[a]) != L.bottom:
            raise OrthoLawViolation(f"{ids[a]!r} ^ {ids[a]!r}' != 0", ids[a])
        if o[o[a]] != a:
            raise OrthoLawViolation(f"{ids[a]!r}'' != {ids[a]!r}", ids[a])
    for a in range(len(L)):
        for b in range(len(L)):
            if L.leq(a, b) and not L.leq(o[b], o[a]):
                raise OrthoLawViolation("orthocomplement is not antitone", (ids[a], ids[b]))
            if o[L.meet(a, b)] != L.join(o[a], o[b]):
                raise OrthoLawViolation("(a ^ b)' != a' v b'", (ids[a], ids[b]))
            if o[L.join(a, b)] != L.meet(o[a], o[b]):
                raise OrthoLawViolation("(a v b)' != a' ^ b'", (ids[a], ids[b]))


def orthomodular_witness(L):
    """First pair a <= b with b != a v (b ^ a'), or None."""
    for a in range(len(L)):
        for b in range(len(L)):
            if L.leq(a, b) and L.join(a, L.meet(b, L.ortho[a])) != b:
                return (a, b)
    return None


def _check_orthomodular(L):
    w = orthomodular_witness(L)
    if w is not None:
        a, b = (L.elements[i] for i in w)
        raise NotOrthomodular(f"{a!r} <= {b!r} but {b!r} != {a!r} v ({b!r} ^ {a!r}')", (a, b))


def _atom_name(i, n):
    if n <= 26:
        return chr(ord("a") + i)
    return f"x{i + 1}"


def make_boolean(n, cap=DEFAULT_LATTICE_CAP):
    """Power-set algebra on ``n`` atoms; element ids spell out their atoms."""
    if n < 1:
        raise ValueError("need at least one atom")
    size = 1 << n
    if n > MAX_BOOLEAN_ATOMS or size > cap:
        raise SizeCapExceeded(f"2^{n} = {size} elements exceeds the cap of {cap}", size)
    full = size - 1

    def label(m):
        if m == 0:
            return "0"
        if m == full:
            return "1"
        return "".join(_atom_name(i, n) for i in range(n) if m >> i & 1)

    ids = [label(m) for m in range(size)]
    leq = tuple(tuple(a & b == a for b in range(size)) for a in range(size))
    meet = tuple(tuple(a & b for b in range(size)) for a in range(size))
    join = tuple(tuple(a | b for b in range(size)) for a in range(size))
    ortho = [full ^ a for a in range(size)]
    return OrthomodularLattice(ids, leq, meet, join, 0, full, ortho, name=f"boolean:{n}")


def make_mo(n, cap=DEFAULT_LATTICE_CAP):
    """Horizontal sum MO_n of ``n`` four-element blocks glued at 0 and 1."""
    if n < 1:
        raise ValueError("need at least one block")
    if 2 * n + 2 > cap:
        raise SizeCapExceeded(f"MO{n} has {2 * n + 2} elements, cap is {cap}", 2 * n + 2)
    ids = ["0"]
    for i in range(n):
        a = _atom_name(i, n)
        ids += [a, a + "'"]
    ids.append("1")
    leq = [("0", x) for x in ids] + [(x, "1") for x in ids]
    ortho = [("0", "1")] + [(ids[1 + 2 * i], ids[2 + 2 * i]) for i in range(n)]
    return build_lattice(ids, leq, ortho=ortho, name=f"mo:{n}", cap=cap)


@dataclass(frozen=True)
class BooleanSubalgebra:
    """A Boolean subalgebra, stored by carrier and by its atoms."""

    carrier: frozenset
    atoms: tuple
    parent: OrthomodularLattice = field(compare=False, repr=False)

    def __len__(self):
        return len(self.carrier)

    def __contains__(self, x):
        return x in self.carrier

    def ids(self):
        return [self.parent.elements[i] for i in sorted(self.carrier)]

    def check(self):
        """Return a description of the first closure/distributivity failure, or None."""
        L = self.parent
        if L.bottom not in self.carrier or L.top not in self.carrier:
            return "missing 0 or 1"
        for x in self.carrier:
            if L.ortho[x] not in self.carrier:
                return f"not closed under ortho at {L.elements[x]!r}"
            for y in self.carrier:
                if L.meet(x, y) not in self.carrier or L.join(x, y) not in self.carrier:
                    return f"not closed at {(L.elements[x], L.elements[y])!r}"
        bad = L.is_distributive_on(sorted(self.carrier))
        if bad is not None:
            return f"distributivity fails at {tuple(L.elements[i] for i in bad)!r}"
        return None


@dataclass(frozen=True)
class SubalgebraPoset:
    members: tuple
    leq: tuple  # leq[i][j]: members[i] is a subset of members[j]

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def below(self, i):
        return [j for j in range(len(self.members)) if self.leq[j][i]]


def _orthogonal_partitions(L):
    """All sets of nonzero pairwise orthogonal elements joining to 1."""
    found = []
    candidates = [x for x in range(len(L)) if x != L.bottom]

    def extend(start, chosen, acc):
        if acc == L.top:
            found.append(tuple(chosen))
            return
        room = L.ortho[acc]
        for k in range(start, len(candidates)):
            x = candidates[k]
            if L.leq(x, room):
                chosen.append(x)
                extend(k + 1, chosen, L.join(acc, x))
                chosen.pop()

    extend(0, [], L.bottom)
    return found


def enumerate_boolean_subalgebras(L, cap=DEFAULT_SUBALGEBRA_CAP,
                                  lattice_cap=DEFAULT_LATTICE_CAP, include_trivial=True):
    """All Boolean subalgebras of ``L`` ordered by inclusion.

    A finite Boolean subalgebra is fixed by its atoms, which are nonzero,
    pairwise orthogonal and join to 1; conversely every such family spans
    one. Members are sorted by size, then by their sorted element positions.
    """
    if len(L) > lattice_cap:
        raise SizeCapExceeded(f"lattice has {len(L)} elements, cap is {lattice_cap}", len(L))
    members = []
    for atoms in _orthogonal_partitions(L):
        if len(members) >= cap:
            raise SizeCapExceeded(f"more than {cap} Boolean subalgebras", cap)
        carrier = frozenset(
            L.join_all(c) for r in range(len(atoms) + 1) for c in combinations(atoms, r))
        if not include_trivial and len(carrier) <= 2:
            continue
        members.append(BooleanSubalgebra(carrier, tuple(sorted(atoms)), L))
    members.sort(key=lambda B: (len(B.carrier), tuple(sorted(B.carrier))))
    leq = tuple(tuple(a.carrier <= b.carrier for b in members) for a in members)
    return SubalgebraPoset(tuple(members), leq)
