"""Exact rational symmetric matrices, projections and step spectral families.

Everything is over :class:`fractions.Fraction`; no float ever reaches a
projection. A projection is stored canonically by the reduced row echelon
basis of its range, so lattice-element equality is tuple equality.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from .errors import (
    IrrationalSpectrum,
    NotAProjection,
    NotHermitian,
    SizeCapExceeded,
)
from .lattice import DEFAULT_LATTICE_CAP, build_lattice


def to_fraction(x):
    """Exact conversion; accepts ints, Fractions and strings such as ``"3/2"``."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"refusing inexact value {x!r}; pass an int, Fraction or 'p/q' string")


def format_fraction(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# -- row reduction ----------------------------------------------------------------

def rref(rows, ncols):
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        lead = m[r][c]
        m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def nullspace(rows, ncols):
    """Basis of {x : row . x = 0 for every row}."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def _inverse(m):
    k = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(k)] for i, row in enumerate(m)]
    red, pivots = rref(aug, 2 * k)
    if pivots[:k] != list(range(k)):
        raise ZeroDivisionError("singular matrix")
    return [list(row[k:]) for row in red]


# -- matrices ---------------------------------------------------------------------

@dataclass(frozen=True)
class RationalMatrix:
    entries: tuple

    @classmethod
    def of(cls, rows):
        rows = [tuple(to_fraction(x) for x in row) for row in rows]
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square")
        return cls(tuple(rows))

    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, n):
        return cls(tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n)))

    @classmethod
    def diag(cls, *values):
        n = len(values)
        return cls(tuple(tuple(to_fraction(values[i]) if i == j else Fraction(0)
                               for j in range(n)) for i in range(n)))

    @property
    def n(self):
        return len(self.entries)

    def is_hermitian(self):
        e = self.entries
        return all(e[i][j] == e[j][i] for i in range(self.n) for j in range(i))

    def transpose(self):
        return RationalMatrix(tuple(zip(*self.entries)))

    def __matmul__(self, other):
        cols = list(zip(*other.entries))
        return RationalMatrix(tuple(tuple(sum((a * b for a, b in zip(row, col)), Fraction(0))
                                          for col in cols) for row in self.entries))

    def __add__(self, other):
        return RationalMatrix(tuple(tuple(a + b for a, b in zip(r, s))
                                    for r, s in zip(self.entries, other.entries)))

    def __sub__(self, other):
        return RationalMatrix(tuple(tuple(a - b for a, b in zip(r, s))
                                    for r, s in zip(self.entries, other.entries)))

    def scale(self, c):
        c = to_fraction(c)
        return RationalMatrix(tuple(tuple(c * a for a in r) for r in self.entries))

    def trace(self):
        return sum((self.entries[i][i] for i in range(self.n)), Fraction(0))

    def rows_as_strings(self):
        return [[format_fraction(x) for x in r] for r in self.entries]


# -- projections --------------------------------------------------------------------

@dataclass(frozen=True)
class Projection:
    """Orthogonal projection onto the span of ``basis`` (reduced echelon rows)."""

    n: int
    basis: tuple

    @classmethod
    def span(cls, vectors, n):
        vecs = [tuple(to_fraction(x) for x in v) for v in vectors]
        if any(len(v) != n for v in vecs):
            raise ValueError(f"vectors must have length {n}")
        red, _ = rref(vecs, n)
        return cls(n, tuple(red))

    @classmethod
    def from_matrix(cls, M):
        if not isinstance(M, RationalMatrix):
            M = RationalMatrix.of(M)
        if not M.is_hermitian():
            raise NotAProjection("projection matrix is not symmetric", M)
        if M @ M != M:
            raise NotAProjection("projection matrix is not idempotent", M)
        return cls.span(M.entries, M.n)

    @classmethod
    def zero(cls, n):
        return cls(n, ())

    @classmethod
    def identity(cls, n):
        return cls.span(RationalMatrix.identity(n).entries, n)

    @property
    def rank(self):
        return len(self.basis)

    @cached_property
    def matrix(self):
        n = self.n
        if not self.basis:
            return RationalMatrix.zero(n)
        B = [list(r) for r in self.basis]
        gram = [[sum((a * b for a, b in zip(u, v)), Fraction(0)) for v in B] for u in B]
        g = _inverse(gram)
        k = len(B)
        # P = B^T G^{-1} B
        coef = [[sum((g[i][j] * B[j][c] for j in range(k)), Fraction(0)) for c in range(n)]
                for i in range(k)]
        return RationalMatrix(tuple(tuple(sum((B[i][r] * coef[i][c] for i in range(k)),
                                              Fraction(0)) for c in range(n))
                                    for r in range(n)))

    def is_idempotent(self):
        M = self.matrix
        return M @ M == M and M.is_hermitian()

    def join(self, other):
        return Projection.span(self.basis + other.basis, self.n)

    def ortho(self):
        return Projection.span(nullspace(self.basis, self.n), self.n)

    def meet(self, other):
        return self.ortho().join(other.ortho()).ortho()

    def leq(self, other):
        return self.join(other) == other

    def orthogonal_to(self, other):
        return self.leq(other.ortho())

    def label(self):
        if not self.basis:
            return "0"
        if self.rank == self.n:
            return "1"
        return "<" + ";".join(",".join(format_fraction(x) for x in row)
                              for row in self.basis) + ">"


# -- spectra ------------------------------------------------------------------------

def characteristic_polynomial(A):
    """Coefficients of det(x I - A), highest degree first (Faddeev-LeVerrier)."""
    n = A.n
    coeffs = [Fraction(1)]
    M = RationalMatrix.zero(n)
    I = RationalMatrix.identity(n)
    for k in range(1, n + 1):
        M = A @ M + I.scale(coeffs[-1])
        coeffs.append(-(A @ M).trace() / k)
    return coeffs


def _rational_roots(coeffs):
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in coeffs], x,
                      domain="QQ")
    roots = []
    for factor, _mult in poly.factor_list()[1]:
        if factor.degree() > 1:
            raise IrrationalSpectrum(
                f"characteristic polynomial has irreducible factor {factor.as_expr()}",
                str(factor.as_expr()))
        a, b = factor.all_coeffs()
        r = -b / a
        roots.append(Fraction(int(r.p), int(r.q)))
    return sorted(set(roots))


def eigendecompose(A):
    """``[(eigenvalue, eigenprojection), ...]`` in increasing eigenvalue order."""
    if not isinstance(A, RationalMatrix):
        A = RationalMatrix.of(A)
    if not A.is_hermitian():
        raise NotHermitian("matrix is not symmetric", A)
    n = A.n
    pairs = []
    for lam in _rational_roots(characteristic_polynomial(A)):
        shifted = A - RationalMatrix.identity(n).scale(lam)
        pairs.append((lam, Projection.span(nullspace(shifted.entries, n), n)))
    _check_resolution(pairs, n)
    total = RationalMatrix.zero(n)
    for lam, P in pairs:
        total = total + P.matrix.scale(lam)
    if total != A:
        raise ArithmeticError("eigendecomposition does not reproduce the matrix")
    return pairs


def _check_resolution(pairs, n):
    if not pairs:
        raise ValueError("empty spectral resolution")
    for (_, P), (_, Q) in combinations(pairs, 2):
        if not P.orthogonal_to(Q):
            raise NotAProjection("eigenprojections are not pairwise orthogonal", (P, Q))
    acc = Projection.zero(n)
    for _, P in pairs:
        acc = acc.join(P)
    if sum(P.rank for _, P in pairs) != n or acc != Projection.identity(n):
        raise NotAProjection("eigenprojections do not sum to the identity")


def eigenpairs(pairs):
    """Validate a user-supplied resolution ``[(value, Projection | matrix), ...]``."""
    out = []
    for value, P in pairs:
        if not isinstance(P, Projection):
            P = Projection.from_matrix(P)
        out.append((to_fraction(value), P))
    out.sort(key=lambda vp: vp[0])
    if len({v for v, _ in out}) != len(out):
        raise ValueError("eigenvalues must be distinct")
    _check_resolution(out, out[0][1].n)
    return out


def resolution_matrix(pairs):
    n = pairs[0][1].n
    total = RationalMatrix.zero(n)
    for lam, P in pairs:
        total = total + P.matrix.scale(lam)
    return total


# -- spectral families ----------------------------------------------------------------

LEFT = "left_continuous"
WEAK_RIGHT = "weakly_right_continuous"


@dataclass(frozen=True)
class SpectralFamily:
    """Monotone step family with jumps at ``breakpoints``.

    ``values[i]`` holds on the i-th interval. Left continuous families take
    ``values[i]`` on ``(b_i, b_{i+1}]``; weakly right continuous ones on
    ``[b_i, b_{i+1})``. Values are projections, or element indices of
    ``lattice`` when it is given.
    """

    flavor: str
    breakpoints: tuple
    values: tuple
    lattice: object = None

    def __post_init__(self):
        if self.flavor not in (LEFT, WEAK_RIGHT):
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if len(self.values) != len(self.breakpoints) + 1:
            raise ValueError("need exactly one more value than breakpoints")

    def value(self, lam):
        lam = to_fraction(lam)
        if self.flavor == LEFT:
            i = sum(1 for b in self.breakpoints if b < lam)
        else:
            i = sum(1 for b in self.breakpoints if b <= lam)
        return self.values[i]

    def labels(self):
        if self.lattice is not None:
            return [self.lattice.elements[v] for v in self.values]
        return [v.label() for v in self.values]


def spectral_family(A):
    """Left continuous family: sum of eigenprojections with eigenvalue below lambda."""
    pairs = A if isinstance(A, list) else eigendecompose(A)
    n = pairs[0][1].n
    values = [Projection.zero(n)]
    for _, P in pairs:
        values.append(values[-1].join(P))
    return SpectralFamily(LEFT, tuple(lam for lam, _ in pairs), tuple(values))


class _Order:
    def __init__(self, family):
        L = family.lattice
        if L is None:
            n = family.values[0].n
            self.leq = lambda a, b: a.leq(b)
            self.meet = lambda a, b: a.meet(b)
            self.join = lambda a, b: a.join(b)
            self.bottom, self.top = Projection.zero(n), Projection.identity(n)
            self.show = lambda a: a.label()
        else:
            self.leq, self.meet, self.join = L.leq, L.meet, L.join
            self.bottom, self.top = L.bottom, L.top
            self.show = lambda a: L.elements[a]


def _probe_points(bs):
    """Rationals strictly between, below and above the breakpoints."""
    if not bs:
        return [Fraction(0)]
    pts = [bs[0] - 1] + [(a + b) / 2 for a, b in zip(bs, bs[1:])] + [bs[-1] + 1]
    return pts


def verify_family(F):
    """Check the flavor's conditions exactly; returns a report dict."""
    o = _Order(F)
    bs = list(F.breakpoints)
    report = {"flavor": F.flavor}

    def cond(name, holds, witness=None):
        report[name] = {"holds": bool(holds), "witness": witness}

    bad = next((format_fraction(b) for a, b in zip(bs, bs[1:]) if not a < b), None)
    cond("increasing breakpoints", bad is None, bad)
    bad = next((i for i, (a, b) in enumerate(zip(F.values, F.values[1:])) if not o.leq(a, b)),
               None)
    cond("monotone", bad is None, None if bad is None else [o.show(F.values[bad]),
                                                           o.show(F.values[bad + 1])])
    probes = _probe_points(bs)
    low, high = F.value(probes[0]), F.value(probes[-1])
    cond("vanishes below the spectrum", low == o.bottom, o.show(low))
    cond("exhausts above the spectrum", high == o.top, o.show(high))
    witness = None
    for i, b in enumerate(bs):
        if F.flavor == LEFT:
            # sup over mu < b of value(mu) is the value just left of b
            left = F.value(probes[i])
            if left != F.value(b):
                witness = format_fraction(b)
                break
        else:
            right = F.value(probes[i + 1])
            if right != F.value(b):
                witness = format_fraction(b)
                break
    cond("left continuous" if F.flavor == LEFT else "right continuous", witness is None, witness)
    required = ["increasing breakpoints", "monotone", "vanishes below the spectrum"]
    required.append("left continuous" if F.flavor == LEFT else "right continuous")
    if F.flavor == LEFT:
        required.append("exhausts above the spectrum")
    report["required"] = required
    report["ok"] = all(report[k]["holds"] for k in required)
    return report


# -- generated projection lattices ------------------------------------------------------

@dataclass
class GeneratedOML:
    sources: tuple
    lattice: object
    projections: tuple

    def __post_init__(self):
        self._index = {P: i for i, P in enumerate(self.projections)}

    def index_of(self, P):
        from .errors import ProjectionNotInContext

        try:
            return self._index[P]
        except KeyError:
            raise ProjectionNotInContext(f"projection {P.label()} is not in the context lattice",
                                         P.label()) from None

    def projection(self, i):
        return self.projections[i]


def generate_oml(projections, cap=DEFAULT_LATTICE_CAP, name=None):
    """Close ``projections`` under meet, join and orthocomplement inside P(Q^n)."""
    gens = [P if isinstance(P, Projection) else Projection.from_matrix(P) for P in projections]
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].n
    if any(P.n != n for P in gens):
        raise ValueError("generators must share one dimension")
    found = {Projection.zero(n), Projection.identity(n), *gens}
    frontier = set(found)
    while frontier:
        new = set()
        current = list(found)
        for P in frontier:
            candidates = [P.ortho()]
            for Q in current:
                candidates += [P.meet(Q), P.join(Q)]
            for C in candidates:
                if C not in found and C not in new:
                    new.add(C)
        found |= new
        frontier = new
        if len(found) > cap:
            raise SizeCapExceeded(f"closure exceeded the cap of {cap} (reached {len(found)})",
                                  len(found))
    elems = sorted(found, key=lambda P: (P.rank, P.basis))
    ids = [P.label() for P in elems]
    leq = [(ids[i], ids[j]) for i, a in enumerate(elems) for j, b in enumerate(elems)
           if a.leq(b)]
    ortho = {ids[i]: elems.index(a.ortho()) for i, a in enumerate(elems)}
    ortho = {k: ids[v] for k, v in ortho.items()}
    L = build_lattice(ids, leq, ortho=ortho, name=name or f"projections:{len(gens)}", cap=cap)
    return GeneratedOML(tuple(gens), L, tuple(elems))
