"""Operators to real-number names over the clopen subobjects, and back.

A self-adjoint matrix is sampled on a finite rational grid: the truth value
of "q is in u" is the daseinisation of its spectral projection below q. The
way back takes meets over grid points above a cut and applies the upper
adjoint, landing in a weakly right continuous family in the context lattice.

Check-names of distinct rationals are taken to be unequal with value bottom,
so membership of a grid rational is just the stored truth value.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

from .daseinisation import (
    Quotient,
    class_of_element,
    class_to_subobject,
    daseinise,
    star,
    star_implies,
    upper_adjoint,
)
from .errors import (
    ContextMismatch,
    GridDoesNotBracketSpectrum,
    GridError,
    GridMismatch,
    LambdaAboveGrid,
    OffGridRational,
)
from .operators import (
    WEAK_RIGHT,
    GeneratedOML,
    RationalMatrix,
    SpectralFamily,
    eigendecompose,
    eigenpairs,
    format_fraction,
    generate_oml,
    spectral_family,
    to_fraction,
    verify_family,
)
from .presheaf import coheyting_not, heyting_implies, heyting_not, spectral_presheaf, sub_meet


@dataclass(frozen=True)
class RationalGrid:
    points: tuple

    def __post_init__(self):
        pts = tuple(to_fraction(q) for q in self.points)
        if not pts:
            raise GridError("grid must be nonempty")
        for a, b in zip(pts, pts[1:]):
            if not a < b:
                raise GridError("grid points must be strictly increasing",
                                [format_fraction(a), format_fraction(b)])
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def index(self, q):
        try:
            return self.points.index(to_fraction(q))
        except ValueError:
            raise OffGridRational(f"{format_fraction(to_fraction(q))} is not a grid point",
                                  format_fraction(to_fraction(q))) from None

    def labels(self):
        return [format_fraction(q) for q in self.points]


class Context:
    """A projection lattice together with its spectral presheaf and quotient."""

    def __init__(self, oml, backend="auto"):
        if not isinstance(oml, GeneratedOML):
            raise TypeError("context must be a GeneratedOML")
        self.oml = oml
        self.lattice = oml.lattice
        self.presheaf = spectral_presheaf(oml.lattice, backend=backend)

    @classmethod
    def generated_by(cls, projections, cap=64, backend="auto"):
        return cls(generate_oml(projections, cap=cap), backend)

    @cached_property
    def quotient(self):
        return Quotient(self.presheaf)

    def projection(self, element):
        return self.oml.projections[element]


@dataclass(frozen=True)
class RealName:
    grid: RationalGrid
    values: tuple
    presheaf: object = field(repr=False)

    def __post_init__(self):
        if len(self.values) != len(self.grid):
            raise GridError("one truth value per grid point is required")
        for S in self.values:
            if S.presheaf is not self.presheaf:
                raise ContextMismatch("truth values live over another presheaf")

    def describe(self):
        return {q: repr(S) for q, S in zip(self.grid.labels(), self.values)}


def _resolution(A):
    if isinstance(A, (list, tuple)) and A and isinstance(A[0], tuple):
        return eigenpairs(list(A))
    return eigendecompose(A if isinstance(A, RationalMatrix) else RationalMatrix.of(A))


def check_bracket(pairs, grid):
    lo, hi = pairs[0][0], pairs[-1][0]
    if not grid.points[0] <= lo:
        raise GridDoesNotBracketSpectrum(
            f"first grid point {format_fraction(grid.points[0])} exceeds the least eigenvalue "
            f"{format_fraction(lo)}", format_fraction(lo))
    if not grid.points[-1] > hi:
        raise GridDoesNotBracketSpectrum(
            f"last grid point {format_fraction(grid.points[-1])} is not above the greatest "
            f"eigenvalue {format_fraction(hi)}", format_fraction(hi))


def operator_to_real(A, grid, context):
    """Truth value at q is the class section of the spectral projection below q.

    ``A`` is a matrix or an explicit list of ``(eigenvalue, projection)`` pairs.
    """
    grid = grid if isinstance(grid, RationalGrid) else RationalGrid(tuple(grid))
    pairs = _resolution(A)
    check_bracket(pairs, grid)
    family = spectral_family(pairs)
    Q = context.quotient
    values = []
    for q in grid:
        a = context.oml.index_of(family.value(q))
        S = class_to_subobject(class_of_element(Q, a))
        if S != daseinise(context.presheaf, a):
            raise ArithmeticError("class section differs from daseinisation")
        values.append(S)
    return RealName(grid, tuple(values), context.presheaf)


def membership(u, q, step=False):
    """Truth value of "q is in u"; off-grid rationals need ``step=True``."""
    q = to_fraction(q)
    if q in u.grid.points:
        return u.values[u.grid.points.index(q)]
    if not step:
        raise OffGridRational(f"{format_fraction(q)} is not a grid point", format_fraction(q))
    below = [i for i, r in enumerate(u.grid.points) if r <= q]
    return u.values[below[-1] if below else 0]


def is_dedekind_real(u):
    """Grid forms of the cut conditions; returns ``(ok, report)``."""
    vals, pts = u.values, u.grid.points
    report = {}
    report["bottom at first grid point"] = {"holds": vals[0].is_bottom(),
                                            "witness": None if vals[0].is_bottom() else repr(vals[0])}
    report["top at last grid point"] = {"holds": vals[-1].is_top(),
                                        "witness": None if vals[-1].is_top() else repr(vals[-1])}
    bad = next((i for i in range(len(vals) - 1) if not vals[i] <= vals[i + 1]), None)
    report["monotone"] = {"holds": bad is None,
                          "witness": None if bad is None else [format_fraction(pts[bad]),
                                                               format_fraction(pts[bad + 1])]}
    witness = None
    for i, r in enumerate(pts):
        nxt = pts[i + 1] if i + 1 < len(pts) else r + 1
        probes = [(r + nxt) / 2] + list(pts[i + 1:])
        m = sub_meet([membership(u, s, step=True) for s in probes])
        if m != vals[i]:
            witness = format_fraction(r)
            break
    report["right continuous"] = {"holds": witness is None, "witness": witness}
    ok = all(c["holds"] for c in report.values())
    return ok, report


def cut_to_E(u, lam):
    """Meet of the truth values at grid points strictly above ``lam``."""
    lam = to_fraction(lam)
    if lam > u.grid.points[-1]:
        raise LambdaAboveGrid(f"{format_fraction(lam)} lies above the grid",
                              format_fraction(lam))
    above = [S for q, S in zip(u.grid.points, u.values) if q > lam]
    return sub_meet(above) if above else u.presheaf.top()


def real_to_family(u, context):
    """Weakly right continuous family of upper adjoints of the cuts, in the context lattice.

    The family is meaningful below the last grid point; beyond it the last
    value is carried forward.
    """
    if u.presheaf is not context.presheaf:
        raise ContextMismatch("real lives over another presheaf")
    pts = u.grid.points
    breaks = list(pts[:-1])
    values = [upper_adjoint(cut_to_E(u, pts[0] - 1))]
    values += [upper_adjoint(cut_to_E(u, q)) for q in breaks]
    # drop breakpoints where nothing jumps
    keep_b, keep_v = [], [values[0]]
    for b, v in zip(breaks, values[1:]):
        if v != keep_v[-1]:
            keep_b.append(b)
            keep_v.append(v)
    return SpectralFamily(WEAK_RIGHT, tuple(keep_b), tuple(keep_v), context.lattice)


def round_trip(A, u, context):
    """At every grid point compare the returned family with meets of spectral projections."""
    family = spectral_family(_resolution(A))
    G = real_to_family(u, context)
    pts = u.grid.points
    rows = []
    for lam in pts:
        expected = context.oml.projections[0].identity(context.oml.projections[0].n)
        for q in pts:
            if q > lam:
                expected = expected.meet(family.value(q))
        got = context.projection(G.value(lam))
        rows.append({"lambda": format_fraction(lam), "family": got.label(),
                     "expected": expected.label(), "equal": got == expected})
    return {"holds": all(r["equal"] for r in rows), "points": rows}


_IMPLIES = {
    "star": star_implies,
    "heyting": heyting_implies,
    "coheyting": lambda S, T: coheyting_not(S) | T,
}
_NEGATE = {"star": star, "heyting": heyting_not, "coheyting": coheyting_not}


def _implies(profile):
    try:
        return _IMPLIES[profile]
    except KeyError:
        raise ValueError(f"unknown profile {profile!r}; choose from {sorted(_IMPLIES)}") from None


def _compatible(u, v):
    if u.presheaf is not v.presheaf:
        raise ContextMismatch("reals live over different presheaves")
    if u.grid != v.grid:
        raise GridMismatch("reals use different grids")


def equality_truth(u, v, profile="star"):
    """Meet over the grid of the biconditional of the two membership values."""
    _compatible(u, v)
    imp = _implies(profile)
    return sub_meet([imp(a, b) & imp(b, a) for a, b in zip(u.values, v.values)])


def distinguishing_points(u, v):
    """Grid rationals where the membership values fall in different classes."""
    _compatible(u, v)
    return [q for q, a, b in zip(u.grid.points, u.values, v.values)
            if upper_adjoint(a) != upper_adjoint(b)]


def naive_chain(u, v, profile, context):
    """Replay the per-point chain of the naive injectivity argument.

    At each grid point where the classes agree the argument needs
    [neg P] v [P] = [top]; the first point where that fails is where the
    chain breaks.
    """
    _compatible(u, v)
    L = context.lattice
    neg = _NEGATE[profile]
    imp = _implies(profile)
    rows, breaks_at = [], None
    for q, a, b in zip(u.grid.points, u.values, v.values):
        if upper_adjoint(a) != upper_adjoint(b):
            continue
        lem = L.join(upper_adjoint(neg(a)), upper_adjoint(a))
        row = {"q": format_fraction(q),
               "implication class": L.elements[upper_adjoint(imp(a, b))],
               "negation class join": L.elements[lem],
               "reaches top class": lem == L.top,
               "implication is top": imp(a, b).is_top()}
        rows.append(row)
        if breaks_at is None and not row["reaches top class"]:
            breaks_at = row["q"]
    return {"profile": profile, "points": rows, "breaks_at": breaks_at}


def _family_key(F):
    return (F.breakpoints, F.values)


def injectivity_experiment(A, B, grid, context, profiles=("star", "heyting")):
    grid = grid if isinstance(grid, RationalGrid) else RationalGrid(tuple(grid))
    fa, fb = spectral_family(_resolution(A)), spectral_family(_resolution(B))
    u, v = operator_to_real(A, grid, context), operator_to_real(B, grid, context)
    differ_on_grid = [format_fraction(q) for q in grid if fa.value(q) != fb.value(q)]
    families_differ = fa != fb
    ga, gb = real_to_family(u, context), real_to_family(v, context)
    points = [format_fraction(q) for q in distinguishing_points(u, v)]
    report = {
        "grid": grid.labels(),
        "families differ": families_differ,
        "families differ on grid": differ_on_grid,
        "distinguishing points": points,
        "returned families differ": _family_key(ga) != _family_key(gb),
        "resolution limited": families_differ and not differ_on_grid,
        "profiles": {},
    }
    for profile in profiles:
        truth = equality_truth(u, v, profile)
        report["profiles"][profile] = {
            "equality": repr(truth),
            "equality is top": truth.is_top(),
            # the property the repaired argument guarantees, checked on this instance
            "not top implies distinguishing point": truth.is_top() or bool(points),
            "naive chain": naive_chain(u, v, profile, context),
        }
    return report


def dedekind_grid_reals(P, length):
    """Every monotone assignment with bottom first and top last on a grid of ``length``."""
    subs = P.subobjects
    for middle in product(subs, repeat=max(length - 2, 0)):
        vals = (P.bottom(),) + middle + (P.top(),)
        if all(a <= b for a, b in zip(vals, vals[1:])):
            yield vals


def search_equality_gap(context, profile, grid=(0, 1, 2)):
    """Pairs of grid reals whose equality is not top but whose classes agree everywhere.

    Returns ``(witness or None, pairs checked)``. Under the star profile no
    witness should exist; under the heyting profile one usually does.
    """
    grid = grid if isinstance(grid, RationalGrid) else RationalGrid(tuple(grid))
    P = context.presheaf
    reals = [RealName(grid, vals, P) for vals in dedekind_grid_reals(P, len(grid))]
    checked = 0
    for u in reals:
        for v in reals:
            checked += 1
            if not equality_truth(u, v, profile).is_top() and not distinguishing_points(u, v):
                return {"u": u.describe(), "v": v.describe(),
                        "equality": repr(equality_truth(u, v, profile))}, checked
    return None, checked


def search_top_condition_failure(context, grid=(0, 1, 2)):
    """Look for a grid real whose returned family never reaches the top element."""
    grid = grid if isinstance(grid, RationalGrid) else RationalGrid(tuple(grid))
    P = context.presheaf
    checked = 0
    for vals in dedekind_grid_reals(P, len(grid)):
        checked += 1
        u = RealName(grid, vals, P)
        report = verify_family(real_to_family(u, context))
        if not report["exhausts above the spectrum"]["holds"]:
            return {"u": u.describe()}, checked
    return None, checked

