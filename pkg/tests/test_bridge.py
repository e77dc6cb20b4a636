from fractions import Fraction as Q

import pytest

from clopen.bridge import (
    Context,
    RationalGrid,
    RealName,
    cut_to_E,
    distinguishing_points,
    equality_truth,
    injectivity_experiment,
    is_dedekind_real,
    membership,
    operator_to_real,
    real_to_family,
    round_trip,
    search_equality_gap,
    search_top_condition_failure,
)
from clopen.daseinisation import daseinise
from clopen.errors import (
    ContextMismatch,
    GridDoesNotBracketSpectrum,
    GridError,
    GridMismatch,
    LambdaAboveGrid,
    OffGridRational,
    ProjectionNotInContext,
)
from clopen.operators import Projection, RationalMatrix, eigendecompose, verify_family

GRID = (0, 1, Q(3, 2), 2, 3)


@pytest.fixture(scope="module")
def diagonal():
    return Context.generated_by([Projection.span([[1, 0]], 2)])


@pytest.fixture(scope="module")
def lines():
    return Context.generated_by([Projection.span([[1, 0]], 2), Projection.span([[1, 1]], 2)])


def e1(ctx):
    return ctx.oml.index_of(Projection.span([[1, 0]], 2))


def test_diag_values(diagonal):
    u = operator_to_real(RationalMatrix.diag(1, 2), GRID, diagonal)
    d = daseinise(diagonal.presheaf, e1(diagonal))
    P = diagonal.presheaf
    assert u.values == (P.bottom(), P.bottom(), d, d, P.top())
    assert membership(u, Q(3, 2)) == d
    assert membership(u, 0).is_bottom() and membership(u, 3).is_top()
    ok, report = is_dedekind_real(u)
    assert ok, report


def test_scalar_is_a_step(diagonal):
    u = operator_to_real(RationalMatrix.identity(2).scale(Q(5, 4)), (0, Q(5, 4), 2), diagonal)
    assert [S.is_top() for S in u.values] == [False, False, True]
    assert u.values[1].is_bottom()
    G = real_to_family(u, diagonal)
    assert G.breakpoints == (Q(5, 4),)


def test_grid_must_bracket(diagonal):
    with pytest.raises(GridDoesNotBracketSpectrum):
        operator_to_real(RationalMatrix.diag(1, 2), (0, 1, 2), diagonal)
    with pytest.raises(GridDoesNotBracketSpectrum):
        operator_to_real(RationalMatrix.diag(1, 2), (Q(3, 2), 3), diagonal)
    with pytest.raises(GridError):
        RationalGrid((0, 2, 1))


def test_projection_outside_context(diagonal):
    with pytest.raises(ProjectionNotInContext):
        operator_to_real([[0, 1], [1, 0]], (-2, 0, 2), diagonal)


def test_off_grid_membership(diagonal):
    u = operator_to_real(RationalMatrix.diag(1, 2), GRID, diagonal)
    with pytest.raises(OffGridRational):
        membership(u, Q(7, 4))
    assert membership(u, Q(7, 4), step=True) == u.values[2]
    assert membership(u, -5, step=True) == u.values[0]


def test_non_dedekind_names(lines):
    P = lines.presheaf
    a = lines.oml.index_of(Projection.span([[1, 0]], 2))
    da = daseinise(P, a)
    ok, report = is_dedekind_real(RealName(RationalGrid((0, 1)), (P.bottom(), da), P))
    assert not ok and report["top at last grid point"]["witness"] == repr(da)
    ok, report = is_dedekind_real(RealName(RationalGrid((0, 1, 2)), (P.bottom(), P.top(), da), P))
    assert not ok and report["monotone"]["witness"] == ["1", "2"]


def test_cuts(diagonal):
    u = operator_to_real(RationalMatrix.diag(1, 2), GRID, diagonal)
    d = daseinise(diagonal.presheaf, e1(diagonal))
    assert cut_to_E(u, -1).is_bottom()
    assert cut_to_E(u, 1) == d
    assert cut_to_E(u, 3 - Q(1, 10 ** 6)).is_top()
    with pytest.raises(LambdaAboveGrid):
        cut_to_E(u, 4)


def test_returned_family(diagonal):
    u = operator_to_real(RationalMatrix.diag(1, 2), GRID, diagonal)
    G = real_to_family(u, diagonal)
    L = diagonal.lattice
    assert G.breakpoints == (1, 2)
    assert [L.elements[v] for v in G.values] == ["0", "<1,0>", "1"]
    report = verify_family(G)
    assert report["ok"] and report["exhausts above the spectrum"]["holds"]
    assert round_trip(RationalMatrix.diag(1, 2), u, diagonal)["holds"]


def test_explicit_resolution_input():
    pairs = eigendecompose([[0, 1], [1, 0]])
    ctx = Context.generated_by([P for _, P in pairs])
    explicit = [(v, P.matrix) for v, P in pairs]
    u = operator_to_real(explicit, (-1, 0, 1, 2), ctx)
    assert is_dedekind_real(u)[0]
    assert round_trip(explicit, u, ctx)["holds"]


def test_self_equality(diagonal):
    u = operator_to_real(RationalMatrix.diag(1, 2), GRID, diagonal)
    for profile in ("star", "heyting", "coheyting"):
        assert equality_truth(u, u, profile).is_top()
    assert distinguishing_points(u, u) == []


def test_equality_needs_common_grid_and_context(diagonal, lines):
    u = operator_to_real(RationalMatrix.diag(1, 2), GRID, diagonal)
    v = operator_to_real(RationalMatrix.diag(1, 2), (0, 1, 2, 3), diagonal)
    with pytest.raises(GridMismatch):
        equality_truth(u, v)
    w = operator_to_real(RationalMatrix.diag(1, 2), GRID, Context(diagonal.oml))
    with pytest.raises(ContextMismatch):
        equality_truth(u, w)


def test_injectivity_distinguishes(diagonal):
    grid = (0, 1, Q(3, 2), 2, Q(5, 2), 3, 4)
    r = injectivity_experiment(RationalMatrix.diag(1, 2), RationalMatrix.diag(1, 3), grid,
                               diagonal)
    assert r["distinguishing points"][0] == "5/2"
    assert r["returned families differ"]
    assert not r["profiles"]["star"]["equality is top"]
    assert r["profiles"]["star"]["naive chain"]["breaks_at"] is None
    assert r["profiles"]["heyting"]["naive chain"]["breaks_at"] == "3/2"


def test_same_operator_is_not_distinguished(diagonal):
    A = RationalMatrix.diag(1, 2)
    r = injectivity_experiment(A, A, GRID, diagonal)
    assert r["profiles"]["star"]["equality is top"] and r["distinguishing points"] == []


def test_grid_resolution_limit(diagonal):
    r = injectivity_experiment(RationalMatrix.diag(1, 2), RationalMatrix.diag(1, Q(21, 10)),
                               (0, 1, Q(3, 2), 3), diagonal)
    assert r["families differ"] and r["resolution limited"]
    assert r["profiles"]["star"]["equality is top"]


def test_equality_gap_only_without_star(lines):
    assert search_equality_gap(lines, "star")[0] is None
    witness, _ = search_equality_gap(lines, "heyting")
    assert witness is not None


def test_top_condition_search_is_exhausted(lines):
    witness, checked = search_top_condition_failure(lines, (0, 1, 2, 3))
    assert witness is None and checked > 0
