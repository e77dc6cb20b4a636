import pytest
from hypothesis import given, settings, strategies as st

from clopen.daseinisation import daseinise
from clopen.errors import FormulaSyntaxError, SizeCapExceeded, UnboundVariable
from clopen.logic import (
    AXIOMS,
    RULES,
    And,
    Forall,
    Imp,
    Not,
    Or,
    Var,
    check_axiom,
    check_rule,
    compile_formula,
    evaluate,
    free_vars,
    parse,
    replay,
    run_program,
    substitute,
    validation_report,
)
from helpers import presheaf


def test_precedence_and_associativity():
    assert parse("~p & q | r -> s -> t") == Imp(
        Or(And(Not(Var("p")), Var("q")), Var("r")), Imp(Var("s"), Var("t")))
    assert parse("forall x in dom . x -> p") == Forall("x", Imp(Var("x"), Var("p")), "dom")


@pytest.mark.parametrize("text", ["p &", "(p", "p q", "forall . p", "p $ q", "forall in . p"])
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse(text)


def test_free_vars_and_substitution():
    f = parse("forall x . x -> y & z")
    assert free_vars(f) == {"y", "z"}
    assert substitute(f, "x", "w") == f
    assert free_vars(substitute(f, "y", "w")) == {"w", "z"}


def formulas(depth=3):
    leaves = st.sampled_from(["p", "q", "r"]).map(Var)
    return st.recursive(leaves, lambda sub: st.one_of(
        sub.map(Not),
        st.tuples(sub, sub).map(lambda t: And(*t)),
        st.tuples(sub, sub).map(lambda t: Or(*t)),
        st.tuples(sub, sub).map(lambda t: Imp(*t)),
        sub.map(lambda b: Forall("p", b)),
    ), max_leaves=8)


@settings(max_examples=80, deadline=None)
@given(formulas(), st.sampled_from(["star", "heyting", "coheyting"]), st.data())
def test_compiled_programs_match_tree_evaluator(f, profile, data):
    P = presheaf("mo:2")
    subs = P.subobjects
    rows = [tuple(data.draw(st.sampled_from(subs)) for _ in "pqr") for _ in range(5)]
    prog = compile_formula(f, ["p", "q", "r"], P)
    out = run_program(prog, [S.mask for row in rows for S in row], 3, P, profile)
    for row, mask in zip(rows, out):
        want = evaluate(f, dict(zip("pqr", row)), profile)
        assert want.mask == mask


def test_unbound_variable(mo2):
    with pytest.raises(UnboundVariable):
        evaluate("p & q", {"p": mo2.top()})


def test_schema_tables():
    assert len(AXIOMS) == 12 and len(RULES) == 6
    with pytest.raises(ValueError):
        check_axiom("2", presheaf("mo:2"))


def test_heyting_excluded_middle_counterexample_replays(mo2):
    e = check_axiom("8", mo2, "heyting")
    assert e.status == "counterexample"
    assert replay(e.counterexample, mo2, "heyting")
    tampered = dict(e.counterexample, value=mo2.top().fiber_masks())
    assert not replay(tampered, mo2, "heyting")


def test_boolean_two_is_classical_under_star():
    P = presheaf("boolean:2")
    report = validation_report(P, "star")
    assert all(e.status == "valid" for e in report.entries)


def test_excluded_middle_and_contraposition_under_star(mo2):
    for ident in ("6", "7", "8", "9", "10", "11"):
        assert check_axiom(ident, mo2, "star").status == "valid"


def test_rule_three_has_no_witness_when_designation_is_top(mo2):
    # p = top forces p* = bottom, so the conclusion collapses to the premise q*
    e = check_rule("3", mo2, "star")
    assert e.status == "valid" and e.mode["search"] == "exhaustive"


def test_transitivity_fails_under_star(mo2):
    """Recorded finding: S* v T is not transitive at the designated value."""
    L = mo2.lattice
    a, b = L.idx("a"), L.idx("b")
    p, q, r = daseinise(mo2, a), daseinise(mo2, b), daseinise(mo2, L.orth(a))
    val = {"p": p, "q": q, "r": r}
    assert evaluate("p -> q", val).is_top() and evaluate("q -> r", val).is_top()
    assert not evaluate("p -> r", val).is_top()
    e = check_axiom("4", mo2, "star")
    assert e.status == "counterexample" and replay(e.counterexample, mo2, "star")
    e = check_rule("4", mo2, "star")
    assert e.status == "counterexample" and replay(e.counterexample, mo2, "star")


def test_sampled_mode_is_seeded(mo2):
    a = check_axiom("4", mo2, "heyting", budget=500, seed=3, search="sampled")
    b = check_axiom("4", mo2, "heyting", budget=500, seed=3, search="sampled")
    assert a.to_dict() == b.to_dict()
    assert a.mode["search"] == "sampled" and a.status == "budget-exhausted"


def test_exhaustive_mode_respects_budget(mo2):
    with pytest.raises(SizeCapExceeded):
        check_axiom("3", mo2, budget=100, search="exhaustive")
