import pytest

from clopen.laws import (
    SUITES,
    find_class_lem_failure,
    find_heyting_lem_failure,
    negation_failures,
    replay_witness,
    run_suites,
)
from helpers import FIXTURES, presheaf


@pytest.mark.parametrize("name", FIXTURES)
def test_all_suites_pass(name):
    results = run_suites(presheaf(name))
    assert [r.name for r in results] == list(SUITES)
    for r in results:
        failed = [c.name for c in r.clauses if c.kind == "law" and not c.holds]
        assert r.passed, (r.name, failed)


def test_unknown_suite():
    with pytest.raises(ValueError):
        run_suites(presheaf("mo:2"), "nonsense")


def test_mo2_searches_succeed_and_replay(mo2):
    res = negation_failures(mo2)
    searches = [c for c in res.clauses if c.kind == "search"]
    assert searches and all(c.holds for c in searches)
    for c in searches:
        assert replay_witness(c.witness, mo2)
    star_suite = run_suites(mo2, "star")[0]
    strict = star_suite.clause("strict contradiction witness")
    assert strict.holds and replay_witness(strict.witness, mo2)


def test_replay_rejects_a_tampered_witness(mo2):
    w = dict(find_heyting_lem_failure(mo2))
    w["subobject"] = mo2.top().fiber_masks()
    assert not replay_witness(w, mo2)


def test_boolean_two_negations():
    P = presheaf("boolean:2")
    res = negation_failures(P)
    # star agrees with the co-Heyting negation here, not with the Heyting one
    assert res.clause("star equals co-heyting negation").holds
    assert not res.clause("star equals heyting negation").holds
    assert find_class_lem_failure(P) is None


def test_suite_dicts_are_plain(mo2):
    for r in run_suites(mo2):
        d = r.to_dict()
        assert d["passed"] is True and d["clauses"]
