"""Exhaustive law suites for daseinisation, the quotient and the star negation.

Each suite returns a :class:`SuiteResult`: a list of clauses, every clause
recording whether it held, how many cases were checked and, for failures
(or for searches that are expected to succeed), a witness.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product

from .daseinisation import (
    Quotient,
    class_of_element,
    class_star,
    class_to_subobject,
    daseinise,
    element_of_class,
    star,
    star_implies,
    upper_adjoint,
    upper_adjoint_reference,
)
from .presheaf import coheyting_not, heyting_not

DEFAULT_PAIR_BUDGET = 250_000


@dataclass
class Clause:
    name: str
    holds: bool
    checked: int
    witness: object = None
    sampled: bool = False
    kind: str = "law"  # law | search (existence claim) | info (comparison only)

    def to_dict(self):
        return {"name": self.name, "kind": self.kind, "holds": self.holds,
                "checked": self.checked, "witness": self.witness, "sampled": self.sampled}


@dataclass
class SuiteResult:
    name: str
    lattice: str
    clauses: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.holds for c in self.clauses if c.kind == "law")

    def clause(self, name):
        return next(c for c in self.clauses if c.name == name)

    def add(self, name, cases, predicate, describe=None, sampled=False):
        """Run ``predicate`` on each case until it fails; record a clause."""
        n = 0
        for case in cases:
            n += 1
            if not predicate(*case):
                w = describe(*case) if describe else None
                self.clauses.append(Clause(name, False, n, w, sampled))
                return False
        self.clauses.append(Clause(name, True, n, None, sampled))
        return True

    def to_dict(self):
        return {"suite": self.name, "lattice": self.lattice, "passed": self.passed,
                "clauses": [c.to_dict() for c in self.clauses]}


def _ids(L, items):
    return [L.elements[a] for a in items]


def _sub(S):
    return S.fiber_masks()


def _pairs(items, budget, seed, label):
    """All ordered pairs, or a seeded sample of ``budget`` of them."""
    if len(items) ** 2 <= budget:
        return list(product(items, repeat=2)), False
    rng = random.Random(f"{seed}:{label}")
    return [(rng.choice(items), rng.choice(items)) for _ in range(budget)], True


def _triples(items, budget, seed, label):
    if len(items) ** 3 <= budget:
        return list(product(items, repeat=3)), False
    rng = random.Random(f"{seed}:{label}")
    return [tuple(rng.choice(items) for _ in range(3)) for _ in range(budget)], True


def daseinisation_laws(P):
    L = P.lattice
    n = len(L)
    els = range(n)
    d = [daseinise(P, a) for a in els]
    res = SuiteResult("daseinisation", L.name or "lattice")
    res.add("injective", combinations(els, 2), lambda a, b: d[a] != d[b],
            lambda a, b: _ids(L, (a, b)))
    families = [c for r in (1, 2, 3) for c in combinations(els, r)] + [tuple(els)]
    res.add("preserves joins", ((f,) for f in families),
            lambda f: daseinise(P, L.join_all(f)) == _join(P, [d[a] for a in f]),
            lambda f: _ids(L, f))
    res.add("monotone", product(els, repeat=2),
            lambda a, b: not L.leq(a, b) or d[a] <= d[b], lambda a, b: _ids(L, (a, b)))
    res.add("bottom and top", [()],
            lambda: d[L.bottom].is_bottom() and d[L.top].is_top())
    res.add("meets bounded by meet of images", product(els, repeat=2),
            lambda a, b: d[L.meet(a, b)] <= (d[a] & d[b]), lambda a, b: _ids(L, (a, b)))
    return res


def _join(P, subs):
    acc = P.bottom()
    for S in subs:
        acc = acc | S
    return acc


def _meet(P, subs):
    acc = P.top()
    for S in subs:
        acc = acc & S
    return acc


def adjoint_laws(P, subobjects=None, budget=DEFAULT_PAIR_BUDGET, seed=0):
    L = P.lattice
    subs = P.subobjects if subobjects is None else subobjects
    eps = {S.mask: upper_adjoint(S) for S in subs}
    res = SuiteResult("adjoint", L.name or "lattice")
    res.add("kernel agrees with defining join", ((S,) for S in subs),
            lambda S: eps[S.mask] == upper_adjoint_reference(S), lambda S: _sub(S))
    pairs, sp = _pairs(subs, budget, seed, "adjoint-pairs")
    triples, st = _triples(subs, budget, seed, "adjoint-triples")
    res.add("preserves meets (pairs)", pairs,
            lambda S, T: upper_adjoint(S & T) == L.meet(eps[S.mask], eps[T.mask]),
            lambda S, T: [_sub(S), _sub(T)], sp)
    res.add("preserves meets (triples)", triples,
            lambda S, T, R: upper_adjoint(S & T & R)
            == L.meet_all((eps[S.mask], eps[T.mask], eps[R.mask])),
            lambda S, T, R: [_sub(S), _sub(T), _sub(R)], st)
    res.add("preserves the empty meet", [()], lambda: upper_adjoint(P.top()) == L.top)
    res.add("monotone", pairs,
            lambda S, T: not S <= T or L.leq(eps[S.mask], eps[T.mask]),
            lambda S, T: [_sub(S), _sub(T)], sp)
    res.add("retracts daseinisation", ((a,) for a in range(len(L))),
            lambda a: upper_adjoint(daseinise(P, a)) == a, lambda a: L.elements[a])
    res.add("counit below identity", ((S,) for S in subs),
            lambda S: daseinise(P, eps[S.mask]) <= S, lambda S: _sub(S))
    res.add("joins bounded by join of images", pairs,
            lambda S, T: L.leq(L.join(eps[S.mask], eps[T.mask]), upper_adjoint(S | T)),
            lambda S, T: [_sub(S), _sub(T)], sp)
    res.add("galois connection", product(range(len(L)), subs),
            lambda a, S: (daseinise(P, a) <= S) == L.leq(a, eps[S.mask]),
            lambda a, S: [L.elements[a], _sub(S)])
    return res


def quotient_iso(P, subobjects=None):
    L = P.lattice
    Q = Quotient(P)
    els = range(len(L))
    f = [class_of_element(Q, a) for a in els]
    res = SuiteResult("quotient", L.name or "lattice")
    res.add("element -> class -> element is identity", ((a,) for a in els),
            lambda a: element_of_class(f[a]) == a, lambda a: L.elements[a])
    res.add("class -> element -> class is identity", ((c,) for c in Q),
            lambda c: class_of_element(Q, element_of_class(c)) == c, lambda c: c.label())
    subs = P.subobjects if subobjects is None else subobjects
    res.add("every subobject's class is hit", ((S,) for S in subs),
            lambda S: class_of_element(Q, element_of_class(Q.class_of(S))) == Q.class_of(S),
            lambda S: _sub(S))
    groups = Q.partition(subs)
    res.add("partition has one class per element", [()],
            lambda: sorted(groups) == list(els), lambda: sorted(groups))
    res.add("preserves meets", product(els, repeat=2),
            lambda a, b: Q.meet(f[a], f[b]) == f[L.meet(a, b)], lambda a, b: _ids(L, (a, b)))
    res.add("preserves joins", product(els, repeat=2),
            lambda a, b: Q.join(f[a], f[b]) == f[L.join(a, b)], lambda a, b: _ids(L, (a, b)))
    res.add("join agrees with transported join", product(Q, repeat=2),
            lambda c, d: Q.join(c, d) == Q.join_transported(c, d),
            lambda c, d: [c.label(), d.label()])
    res.add("preserves order", product(els, repeat=2),
            lambda a, b: L.leq(a, b) == Q.leq(f[a], f[b]), lambda a, b: _ids(L, (a, b)))
    res.add("inverse preserves meets", product(Q, repeat=2),
            lambda c, d: element_of_class(Q.meet(c, d))
            == L.meet(element_of_class(c), element_of_class(d)),
            lambda c, d: [c.label(), d.label()])
    res.add("inverse preserves joins", product(Q, repeat=2),
            lambda c, d: element_of_class(Q.join(c, d))
            == L.join(element_of_class(c), element_of_class(d)),
            lambda c, d: [c.label(), d.label()])
    return res


def class_section(P, subobjects=None):
    """The section class -> daseinisation of its upper adjoint."""
    L = P.lattice
    Q = Quotient(P)
    subs = P.subobjects if subobjects is None else subobjects
    h = {c.element: class_to_subobject(c) for c in Q}
    res = SuiteResult("class-section", L.name or "lattice")
    res.add("keeps the upper adjoint", ((S,) for S in subs),
            lambda S: upper_adjoint(h[Q.class_of(S).element]) == upper_adjoint(S),
            lambda S: _sub(S))
    res.add("preserves joins", product(Q, repeat=2),
            lambda c, d: class_to_subobject(Q.join(c, d)) == (h[c.element] | h[d.element]),
            lambda c, d: [c.label(), d.label()])
    res.add("injective", combinations(Q, 2), lambda c, d: h[c.element] != h[d.element],
            lambda c, d: [c.label(), d.label()])
    return res


def top_class(P, subobjects=None):
    from .daseinisation import top_class_check

    L = P.lattice
    subs = P.subobjects if subobjects is None else subobjects
    report = top_class_check(P, subs)
    res = SuiteResult("top-class", L.name or "lattice")
    res.add("only the top subobject has upper adjoint 1", [()],
            lambda: report["only_top"], lambda: [_sub(S) for S in report["members"]])
    return res


def star_laws(P, subobjects=None, budget=DEFAULT_PAIR_BUDGET, seed=0):
    L = P.lattice
    Q = Quotient(P)
    subs = P.subobjects if subobjects is None else subobjects
    st = {S.mask: star(S) for S in subs}
    eps = {S.mask: upper_adjoint(S) for S in subs}
    top = P.top()
    res = SuiteResult("star", L.name or "lattice")
    one = ((S,) for S in subs)
    w1 = lambda S: _sub(S)  # noqa: E731
    res.add("excluded middle", one, lambda S: (S | st[S.mask]) == top, w1)
    res.add("double star below", ((S,) for S in subs), lambda S: star(st[S.mask]) <= S, w1)
    res.add("triple star", ((S,) for S in subs),
            lambda S: star(star(st[S.mask])) == st[S.mask], w1)
    res.add("contradiction above bottom", ((S,) for S in subs),
            lambda S: (S & st[S.mask]) >= P.bottom(), w1)
    pairs, sp = _pairs(subs, budget, seed, "star-pairs")
    w2 = lambda S, T: [_sub(S), _sub(T)]  # noqa: E731
    res.add("meet to join", pairs, lambda S, T: star(S & T) == (st[S.mask] | st[T.mask]), w2, sp)
    res.add("join below meet", pairs, lambda S, T: star(S | T) <= (st[S.mask] & st[T.mask]),
            w2, sp)
    res.add("adjoints join to 1", ((S,) for S in subs),
            lambda S: L.join(eps[S.mask], upper_adjoint(st[S.mask])) == L.top, w1)
    res.add("adjoints meet to 0", ((S,) for S in subs),
            lambda S: L.meet(eps[S.mask], upper_adjoint(st[S.mask])) == L.bottom, w1)
    res.add("antitone", pairs, lambda S, T: not S <= T or st[S.mask] >= st[T.mask], w2, sp)
    res.add("well defined on classes", pairs,
            lambda S, T: eps[S.mask] != eps[T.mask] or st[S.mask] == st[T.mask], w2, sp)
    res.add("class star tracks orthocomplement", ((a,) for a in range(len(L))),
            lambda a: class_star(Q, Q.classes[a]) == Q.classes[L.ortho[a]],
            lambda a: L.elements[a])
    res.add("class excluded middle", ((S,) for S in subs),
            lambda S: Q.join(Q.class_of(st[S.mask]), Q.class_of(S)) == Q.top_class, w1)
    res.add("star implication is reflexive", ((S,) for S in subs),
            lambda S: star_implies(S, S) == top, w1)
    strict = find_star_strictness(P)
    res.clauses.append(Clause("strict contradiction witness", strict is not None,
                              len(L), strict, kind="search"))
    return res


def find_star_strictness(P):
    """A daseinisation d with d ^ d* strictly above bottom, if any."""
    L = P.lattice
    for a in range(len(L)):
        d = daseinise(P, a)
        both = d & star(d)
        if not both.is_bottom():
            return {"property": "star-strict", "element": L.elements[a], "meet": _sub(both)}
    return None


def find_heyting_lem_failure(P, subobjects=None):
    subs = P.subobjects if subobjects is None else subobjects
    for S in subs:
        if not (S | heyting_not(S)).is_top():
            return {"property": "heyting-lem", "subobject": _sub(S),
                    "value": _sub(S | heyting_not(S))}
    return None


def find_class_lem_failure(P, negation="coheyting", subobjects=None):
    """A subobject S with [neg S] v [S] != [top] in the quotient, if any."""
    Q = Quotient(P)
    neg = {"coheyting": coheyting_not, "heyting": heyting_not, "star": star}[negation]
    subs = P.subobjects if subobjects is None else subobjects
    for S in subs:
        joined = Q.join(Q.class_of(neg(S)), Q.class_of(S))
        if joined != Q.top_class:
            return {"property": f"{negation}-class-lem", "subobject": _sub(S),
                    "negation": _sub(neg(S)), "class_join": joined.label()}
    return None


def find_coheyting_paraconsistency(P, subobjects=None):
    subs = P.subobjects if subobjects is None else subobjects
    for S in subs:
        both = S & coheyting_not(S)
        if not both.is_bottom():
            return {"property": "coheyting-contradiction", "subobject": _sub(S),
                    "meet": _sub(both)}
    return None


def find_adjoint_join_failure(P, subobjects=None):
    """S, T with upper_adjoint(S v T) strictly above the join of their adjoints."""
    L = P.lattice
    subs = P.subobjects if subobjects is None else subobjects
    for S, T in combinations(subs, 2):
        lhs = upper_adjoint(S | T)
        rhs = L.join(upper_adjoint(S), upper_adjoint(T))
        if lhs != rhs:
            return {"property": "adjoint-join", "subobjects": [_sub(S), _sub(T)],
                    "adjoint_of_join": L.elements[lhs], "join_of_adjoints": L.elements[rhs]}
    return None


def negation_failures(P, subobjects=None):
    L = P.lattice
    subs = P.subobjects if subobjects is None else subobjects
    res = SuiteResult("negation-failures", L.name or "lattice")
    searches = [
        ("heyting excluded middle fails somewhere", find_heyting_lem_failure(P, subs)),
        ("co-heyting class excluded middle fails somewhere",
         find_class_lem_failure(P, "coheyting", subs)),
        ("co-heyting negation is paraconsistent somewhere",
         find_coheyting_paraconsistency(P, subs)),
        ("upper adjoint misses a join somewhere", find_adjoint_join_failure(P, subs)),
    ]
    for name, witness in searches:
        res.clauses.append(Clause(name, witness is not None, len(subs), witness, kind="search"))
    res.add("co-heyting excluded middle", ((S,) for S in subs),
            lambda S: (S | coheyting_not(S)).is_top(), lambda S: _sub(S))
    for name, other in (("star equals heyting negation", heyting_not),
                        ("star equals co-heyting negation", coheyting_not)):
        res.add(name, ((S,) for S in subs), lambda S, other=other: star(S) == other(S),
                lambda S: _sub(S))
        res.clauses[-1].kind = "info"
    return res


SUITES = {
    "daseinisation": lambda P, **kw: daseinisation_laws(P),
    "adjoint": adjoint_laws,
    "quotient": lambda P, **kw: quotient_iso(P),
    "class-section": lambda P, **kw: class_section(P),
    "top-class": lambda P, **kw: top_class(P),
    "star": star_laws,
    "negation-failures": lambda P, **kw: negation_failures(P),
}


def run_suites(P, which="all", seed=0):
    names = list(SUITES) if which == "all" else [which]
    out = []
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
        fn = SUITES[name]
        out.append(fn(P, seed=seed) if name in ("adjoint", "star") else fn(P))
    return out


def replay_witness(witness, P):
    """Re-check a stored search witness; True when it still demonstrates its property."""
    Q = Quotient(P)
    kind = witness["property"]
    if kind == "heyting-lem":
        S = P.from_fiber_masks(witness["subobject"])
        return not (S | heyting_not(S)).is_top()
    if kind.endswith("-class-lem"):
        neg = {"coheyting": coheyting_not, "heyting": heyting_not, "star": star}[
            kind[:-len("-class-lem")]]
        S = P.from_fiber_masks(witness["subobject"])
        return Q.join(Q.class_of(neg(S)), Q.class_of(S)) != Q.top_class
    if kind == "coheyting-contradiction":
        S = P.from_fiber_masks(witness["subobject"])
        return not (S & coheyting_not(S)).is_bottom()
    if kind == "adjoint-join":
        S, T = (P.from_fiber_masks(m) for m in witness["subobjects"])
        L = P.lattice
        return upper_adjoint(S | T) != L.join(upper_adjoint(S), upper_adjoint(T))
    if kind == "star-strict":
        d = daseinise(P, P.lattice.idx(witness["element"]))
        return not (d & star(d)).is_bottom()
    raise ValueError(f"unknown witness kind {kind!r}")
