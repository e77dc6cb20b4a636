"""Algebraic model checking of propositional/quantified schemata over clopen subobjects.

A formula is *valid* on a presheaf when every valuation of its variables by
clopen subobjects evaluates it to the top subobject; a rule is valid when
every valuation making all premises top also makes the conclusion top.
Universal quantifiers are finite meets over a declared domain of
subobjects (``all`` = every enumerated subobject).

Syntax: variables are identifiers, connectives ``~ & | ->`` (tightest
first, ``->`` associates to the right), ``x = y`` for name equality and
``forall x . body`` / ``forall x in tag . body`` for quantification.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from itertools import product

from . import kernels
from .daseinisation import star, star_implies
from .errors import FormulaSyntaxError, SizeCapExceeded, UnboundVariable
from .presheaf import (
    ClopenSubobject,
    coheyting_not,
    heyting_implies,
    heyting_not,
)

DEFAULT_BUDGET = 200_000
SAMPLED_DOMAIN_SIZE = 32


# -- formulas -----------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Not:
    arg: object

    def __str__(self):
        return f"~{_wrap(self.arg, 4)}"


@dataclass(frozen=True)
class And:
    left: object
    right: object

    def __str__(self):
        return f"{_wrap(self.left, 3)} & {_wrap(self.right, 3.5)}"


@dataclass(frozen=True)
class Or:
    left: object
    right: object

    def __str__(self):
        return f"{_wrap(self.left, 2)} | {_wrap(self.right, 2.5)}"


@dataclass(frozen=True)
class Imp:
    left: object
    right: object

    def __str__(self):
        return f"{_wrap(self.left, 1.5)} -> {_wrap(self.right, 1)}"


@dataclass(frozen=True)
class Forall:
    var: str
    body: object
    domain: str = "all"

    def __str__(self):
        tag = "" if self.domain == "all" else f" in {self.domain}"
        return f"forall {self.var}{tag} . {self.body}"


@dataclass(frozen=True)
class Eq:
    left: str
    right: str

    def __str__(self):
        return f"{self.left} = {self.right}"


_PREC = {Var: 5, Eq: 5, Not: 4, And: 3, Or: 2, Imp: 1, Forall: 0}


def _wrap(f, level):
    s = str(f)
    return f"({s})" if _PREC[type(f)] < level else s


_TOKEN = re.compile(r"\s*(->|[&|~().=]|[A-Za-z_][A-Za-z0-9_']*)")


def _tokenize(text):
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}", pos)
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise FormulaSyntaxError(f"expected {expected or 'a token'}, got {tok!r}", self.pos)
        self.pos += 1
        return tok

    def ident(self):
        tok = self.take()
        if not re.match(r"[A-Za-z_]", tok) or tok in ("forall", "in"):
            raise FormulaSyntaxError(f"expected an identifier, got {tok!r}", self.pos)
        return tok

    def formula(self):
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Imp(left, self.formula())
        return left

    def disj(self):
        f = self.conj()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        if self.peek() == "~":
            self.take()
            return Not(self.unary())
        return self.atom()

    def atom(self):
        tok = self.peek()
        if tok == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if tok == "forall":
            self.take()
            var = self.ident()
            domain = "all"
            if self.peek() == "in":
                self.take()
                domain = self.ident()
            self.take(".")
            return Forall(var, self.formula(), domain)
        name = self.ident()
        if self.peek() == "=":
            self.take()
            return Eq(name, self.ident())
        return Var(name)


def parse(text):
    p = _Parser(text)
    f = p.formula()
    if p.peek() is not None:
        raise FormulaSyntaxError(f"trailing input at token {p.peek()!r}", p.pos)
    return f


def free_vars(f, bound=frozenset()):
    if isinstance(f, Var):
        return set() if f.name in bound else {f.name}
    if isinstance(f, Eq):
        return {v for v in (f.left, f.right) if v not in bound}
    if isinstance(f, Not):
        return free_vars(f.arg, bound)
    if isinstance(f, Forall):
        return free_vars(f.body, bound | {f.var})
    return free_vars(f.left, bound) | free_vars(f.right, bound)


def substitute(f, name, new):
    """Replace free occurrences of variable ``name`` by variable ``new``."""
    if isinstance(f, Var):
        return Var(new) if f.name == name else f
    if isinstance(f, Eq):
        return Eq(new if f.left == name else f.left, new if f.right == name else f.right)
    if isinstance(f, Not):
        return Not(substitute(f.arg, name, new))
    if isinstance(f, Forall):
        return f if f.var == name else Forall(f.var, substitute(f.body, name, new), f.domain)
    return type(f)(substitute(f.left, name, new), substitute(f.right, name, new))


# -- semantics ----------------------------------------------------------------

@dataclass(frozen=True)
class Profile:
    name: str
    negation: str
    implication: str
    designated: str = "top"


PROFILES = {
    "star": Profile("star", "star", "star"),
    "heyting": Profile("heyting", "heyting", "heyting"),
    "coheyting": Profile("coheyting", "coheyting", "co"),
}

_NEG_KIND = {"heyting": kernels.HEYTING, "coheyting": kernels.COHEYTING, "star": kernels.STAR}
_IMP_KIND = {"heyting": kernels.HEYTING, "co": kernels.COHEYTING, "star": kernels.STAR}


def get_profile(profile):
    if isinstance(profile, Profile):
        return profile
    try:
        return PROFILES[profile]
    except KeyError:
        raise ValueError(f"unknown profile {profile!r}; choose from {sorted(PROFILES)}") from None


def _negate(S, kind):
    if kind == "heyting":
        return heyting_not(S)
    if kind == "coheyting":
        return coheyting_not(S)
    return star(S)


def _implies(S, T, kind):
    if kind == "heyting":
        return heyting_implies(S, T)
    if kind == "co":
        return coheyting_not(S) | T
    return star_implies(S, T)


def _domain(P, tag, domains):
    if domains and tag in domains:
        return domains[tag]
    if tag == "all":
        return P.subobjects
    raise UnboundVariable(f"no domain declared for tag {tag!r}", tag)


def evaluate(formula, valuation, profile="star", domains=None, presheaf=None):
    """Tree-walking evaluator; the reference semantics."""
    if isinstance(formula, str):
        formula = parse(formula)
    prof = get_profile(profile)
    P = presheaf
    if P is None:
        if not valuation:
            raise ValueError("pass presheaf= when the valuation is empty")
        P = next(iter(valuation.values())).presheaf

    def ev(f, env):
        if isinstance(f, Var):
            if f.name not in env:
                raise UnboundVariable(f"variable {f.name!r} has no value", f.name)
            return env[f.name]
        if isinstance(f, Eq):
            for v in (f.left, f.right):
                if v not in env:
                    raise UnboundVariable(f"variable {v!r} has no value", v)
            return P.top() if env[f.left] == env[f.right] else P.bottom()
        if isinstance(f, Not):
            return _negate(ev(f.arg, env), prof.negation)
        if isinstance(f, And):
            return ev(f.left, env) & ev(f.right, env)
        if isinstance(f, Or):
            return ev(f.left, env) | ev(f.right, env)
        if isinstance(f, Imp):
            return _implies(ev(f.left, env), ev(f.right, env), prof.implication)
        acc = P.top()
        for d in _domain(P, f.domain, domains):
            acc = acc & ev(f.body, {**env, f.var: d})
        return acc

    return ev(formula, dict(valuation))


# -- compiled programs ----------------------------------------------------------

@dataclass
class Program:
    code: list = field(default_factory=list)
    arg: list = field(default_factory=list)
    arg2: list = field(default_factory=list)
    consts: list = field(default_factory=list)

    def emit(self, op, a=0, b=0):
        self.code.append(op)
        self.arg.append(a)
        self.arg2.append(b)


def compile_formula(formula, columns, P, domains=None):
    """Postfix program over valuation ``columns``; quantifiers are unrolled."""
    prog = Program()
    const_index = {}

    def const(mask):
        if mask not in const_index:
            const_index[mask] = len(prog.consts)
            prog.consts.append(mask)
        return const_index[mask]

    def gen(f, env):
        if isinstance(f, Var):
            where = env.get(f.name)
            if where is None:
                raise UnboundVariable(f"variable {f.name!r} has no column", f.name)
            prog.emit(kernels.LOAD_VAR if where[0] == "col" else kernels.LOAD_CONST, where[1])
        elif isinstance(f, Eq):
            l, r = env.get(f.left), env.get(f.right)
            if l is None or r is None or l[0] != "col" or r[0] != "col":
                raise UnboundVariable("equality is only compiled between free variables", f)
            prog.emit(kernels.EQ, l[1], r[1])
        elif isinstance(f, Not):
            gen(f.arg, env)
            prog.emit(kernels.NEG)
        elif isinstance(f, Forall):
            dom = _domain(P, f.domain, domains)
            if not dom:
                prog.emit(kernels.LOAD_CONST, const(P.top_mask))
            for k, d in enumerate(dom):
                gen(f.body, {**env, f.var: ("const", const(d.mask))})
                if k:
                    prog.emit(kernels.AND)
        else:
            gen(f.left, env)
            gen(f.right, env)
            prog.emit({And: kernels.AND, Or: kernels.OR, Imp: kernels.IMP}[type(f)])

    gen(formula, {name: ("col", i) for i, name in enumerate(columns)})
    return prog


def run_program(prog, vals, nvars, P, profile):
    """Evaluate ``prog`` on a flat row-major list of masks; returns one mask per row."""
    prof = get_profile(profile)
    t = P.tables
    c = P.compiled
    return P.kernels.eval_program(
        kernels.word_array(prog.code, c), kernels.word_array(prog.arg, c),
        kernels.word_array(prog.arg2, c), kernels.mask_array(prog.consts, c),
        kernels.mask_array(vals, c), nvars, t.down, t.delta, t.join, t.n, t.bottom,
        t.ortho, t.top, _NEG_KIND[prof.negation], _IMP_KIND[prof.implication])


# -- schemata -------------------------------------------------------------------

TEMPLATES = ("x", "~x", "x & q", "x | q", "q -> x", "x -> q", "~(x -> q)", "~~x")


def _instances(text):
    """Expand ``F`` in a schema into each template in ``x`` (``F[y]``: x renamed)."""
    if "F" not in text:
        return [text]
    out = []
    for t in TEMPLATES:
        f = parse(t)
        renamed = str(substitute(f, "x", "y"))
        out.append(text.replace("F[y]", f"({renamed})").replace("F", f"({t})"))
    return out


AXIOMS = {
    "1": "p -> p",
    "2a": "p & q -> p",
    "2b": "p & q -> q",
    "3": "p & (q | r) -> (p & q) | (p & r)",
    "4": "(p -> q) & (q -> r) -> (p -> r)",
    "5": "(p -> q) & (p -> r) -> (p -> q & r)",
    "6": "(p -> ~q) -> (q -> ~p)",
    "7": "~~q -> q",
    "8": "p | ~p",
    "9": "(forall x . F) -> F[y]",
    "10": "(forall x . p -> F) -> (p -> forall x . F)",
    "11": "(forall x . p | F) -> (p | forall x . F)",
}

RULES = {
    "1": (("p", "q"), "p & q"),
    "2": (("p", "p -> q"), "q"),
    "3": (("p", "~q"), "~(p -> q)"),
    "4": (("p -> q", "r -> s"), "(q -> r) -> (p -> s)"),
    "5": ((), "p -> forall x . p"),
    "6": (("x = y",), "F -> F[y]"),
}


def axiom_ids():
    return list(AXIOMS)


def _normalize_axiom_id(ident):
    ident = str(ident)
    if ident == "2":
        raise ValueError("axiom 2 has two parts; use '2a' or '2b'")
    if ident not in AXIOMS:
        raise ValueError(f"unknown axiom {ident!r}")
    return ident


def _normalize_rule_id(ident):
    ident = str(ident)
    if ident not in RULES:
        raise ValueError(f"unknown rule {ident!r}")
    return ident


# -- reports ----------------------------------------------------------------------

@dataclass
class Entry:
    kind: str
    id: str
    schema: str
    status: str  # valid | counterexample | budget-exhausted
    mode: dict
    checked: int
    counterexample: dict | None = None

    def to_dict(self):
        return {
            "kind": self.kind, "id": self.id, "schema": self.schema, "status": self.status,
            "mode": self.mode, "checked": self.checked, "counterexample": self.counterexample,
        }


@dataclass
class ValidationReport:
    lattice: str
    profile: str
    entries: list
    notes: list = field(default_factory=list)
    comparison: dict = field(default_factory=dict)

    def entry(self, kind, ident):
        return next(e for e in self.entries if e.kind == kind and e.id == str(ident))

    def to_dict(self):
        return {
            "lattice": self.lattice, "profile": self.profile,
            "entries": [e.to_dict() for e in self.entries],
            "notes": list(self.notes), "comparison": self.comparison,
        }


def _random_subobject(P, rng):
    seeds = rng.getrandbits(P.npoints) if P.npoints else 0
    return ClopenSubobject(P, P.kernels.down_close(seeds, P.down))


def valuation_pool(P, seed=0, notes=None):
    """(subobjects, mode): all subobjects if enumerable, else a seeded sample."""
    try:
        return P.subobjects, None
    except SizeCapExceeded as exc:
        rng = random.Random(f"pool:{seed}")
        seen = {0: P.bottom(), P.top_mask: P.top()}
        while len(seen) < SAMPLED_DOMAIN_SIZE:
            S = _random_subobject(P, rng)
            seen.setdefault(S.mask, S)
        if notes is not None:
            notes.append(f"subobject enumeration capped ({exc}); "
                         f"using a seeded sample of {SAMPLED_DOMAIN_SIZE}")
        return sorted(seen.values(), key=lambda S: (bin(S.mask).count("1"), S.mask)), "sampled"


def serialize(S):
    return S.fiber_masks()


def _check(kind, ident, schema, premises, conclusion, P, profile, budget, seed, pool,
           pool_mode, search="auto", chunk=1 << 15):
    prof = get_profile(profile)
    domains = {"all": pool}
    masks = [S.mask for S in pool]
    checked = 0
    exhaustive = True
    for k, text in enumerate(_instances(conclusion) if "F" in conclusion else [conclusion]):
        concl = parse(text)
        prem = [parse(_instances(p)[k] if "F" in p else p) for p in premises]
        cols = sorted(set().union(free_vars(concl), *[free_vars(p) for p in prem]))
        progs = [compile_formula(f, cols, P, domains) for f in prem + [concl]]
        total = len(masks) ** len(cols)
        if search == "exhaustive" and total > budget:
            raise SizeCapExceeded(f"{kind} {ident} needs {total} valuations, budget is {budget}",
                                  total)
        full = total <= budget and search != "sampled"
        if full:
            rows = product(range(len(masks)), repeat=len(cols))
            count = total
        else:
            exhaustive = False
            rng = random.Random(f"{seed}:{kind}:{ident}:{k}")
            rows = (tuple(rng.randrange(len(masks)) for _ in cols) for _ in range(budget))
            count = budget
        done = 0
        while done < count:
            batch = []
            for _ in range(min(chunk, count - done)):
                batch.append(next(rows))
            flat = [masks[i] for row in batch for i in row]
            nv = len(cols)
            results = [run_program(pr, flat, nv, P, prof) for pr in progs]
            top = P.top_mask
            for r, row in enumerate(batch):
                if all(res[r] == top for res in results[:-1]) and results[-1][r] != top:
                    valuation = {c: serialize(pool[i]) for c, i in zip(cols, row)}
                    ce = {
                        "instance": text,
                        "premises": [str(p) for p in prem],
                        "valuation": valuation,
                        "value": serialize(ClopenSubobject(P, int(results[-1][r]))),
                    }
                    mode = {"search": "exhaustive" if full else "sampled",
                            "seed": seed, "pool": pool_mode or "all"}
                    return Entry(kind, ident, schema, "counterexample", mode,
                                 checked + r + 1, ce)
            done += len(batch)
            checked += len(batch)
    exhaustive = exhaustive and pool_mode is None
    mode = {"search": "exhaustive" if exhaustive else "sampled", "seed": seed,
            "pool": pool_mode or "all"}
    return Entry(kind, ident, schema, "valid" if exhaustive else "budget-exhausted", mode, checked)


def check_axiom(ident, P, profile="star", budget=DEFAULT_BUDGET, seed=0, notes=None,
                search="auto"):
    """``search`` is auto (exhaustive within budget), exhaustive or sampled."""
    ident = _normalize_axiom_id(ident)
    pool, pool_mode = valuation_pool(P, seed, notes)
    schema = AXIOMS[ident]
    return _check("axiom", ident, schema, (), schema, P, profile, budget, seed, pool, pool_mode,
                  search)


def check_rule(ident, P, profile="star", budget=DEFAULT_BUDGET, seed=0, notes=None,
               search="auto"):
    ident = _normalize_rule_id(ident)
    pool, pool_mode = valuation_pool(P, seed, notes)
    premises, conclusion = RULES[ident]
    schema = ", ".join(premises) + " |- " + conclusion
    return _check("rule", ident, schema, premises, conclusion, P, profile, budget, seed,
                  pool, pool_mode, search)


def replay(counterexample, P, profile="star"):
    """Re-evaluate a stored counterexample with the tree evaluator.

    Returns True when the premises are still top and the conclusion
    reproduces the recorded value bit for bit.
    """
    val = {k: P.from_fiber_masks(v) for k, v in counterexample["valuation"].items()}
    for text in counterexample.get("premises", []):
        if not evaluate(text, val, profile, presheaf=P).is_top():
            return False
    value = evaluate(counterexample["instance"], val, profile, presheaf=P)
    return value.fiber_masks() == list(counterexample["value"])


def validation_report(P, profile="star", budget=DEFAULT_BUDGET, seed=0, compare=True,
                      search="auto"):
    """Every axiom and rule under ``profile``, plus a co-Heyting comparison."""
    from .laws import find_class_lem_failure

    notes = []
    entries = [check_axiom(a, P, profile, budget, seed, notes, search) for a in AXIOMS]
    entries += [check_rule(r, P, profile, budget, seed, notes, search) for r in RULES]
    report = ValidationReport(P.lattice.name or "lattice", get_profile(profile).name,
                              entries, sorted(set(notes)))
    if compare:
        co = check_axiom("8", P, "coheyting", budget, seed)
        witness = find_class_lem_failure(P, negation="coheyting")
        report.comparison = {
            "coheyting_excluded_middle": co.status,
            "coheyting_class_excluded_middle_failure": witness,
        }
    return report
