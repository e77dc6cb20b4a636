"""Command-line entry point.

Exit codes: 0 success, 2 invalid input or a failed check, 3 a cap was hit.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .bridge import (
    Context,
    RationalGrid,
    injectivity_experiment,
    is_dedekind_real,
    operator_to_real,
    real_to_family,
    round_trip,
    search_equality_gap,
    search_top_condition_failure,
)
from .errors import ClopenError, SizeCapExceeded
from .io import (
    dumps,
    header,
    load_experiment,
    load_lattice,
    render_text,
    resolve_caps,
)
from .lattice import enumerate_boolean_subalgebras
from .laws import SUITES, replay_witness, run_suites
from .logic import PROFILES, replay, validation_report
from .operators import eigendecompose, format_fraction, verify_family
from .presheaf import SpectralPresheaf

EXIT_OK, EXIT_INVALID, EXIT_CAP = 0, 2, 3


def _presheaf(L, caps, backend):
    poset = enumerate_boolean_subalgebras(L, cap=caps.subalgebras, lattice_cap=caps.lattice)
    return SpectralPresheaf(L, poset, backend, subobject_cap=caps.subobjects)


def cmd_lattice_check(args, caps):
    L, _ = load_lattice(args.source, caps)
    poset = enumerate_boolean_subalgebras(L, cap=caps.subalgebras, lattice_cap=caps.lattice)
    P = SpectralPresheaf(L, poset, args.backend, subobject_cap=caps.subobjects)
    try:
        count = len(P.subobjects)
    except SizeCapExceeded as exc:
        count = f"capped: {exc}"
    body = {
        "lattice": {"name": L.name, "size": len(L), "elements": list(L.elements),
                    "orthomodular": True},
        "subalgebras": {"count": len(poset.members),
                        "atoms": [[L.elements[a] for a in B.atoms] for B in poset.members]},
        "fibers": P.fiber_sizes(),
        "functoriality witness": P.check_functoriality(),
        "subobjects": count,
    }
    return body, EXIT_OK


def cmd_theorems(args, caps):
    L, _ = load_lattice(args.source, caps)
    P = _presheaf(L, caps, args.backend)
    results = run_suites(P, args.which, seed=args.seed)
    passed = all(r.passed for r in results)
    body = {"suites": [r.to_dict() for r in results], "passed": passed}
    return body, EXIT_OK if passed else EXIT_INVALID


def cmd_logic(args, caps):
    L, _ = load_lattice(args.source, caps)
    P = _presheaf(L, caps, args.backend)
    report = validation_report(P, args.profile, caps.budget, args.seed, search=args.mode)
    body = report.to_dict()
    body["summary"] = {
        kind: {status: sum(1 for e in report.entries if e.kind == kind and e.status == status)
               for status in ("valid", "counterexample", "budget-exhausted")}
        for kind in ("axiom", "rule")
    }
    return body, EXIT_OK


def _operator_block(name, op, grid, ctx):
    pairs = op if isinstance(op, list) else eigendecompose(op)
    u = operator_to_real(op, grid, ctx)
    ok, dedekind = is_dedekind_real(u)
    G = real_to_family(u, ctx)
    rt = round_trip(op, u, ctx)
    block = {
        "spectrum": [format_fraction(v) for v, _ in pairs],
        "eigenprojections": [P.label() for _, P in pairs],
        "real": u.describe(),
        "dedekind": {"ok": ok, "conditions": dedekind},
        "returned family": {"breakpoints": [format_fraction(b) for b in G.breakpoints],
                            "values": G.labels(), "conditions": verify_family(G)},
        "round trip": rt,
    }
    return block, ok and rt["holds"] and block["returned family"]["conditions"]["ok"]


def cmd_bridge(args, caps):
    exp = load_experiment(args.source)
    grid = RationalGrid(exp.grid)
    ctx = Context.generated_by(exp.generators, cap=caps.lattice, backend=args.backend)
    ctx.presheaf.subobject_cap = caps.subobjects
    profile = args.profile or exp.profile
    body = {"context": {"size": len(ctx.lattice), "elements": list(ctx.lattice.elements),
                        "fibers": ctx.presheaf.fiber_sizes()},
            "grid": grid.labels(), "profile": profile, "operators": {}}
    good = True
    for name, op in exp.operators.items():
        block, ok = _operator_block(name, op, grid, ctx)
        body["operators"][name] = block
        good = good and ok
    if "injectivity" in exp.checks:
        profiles = [profile] + [p for p in ("star", "heyting") if p != profile]
        body["injectivity"] = [
            dict(injectivity_experiment(exp.operators[a], exp.operators[b], grid, ctx, profiles),
                 pair=[a, b])
            for a, b in exp.pairs
        ]
    if "searches" in exp.checks:
        small = RationalGrid((0, 1, 2))
        gaps = {}
        for p in ("star", "heyting"):
            w, n = search_equality_gap(ctx, p, small)
            gaps[p] = {"witness": w, "pairs checked": n}
        w, n = search_top_condition_failure(ctx, small)
        body["searches"] = {"equality gap": gaps,
                            "returned family misses top": {"witness": w, "reals checked": n}}
    return body, EXIT_OK if good else EXIT_INVALID


def cmd_replay(args, caps, stored):
    source = args.source or stored["header"]["source"]
    if args.source and args.source != stored["header"]["source"]:
        raise ValueError(f"report was produced for {stored['header']['source']!r}, "
                         f"not {args.source!r}")
    L, _ = load_lattice(source, caps)
    P = _presheaf(L, caps, args.backend)
    items = []
    if args.command == "logic":
        profile = stored["body"]["profile"]
        for e in stored["body"]["entries"]:
            if e["counterexample"]:
                items.append({"id": f"{e['kind']} {e['id']}",
                              "replays": replay(e["counterexample"], P, profile)})
    else:
        for suite in stored["body"]["suites"]:
            for c in suite["clauses"]:
                w = c.get("witness")
                if isinstance(w, dict) and "property" in w:
                    items.append({"id": f"{suite['suite']}: {c['name']}",
                                  "replays": replay_witness(w, P)})
    ok = all(i["replays"] for i in items)
    return {"replayed": len(items), "ok": ok, "items": items}, EXIT_OK if ok else EXIT_INVALID


COMMANDS = {
    "lattice-check": cmd_lattice_check,
    "theorems": cmd_theorems,
    "logic": cmd_logic,
    "bridge": cmd_bridge,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="clopen", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"clopen {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--caps", help="overrides such as lattice=64,subobjects=1048576,budget=200000")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--out", help="also write the JSON report to this file")
    common.add_argument("--backend", choices=("auto", "python", "cython"), default="auto")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lattice-check", parents=[common],
                       help="validate a lattice and describe its presheaf")
    p.add_argument("source", help="JSON lattice file or generator such as mo:2")

    p = sub.add_parser("theorems", parents=[common], help="run the exhaustive law suites")
    p.add_argument("source", nargs="?")
    p.add_argument("--which", default="all", choices=sorted(SUITES) + ["all"])
    p.add_argument("--replay", metavar="REPORT", help="re-check the witnesses in a report")

    p = sub.add_parser("logic", parents=[common], help="check the axioms and rules")
    p.add_argument("source", nargs="?")
    p.add_argument("--profile", default="star", choices=sorted(PROFILES))
    p.add_argument("--mode", default="auto", choices=("auto", "exhaustive", "sampled"))
    p.add_argument("--replay", metavar="REPORT", help="re-check the counterexamples in a report")

    p = sub.add_parser("bridge", parents=[common], help="run an operator experiment file")
    p.add_argument("source")
    p.add_argument("--profile", choices=("star", "heyting", "coheyting"))
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        caps = resolve_caps(args.caps)
    except ValueError as exc:
        parser.error(str(exc))
    replaying = getattr(args, "replay", None)
    if not replaying and not args.source:
        parser.error("a lattice source is required")
    command = f"{args.command} replay" if replaying else args.command
    extra = {k: getattr(args, k) for k in ("which", "profile", "mode") if hasattr(args, k)}
    source = args.source
    try:
        if replaying:
            stored = json.loads(Path(replaying).read_text())
            source = source or stored["header"]["source"]
            extra.update({k: stored["header"][k] for k in ("which", "profile", "mode")
                          if k in stored["header"]})
            body, code = cmd_replay(args, caps, stored)
        else:
            body, code = COMMANDS[args.command](args, caps)
    except SizeCapExceeded as exc:
        body, code = _error(exc), EXIT_CAP
    except (ClopenError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        body, code = _error(exc), EXIT_INVALID
    report = {"header": header(__version__, command, source, args.seed, caps, extra),
              "body": body, "exit": code}
    text = dumps(report)
    if args.out:
        Path(args.out).write_text(text)
    sys.stdout.write(text if args.json else render_text(report))
    return code


def _error(exc):
    return {"error": {"type": type(exc).__name__, "message": str(exc),
                      "witness": getattr(exc, "witness", None)}}


if __name__ == "__main__":
    sys.exit(main())
