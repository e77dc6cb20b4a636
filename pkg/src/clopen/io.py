"""File formats and report emission.

Lattice sources are either a generator directive (``mo:2``, ``boolean:3``)
or a JSON file::

    {"name": "O6", "elements": [...], "leq": [[a, b], ...], "ortho": [[a, a'], ...]}
    {"generator": "mo:3"}
    {"generator": "projections", "projections": [<matrix>, ...], "cap": 64}

Matrices are nested row lists or ``{"dimension": n, "entries": [...]}`` with
row-major entries; every number is an int or a ``"p/q"`` string. An explicit
spectral resolution is ``{"eigenpairs": [{"value": "1", "projection": <matrix>}]}``.

An experiment file names matrices, a grid, the context generators and the
checks to run::

    {"matrices": {"A": <matrix>, "B": <matrix>}, "grid": ["0", "1", "3/2"],
     "context": "eigenprojections" | {"generators": [<matrix or name>, ...]},
     "profile": "star", "checks": ["round-trip", "injectivity"], "pairs": [["A", "B"]]}
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .lattice import (
    DEFAULT_LATTICE_CAP,
    DEFAULT_SUBALGEBRA_CAP,
    build_lattice,
    make_boolean,
    make_mo,
)
from .logic import DEFAULT_BUDGET
from .operators import Projection, RationalMatrix, eigendecompose, eigenpairs, generate_oml
from .presheaf import DEFAULT_SUBOBJECT_CAP

SCHEMA = "clopen.report.v1"
CAPS_ENV = "CLOPEN_CAPS"


# -- caps ---------------------------------------------------------------------------

@dataclass
class Caps:
    lattice: int = DEFAULT_LATTICE_CAP
    subalgebras: int = DEFAULT_SUBALGEBRA_CAP
    subobjects: int = DEFAULT_SUBOBJECT_CAP
    budget: int = DEFAULT_BUDGET

    def update(self, text):
        """Apply ``key=value,key=value`` overrides."""
        for item in filter(None, (t.strip() for t in text.split(","))):
            key, _, value = item.partition("=")
            key = key.strip()
            if key not in self.__dataclass_fields__:
                raise ValueError(f"unknown cap {key!r}; choose from "
                                 f"{sorted(self.__dataclass_fields__)}")
            setattr(self, key, int(value))
        return self

    def to_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def resolve_caps(flag=None, environ=None):
    """Defaults, then the environment override, then the command-line flag."""
    env = os.environ if environ is None else environ
    caps = Caps()
    if env.get(CAPS_ENV):
        caps.update(env[CAPS_ENV])
    if flag:
        caps.update(flag)
    return caps


# -- matrices -------------------------------------------------------------------------

def parse_matrix(obj):
    if isinstance(obj, dict):
        n = int(obj["dimension"])
        entries = obj["entries"]
        if entries and not isinstance(entries[0], list):
            if len(entries) != n * n:
                raise ValueError(f"expected {n * n} entries, got {len(entries)}")
            entries = [entries[i * n:(i + 1) * n] for i in range(n)]
        if len(entries) != n:
            raise ValueError(f"expected {n} rows, got {len(entries)}")
        return RationalMatrix.of(entries)
    return RationalMatrix.of(obj)


def parse_operator(obj):
    """A matrix, or a validated list of (eigenvalue, projection) pairs."""
    if isinstance(obj, dict) and "eigenpairs" in obj:
        return eigenpairs([(p["value"], Projection.from_matrix(parse_matrix(p["projection"])))
                           for p in obj["eigenpairs"]])
    return parse_matrix(obj)


def spectral_projections(op):
    pairs = op if isinstance(op, list) else eigendecompose(op)
    return [P for _, P in pairs]


def matrix_to_json(M):
    return M.rows_as_strings()


# -- lattices -------------------------------------------------------------------------

def _load_json(source):
    if isinstance(source, dict):
        return source
    return json.loads(Path(source).read_text())


def load_lattice(source, caps=None):
    """Return ``(lattice, generated)``; ``generated`` is a GeneratedOML or None."""
    caps = caps or Caps()
    if isinstance(source, str) and ":" in source and not Path(source).exists():
        return _generator(source, {}, caps)
    data = _load_json(source)
    if "generator" in data:
        return _generator(data["generator"], data, caps)
    ortho = data.get("ortho")
    if isinstance(ortho, list):
        ortho = [tuple(p) for p in ortho]
    L = build_lattice(data["elements"], [tuple(p) for p in data.get("leq", [])],
                      ortho=ortho, name=data.get("name"), cap=caps.lattice)
    return L, None


def _generator(directive, data, caps):
    kind, _, arg = directive.partition(":")
    if kind == "mo":
        return make_mo(int(arg), cap=caps.lattice), None
    if kind == "boolean":
        return make_boolean(int(arg), cap=caps.lattice), None
    if kind == "projections":
        mats = [Projection.from_matrix(parse_matrix(m)) for m in data["projections"]]
        cap = min(int(data.get("cap", caps.lattice)), caps.lattice)
        gen = generate_oml(mats, cap=cap, name=data.get("name"))
        return gen.lattice, gen
    raise ValueError(f"unknown generator {directive!r}; use boolean:n, mo:n or projections")


# -- experiments ------------------------------------------------------------------------

@dataclass
class Experiment:
    operators: dict
    grid: tuple
    generators: list
    profile: str = "star"
    checks: tuple = ("dedekind", "round-trip", "injectivity")
    pairs: list = field(default_factory=list)
    name: str = "experiment"


def load_experiment(source):
    data = _load_json(source)
    ops = {k: parse_operator(v) for k, v in sorted(data["matrices"].items())}
    ctx = data.get("context", "eigenprojections")
    if ctx == "eigenprojections":
        gens = [P for op in ops.values() for P in spectral_projections(op)]
    else:
        gens = []
        for g in ctx["generators"]:
            if isinstance(g, str):
                gens += spectral_projections(ops[g])
            else:
                gens.append(Projection.from_matrix(parse_matrix(g)))
    pairs = [tuple(p) for p in data.get("pairs", [])]
    if not pairs and len(ops) >= 2 and "injectivity" in data.get("checks", ["injectivity"]):
        names = list(ops)
        pairs = [(names[0], names[1])]
    return Experiment(ops, tuple(data["grid"]), gens, data.get("profile", "star"),
                      tuple(data.get("checks", ("dedekind", "round-trip", "injectivity"))),
                      pairs, data.get("name", "experiment"))


# -- reports ----------------------------------------------------------------------------

def header(version, command, source, seed, caps, extra=None):
    h = {
        "tool": "clopen",
        "version": version,
        "schema": SCHEMA,
        "command": command,
        "source": source,
        "seed": seed,
        "caps": caps.to_dict(),
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    if extra:
        h.update(extra)
    return h


def dumps(report):
    return json.dumps(report, sort_keys=True, indent=2, default=str) + "\n"


def without_timestamp(report):
    out = dict(report)
    out["header"] = {k: v for k, v in report["header"].items() if k != "timestamp"}
    return out


def render_text(report):
    """Indented plain-text rendering of a report tree."""
    lines = []

    def walk(node, indent):
        pad = "  " * indent
        if isinstance(node, dict):
            for k in sorted(node):
                v = node[k]
                if isinstance(v, (dict, list)) and v:
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {_scalar(v)}")
        elif isinstance(node, list):
            for v in node:
                if isinstance(v, (dict, list)) and v:
                    lines.append(f"{pad}-")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}- {_scalar(v)}")
        else:
            lines.append(f"{pad}{_scalar(node)}")

    walk(report, 0)
    return "\n".join(lines) + "\n"


def _scalar(v):
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, dict)):
        return "[]" if isinstance(v, list) else "{}"
    return str(v)
