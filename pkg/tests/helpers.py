"""Shared fixture lattices, cached per session."""
from functools import lru_cache

from clopen.lattice import make_boolean, make_mo
from clopen.operators import Projection, generate_oml
from clopen.presheaf import spectral_presheaf


def plane_mo2():
    """MO2 realised by two non-orthogonal lines in the rational plane."""
    return generate_oml([Projection.span([[1, 0]], 2), Projection.span([[1, 1]], 2)],
                        name="q2-lines")


@lru_cache(maxsize=None)
def lattice(name):
    if name == "q2-lines":
        return plane_mo2().lattice
    kind, _, n = name.partition(":")
    return make_mo(int(n)) if kind == "mo" else make_boolean(int(n))


@lru_cache(maxsize=None)
def presheaf(name, backend="auto"):
    return spectral_presheaf(lattice(name), backend=backend)


FIXTURES = ["mo:2", "mo:3", "boolean:2", "boolean:3", "q2-lines"]
