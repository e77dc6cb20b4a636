"""Clopen subobjects of the spectral presheaf of a finite orthomodular lattice.

Daseinisation and its upper adjoint, the star negation, an algebraic model
checker for the resulting logics, and a bridge from exact rational
self-adjoint matrices to real-number names over the subobject algebra.
"""
__version__ = "0.1.0"

from .bridge import (
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
)
from .daseinisation import (
    Quotient,
    class_of_element,
    class_to_subobject,
    daseinise,
    element_of_class,
    star,
    star_implies,
    upper_adjoint,
)
from .errors import *  # noqa: F401,F403
from .lattice import (
    OrthomodularLattice,
    build_lattice,
    enumerate_boolean_subalgebras,
    make_boolean,
    make_mo,
)
from .logic import check_axiom, check_rule, evaluate, parse, validation_report
from .operators import (
    Projection,
    RationalMatrix,
    SpectralFamily,
    eigendecompose,
    generate_oml,
    spectral_family,
    verify_family,
)
from .presheaf import (
    ClopenSubobject,
    SpectralPresheaf,
    coheyting_not,
    enumerate_subobjects,
    heyting_implies,
    heyting_not,
    spectral_presheaf,
)
