"""Exception hierarchy shared by every clopen module.

Every error may carry a ``witness``: the smallest piece of data that shows
why the input was rejected (an element pair, a grid point, a factor ...).
"""


class ClopenError(Exception):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SizeCapExceeded(ClopenError):
    pass


# lattice validation
class LatticeError(ClopenError):
    pass


class NotAPoset(LatticeError):
    pass


class NotALattice(LatticeError):
    pass


class OrthoLawViolation(LatticeError):
    pass


class NotOrthomodular(LatticeError):
    pass


# presheaf / subobjects
class ElementNotInSubalgebra(ClopenError):
    pass


class ParentMismatch(ClopenError):
    pass


class NotRestrictionClosed(ClopenError):
    pass


# logic
class UnboundVariable(ClopenError):
    pass


class FormulaSyntaxError(ClopenError):
    pass


# operators
class NotHermitian(ClopenError):
    pass


class IrrationalSpectrum(ClopenError):
    pass


class NotAProjection(ClopenError):
    pass


# bridge
class GridError(ClopenError):
    pass


class GridDoesNotBracketSpectrum(GridError):
    pass


class OffGridRational(GridError):
    pass


class LambdaAboveGrid(GridError):
    pass


class GridMismatch(GridError):
    pass


class ProjectionNotInContext(ClopenError):
    pass


class ContextMismatch(ClopenError):
    pass
