"""Exception hierarchy shared by every module."""


class MoriDreamError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(MoriDreamError, ValueError):
    pass


class RankDeficient(MoriDreamError, ValueError):
    pass


class EmptyInput(MoriDreamError, ValueError):
    pass


class Unbounded(MoriDreamError):
    """Lattice points were requested for a polyhedron with a nonzero recession cone."""


class BudgetExceeded(MoriDreamError):
    pass


class NoProjectiveModel(MoriDreamError):
    """No full-dimensional chamber lies inside the movable cone."""


class NotAFacet(MoriDreamError, ValueError):
    pass


class InternalInconsistency(MoriDreamError):
    """Two independent computations disagreed; always a bug or an unsupported input."""


class AmpleNotInterior(MoriDreamError, ValueError):
    pass


class NotContractible(MoriDreamError, ValueError):
    pass


class NotAFaceOfNefCone(MoriDreamError, ValueError):
    pass


class NonIntegralLift(MoriDreamError, ValueError):
    pass


class NotEffective(MoriDreamError, ValueError):
    pass


class NotBig(MoriDreamError, ValueError):
    pass


class InvariantViolation(MoriDreamError, ValueError):
    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


class ParseError(MoriDreamError, ValueError):
    def __init__(self, message, location=None):
        super().__init__(message if location is None else f"{location}: {message}")
        self.location = location
