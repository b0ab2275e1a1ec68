"""Exception hierarchy shared by all modules."""


class TopologyError(Exception):
    """Base class for every error raised by plsphere."""


class InvalidInput(TopologyError, ValueError):
    pass


class DuplicateVertexInCell(InvalidInput):
    pass


class MixedAmbientDim(InvalidInput):
    pass


class MissingCoordinates(InvalidInput):
    pass


class ZeroDimCell(InvalidInput):
    pass


class BadDimension(InvalidInput):
    pass


class CellNotInComplex(TopologyError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class VertexNotInComplex(CellNotInComplex):
    pass


class SurfaceError(TopologyError):
    """A candidate separating cycle failed one of its structural checks."""


class NotClosed(SurfaceError):
    pass


class NotConnected(SurfaceError):
    pass


class NotOrientable(SurfaceError):
    pass


class NotASphere(SurfaceError):
    pass


class NotTwoComponents(TopologyError):
    def __init__(self, message, n_components):
        super().__init__(message)
        self.n_components = n_components


class NotLocalizedDifference(TopologyError):
    pass


class BudgetExhausted(TopologyError):
    """The contraction search stopped without reaching a terminal curve.

    This is never a proof of non-contractibility. ``space_exhausted`` is True
    when every curve reachable by simple single-cell moves was expanded before
    the budget ran out.
    """

    def __init__(self, message, expanded, space_exhausted=False):
        super().__init__(message)
        self.expanded = expanded
        self.space_exhausted = space_exhausted


class BasePointOnWrongSide(InvalidInput):
    pass


class NoFreeEdgeCorridor(TopologyError):
    pass


class NonSimpleOutputCurve(TopologyError):
    pass


class UnsupportedDimension(TopologyError):
    pass


class ProjectionRepairFailed(TopologyError):
    """Two consecutive projected curves could not be joined by simple moves."""


class OriginInFirstCell(InvalidInput):
    pass


class ParseError(InvalidInput):
    def __init__(self, message, line, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnknownVertex(InvalidInput):
    pass


class SubsetCellNotInComplex(InvalidInput):
    pass


class IoError(TopologyError, OSError):
    pass
