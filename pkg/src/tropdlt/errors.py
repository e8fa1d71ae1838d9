"""Exception hierarchy.  Every error raised on purpose derives from TropError."""


class TropError(Exception):
    pass


class ZeroVector(TropError, ValueError):
    pass


class EmptyPolyhedron(TropError, ValueError):
    pass


class UnboundedInput(TropError, ValueError):
    pass


class NotPointed(TropError, ValueError):
    pass


class NotFullDimensional(TropError, ValueError):
    pass


class NotConvex(TropError, ValueError):
    def __init__(self, message, wall=None):
        super().__init__(message)
        self.wall = wall


class DegenerateInput(TropError, ValueError):
    pass


class InvalidManifold(TropError, ValueError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NoIsomorphism(TropError):
    pass


class PreconditionFailed(TropError, ValueError):
    def __init__(self, message, cell=None):
        super().__init__(message)
        self.cell = cell


class NonIntegralPolarization(TropError, ValueError):
    pass


class NotAVertex(TropError, ValueError):
    pass


class CellNotInComplex(TropError, KeyError):
    pass


class ExponentNotInvariant(TropError):
    def __init__(self, message, witnesses=None):
        super().__init__(message)
        self.witnesses = witnesses or []


class NotPolarizable(TropError):
    pass


class NoInteriorPoint(TropError, ValueError):
    pass


class RayOutsideSupport(TropError, ValueError):
    pass


class ZeroCoordinate(TropError, ValueError):
    pass


class NotStrictlyConvex(TropError, ValueError):
    pass


class DimensionTooHigh(TropError, ValueError):
    pass


class SchemaError(TropError, ValueError):
    pass
