"""Exception types shared across the package."""


class CxAlgebroidError(Exception):
    pass


class ParseError(CxAlgebroidError):
    pass


class DivisionByZeroExpr(CxAlgebroidError, ZeroDivisionError):
    pass


class UnknownVariable(CxAlgebroidError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class PoleAtPoint(CxAlgebroidError, ArithmeticError):
    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class ChartMismatch(CxAlgebroidError, ValueError):
    pass


class ShapeMismatch(CxAlgebroidError, ValueError):
    pass


class NonConstantRank(CxAlgebroidError):
    def __init__(self, message, points=()):
        super().__init__(message)
        self.points = tuple(points)


class InternalInconsistency(CxAlgebroidError, AssertionError):
    """Two independent verification routes disagreed."""
