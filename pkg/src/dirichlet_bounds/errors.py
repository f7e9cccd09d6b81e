"""
Custom error classes
"""


class DirichletBoundsError(Exception):
    pass


class ConfigError(DirichletBoundsError):
    pass


class InvalidGeometryError(DirichletBoundsError, ValueError):
    pass


class InvalidDimensionError(InvalidGeometryError):
    pass


class NonpositiveDiameterError(InvalidGeometryError):
    pass


class NonpositiveInDiameterError(InvalidGeometryError):
    pass


class NonpositiveLambdaError(InvalidGeometryError):
    pass


class NoApplicableBoundError(DirichletBoundsError):
    pass


class XiDomainError(DirichletBoundsError, ValueError):
    pass


class BadIntervalError(DirichletBoundsError, ValueError):
    pass


class NonpositiveZError(DirichletBoundsError):
    pass


class InvalidModelError(DirichletBoundsError, ValueError):
    pass


class PoleError(DirichletBoundsError, ValueError):
    pass


class WarpNotSmoothError(DirichletBoundsError):
    pass


class SolverError(DirichletBoundsError, RuntimeError):
    pass


class BracketFailureError(SolverError):
    pass


class NonconvergenceError(SolverError):
    pass


class IterationStallError(SolverError):
    pass


class IndefiniteDiscretizationError(SolverError):
    pass


class SignChangeError(SolverError):
    pass


class BoundaryValueError(SolverError):
    pass


class InvalidBError(DirichletBoundsError, ValueError):
    pass
