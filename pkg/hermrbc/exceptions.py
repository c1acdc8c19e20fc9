# -*- coding: utf-8 -*-


class NumericsException(Exception):
    """Base numerics exception."""


class NotHermitian(NumericsException):
    """Matrix is not Hermitian within tolerance exception."""

    def __init__(self, asymmetry: float, message: str):
        self.asymmetry = asymmetry
        self.message = message
        super().__init__(self.message)


class NotPositiveDefinite(NumericsException):
    """Matrix is not positive definite exception."""

    def __init__(self, eigenvalue: float, message: str):
        self.eigenvalue = eigenvalue
        self.message = message
        super().__init__(self.message)


class ModuleException(Exception):
    """Base module exception."""


class ExpressionError(ModuleException):
    """Base expression exception."""


class ExpressionSyntaxError(ExpressionError):
    """Expression syntax exception."""

    def __init__(self, position: int, message: str):
        self.position = position
        self.message = message
        super().__init__(f"{self.message} at position {self.position}")


class VariableIndexError(ExpressionError):
    """Variable index out of range exception."""


class UnknownParameter(ExpressionError):
    """Unknown parameter exception."""


class EvaluationError(ModuleException):
    """Expression evaluation exception."""

    def __init__(self, subexpression: str, message: str):
        self.subexpression = subexpression
        self.message = message
        super().__init__(f"{self.message}: {self.subexpression}")


class MetricError(ModuleException):
    """Base metric exception."""


class UnknownMetric(MetricError):
    """Unknown catalog metric exception."""


class ParameterError(MetricError):
    """Metric parameter out of range exception."""


class NonRealDiagonal(MetricError):
    """Metric diagonal entry is not real valued exception."""


class MetricFileError(MetricError):
    """Metric or map file exception."""

    def __init__(self, orig: Exception, message: str):
        self.orig = orig
        self.message = message
        super().__init__(self.message)


class RegionError(ModuleException):
    """Sampling region exceeds validity radius exception."""


class FrameMismatch(ModuleException):
    """Tensor and frame refer to different frames exception."""


class InvalidDirection(ModuleException):
    """Direction is not a normalized PSD Hermitian matrix exception."""


class DegenerateDirection(ModuleException):
    """Direction has vanishing norm exception."""


class DimensionMismatch(ModuleException):
    """Incompatible dimensions exception."""


class NonHolomorphicMap(ModuleException):
    """Map component contains conjugated variables exception."""


class NoApplicableBound(ModuleException):
    """No supremum bound applies to the given constants exception."""


class ConfigError(ModuleException):
    """Invalid run configuration exception."""


class FileIOError(ModuleException):
    """File IO exception."""


class UnsupportedOutput(ModuleException):
    """Unsupported output type exception."""


class UnsupportedExtension(ModuleException):
    """Unsupported pandas extension exception."""


class JSONEncodeError(ModuleException):
    """JSON encoding exception."""

    def __init__(self, orig: Exception, message: str):
        self.orig = orig
        self.message = message
        super().__init__(self.message)


class PandasRuntimeError(ModuleException):
    """Pandas runtime exception."""

    def __init__(self, orig: Exception, message: str):
        self.orig = orig
        self.message = message
        super().__init__(self.message)


class BackendException(Exception):
    """Base backend exception."""


class UnknownBackend(BackendException):
    """Unknown backend exception."""


class ImproperBackend(BackendException):
    """Improper backend exception."""
