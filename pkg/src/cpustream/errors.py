class CpuStreamError(Exception):
    """Base class for every error raised by cpustream."""


class ValidationError(CpuStreamError, ValueError):
    """Argument or data outside its documented domain."""


class ParseError(ValidationError):
    def __init__(self, message: str, line: int = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(ValidationError):
    """Invalid run configuration, unknown model name or bad hyperparameter."""


class MaseUndefinedError(ValidationError):
    """The in-sample naive MAE is zero, so MASE has no finite value."""


class NumericError(CpuStreamError, ArithmeticError):
    """A model update produced non-finite state and was rolled back."""
