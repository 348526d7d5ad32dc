"""
Custom exception classes.
Single Responsibility: Define application-specific exceptions.
"""


class ShapMarkovError(Exception):
    """Base exception for attribution pipeline errors."""
    pass


class InputDomainError(ShapMarkovError):
    """Raised when a word or instance holds a symbol outside its alphabet."""

    def __init__(self, message: str, symbol: str = None, position: int = None):
        super().__init__(message)
        self.symbol = symbol
        self.position = position


class ContractError(ShapMarkovError):
    """Raised when an operation is called outside its precondition."""
    pass


class ConfigurationError(ShapMarkovError):
    """Raised when a distribution or setting is invalid."""
    pass


class ScaleError(ShapMarkovError):
    """Raised when an enumeration or materialization cap is exceeded."""
    pass


class DocumentError(ShapMarkovError):
    """Raised when a JSON document cannot be read or validated."""

    def __init__(self, message: str, path: str = None):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class VerificationError(ShapMarkovError):
    """Raised when engine and oracle disagree beyond tolerance."""

    def __init__(self, message: str, max_abs_dev: float = None):
        super().__init__(message)
        self.max_abs_dev = max_abs_dev
