"""Utility functions and helpers."""

from .logger import LoggerFactory, log_execution
from .exceptions import (
    ShapMarkovError,
    InputDomainError,
    ContractError,
    ConfigurationError,
    ScaleError,
    DocumentError,
    VerificationError,
)

__all__ = [
    'LoggerFactory',
    'log_execution',
    'ShapMarkovError',
    'InputDomainError',
    'ContractError',
    'ConfigurationError',
    'ScaleError',
    'DocumentError',
    'VerificationError',
]
