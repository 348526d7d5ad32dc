"""Configuration management package."""

from .settings import (
    ApplicationConfig,
    EngineConfig,
    OracleConfig,
    VerificationConfig,
    DEFAULT_CONFIG,
)

__all__ = [
    'ApplicationConfig',
    'EngineConfig',
    'OracleConfig',
    'VerificationConfig',
    'DEFAULT_CONFIG',
]
