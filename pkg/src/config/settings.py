"""Application settings for the attribution engine, oracles and verification runs."""

import os
from dataclasses import dataclass, field

from src.utils.exceptions import ConfigurationError

ARITHMETIC_MODES = ("float64", "exact")


@dataclass(frozen=True)
class EngineConfig:
    # composite dimension above which operator constructors refuse to build matrices
    materialize_limit: int = 10_000
    # 0 = let the executor pick
    threads: int = 0
    record_terms: bool = True

    def __post_init__(self):
        if self.materialize_limit < 1:
            raise ConfigurationError("materialize_limit must be positive")
        if self.threads < 0:
            raise ConfigurationError("threads must be >= 0 (0 = auto)")


@dataclass(frozen=True)
class OracleConfig:
    max_word_length: int = 12
    max_variables: int = 12
    max_table_size: int = 10**6
    arithmetic: str = "float64"

    def __post_init__(self):
        if min(self.max_word_length, self.max_variables, self.max_table_size) < 1:
            raise ConfigurationError("oracle caps must be positive")
        if self.arithmetic not in ARITHMETIC_MODES:
            raise ConfigurationError(
                f"arithmetic must be one of {ARITHMETIC_MODES}, got {self.arithmetic!r}"
            )


@dataclass(frozen=True)
class VerificationConfig:
    tolerance: float = 1e-8


@dataclass(frozen=True)
class ApplicationConfig:
    engine: EngineConfig = field(default_factory=EngineConfig)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    verification: VerificationConfig = field(default_factory=VerificationConfig)

    @staticmethod
    def create_default() -> 'ApplicationConfig':
        return ApplicationConfig()

    @staticmethod
    def create_from_environment() -> 'ApplicationConfig':
        """Build a configuration from SHAP_MARKOV_* environment variables."""
        try:
            engine = EngineConfig(
                materialize_limit=int(os.environ.get("SHAP_MARKOV_MATERIALIZE_LIMIT", 10_000)),
                threads=int(os.environ.get("SHAP_MARKOV_THREADS", 0)),
            )
            cap = int(os.environ.get("SHAP_MARKOV_ORACLE_CAP", 12))
            oracle = OracleConfig(
                max_word_length=cap,
                max_variables=cap,
                arithmetic=os.environ.get("SHAP_MARKOV_ARITHMETIC", "float64"),
            )
            verification = VerificationConfig(
                tolerance=float(os.environ.get("SHAP_MARKOV_TOLERANCE", 1e-8)),
            )
        except ValueError as e:
            raise ConfigurationError(f"Invalid environment setting: {e}") from e
        return ApplicationConfig(engine=engine, oracle=oracle, verification=verification)


DEFAULT_CONFIG = ApplicationConfig.create_default()
