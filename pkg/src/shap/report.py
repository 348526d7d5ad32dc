"""Attribution reports, weight modes and their tabular / JSON views."""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Sequence, Tuple

import polars as pl

from src.utils.exceptions import ContractError


class WeightMode(str, Enum):
    """Coefficients combining the per-hash-count terms into a score."""

    # 1/m on m = 1..n-1 hashes
    PAPER_LITERAL = "paper"
    # 1/(n-m) on m = 0..n-1 hashes: the classical Shapley kernel
    CLASSIC_SHAPLEY = "classic"

    @classmethod
    def parse(cls, value) -> 'WeightMode':
        if isinstance(value, WeightMode):
            return value
        try:
            return cls(str(value).lower())
        except ValueError as e:
            raise ContractError(f"Unknown weight mode {value!r}; expected 'paper' or 'classic'") from e


def mode_coefficients(mode: WeightMode, n: int) -> Dict[int, float]:
    """Coefficient per hash count m, in ascending m."""
    if n < 1:
        raise ContractError(f"Instance length must be >= 1, got {n}")
    if mode is WeightMode.PAPER_LITERAL:
        return {m: 1.0 / m for m in range(1, n)}
    return {m: 1.0 / (n - m) for m in range(n)}


def combine_terms(mode: WeightMode, n: int, terms: Sequence[Tuple[int, float, float]]) -> float:
    """Weighted sum of (m, shap1, shap2) terms, accumulated in ascending m."""
    coefficients = mode_coefficients(mode, n)
    score = 0.0
    for m, first, second in sorted(terms):
        score += coefficients[m] * (first - second)
    return score


Term = Tuple[int, float, float]


@dataclass(frozen=True)
class ShapReport:
    word: Tuple[str, ...]
    position: int
    score: float
    mode: WeightMode
    per_k_terms: Optional[Tuple[Term, ...]] = None
    value: Optional[float] = None
    baseline: Optional[float] = None

    @property
    def instance(self) -> str:
        return "".join(self.word) if all(len(s) == 1 for s in self.word) else " ".join(self.word)

    def recombine(self) -> float:
        """Score rebuilt from the recorded terms."""
        if self.per_k_terms is None:
            raise ContractError("Report was produced without per-k terms")
        return combine_terms(self.mode, len(self.word), self.per_k_terms)

    def to_dict(self, include_terms: bool = False) -> dict:
        entry = {"position": self.position, "score": self.score}
        if include_terms and self.per_k_terms is not None:
            entry["terms"] = [{"k": m, "shap1": first, "shap2": second} for m, first, second in self.per_k_terms]
        return entry


def reports_to_document(
    reports: Sequence[ShapReport],
    include_terms: bool = False,
    verify: Optional[dict] = None,
) -> dict:
    """The report JSON document for one instance."""
    if not reports:
        raise ContractError("No reports to serialize")
    first = reports[0]
    document = {
        "instance": first.instance,
        "mode": first.mode.value,
        "scores": [r.to_dict(include_terms) for r in sorted(reports, key=lambda r: r.position)],
    }
    if first.value is not None:
        document["value"] = first.value
    if first.baseline is not None:
        document["baseline"] = first.baseline
    if verify is not None:
        document["verify"] = verify
    return document


def reports_to_frame(reports: Sequence[ShapReport]) -> pl.DataFrame:
    """One row per report: instance, position, symbol, mode, score."""
    return pl.DataFrame(
        {
            "instance": [r.instance for r in reports],
            "position": [r.position for r in reports],
            "symbol": [r.word[r.position - 1] for r in reports],
            "mode": [r.mode.value for r in reports],
            "score": [r.score for r in reports],
        },
        schema={
            "instance": pl.Utf8,
            "position": pl.Int64,
            "symbol": pl.Utf8,
            "mode": pl.Utf8,
            "score": pl.Float64,
        },
    )
