"""Conjunctive clauses and disjoint DNFs over boolean variables X_1..X_N."""

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple

from src.ingestion.validator import validate_required_fields, validate_signed_literals
from src.utils.exceptions import ContractError

Literal = Tuple[int, bool]


@dataclass(frozen=True)
class Clause:
    """Conjunction of literals (variable, polarity), sorted by variable."""

    literals: Tuple[Literal, ...]

    def __post_init__(self):
        literals = tuple(sorted((int(v), bool(p)) for v, p in self.literals))
        variables = [v for v, _ in literals]
        if any(v < 1 for v in variables):
            raise ContractError(f"Variables are numbered from 1, got {variables}")
        if len(set(variables)) != len(variables):
            raise ContractError(f"Clause mentions a variable twice: {literals}")
        object.__setattr__(self, "literals", literals)

    @classmethod
    def from_signed(cls, literals: Iterable[int]) -> 'Clause':
        """DIMACS-style literals: +v for X_v, -v for not X_v."""
        return cls(tuple((abs(l), l > 0) for l in literals))

    def to_signed(self) -> List[int]:
        return [v if p else -v for v, p in self.literals]

    @property
    def variables(self) -> Tuple[int, ...]:
        return tuple(v for v, _ in self.literals)

    def evaluate(self, x: Sequence[int]) -> bool:
        return all(bool(x[v - 1]) == p for v, p in self.literals)

    def conflicts_with(self, other: 'Clause') -> bool:
        """True when some variable appears with opposite polarities."""
        mine = dict(self.literals)
        return any(v in mine and mine[v] != p for v, p in other.literals)

    def __str__(self) -> str:
        if not self.literals:
            return "TRUE"
        return " & ".join(f"X{v}" if p else f"~X{v}" for v, p in self.literals)


@dataclass(frozen=True)
class DisjointnessResult:
    ok: bool
    pair: Optional[Tuple[int, int]] = None
    witness: Optional[Tuple[int, ...]] = None


def check_disjoint(clauses: Sequence[Clause], num_vars: int) -> DisjointnessResult:
    """
    Pairwise syntactic disjointness check.

    Returns:
        ok, or the first overlapping pair (0-based clause indices) with an
        assignment satisfying both clauses
    """
    for a, b in combinations(range(len(clauses)), 2):
        if not clauses[a].conflicts_with(clauses[b]):
            witness = [0] * num_vars
            for v, p in clauses[a].literals + clauses[b].literals:
                witness[v - 1] = int(p)
            return DisjointnessResult(False, (a, b), tuple(witness))
    return DisjointnessResult(True)


@dataclass(frozen=True)
class DisjointDNF:
    num_vars: int
    clauses: Tuple[Clause, ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise ContractError(f"num_vars must be positive, got {self.num_vars}")
        clauses = tuple(self.clauses)
        for clause in clauses:
            if clause.variables and max(clause.variables) > self.num_vars:
                raise ContractError(f"Clause {clause} mentions a variable beyond num_vars={self.num_vars}")
        result = check_disjoint(clauses, self.num_vars)
        if not result.ok:
            a, b = result.pair
            raise ContractError(
                f"Clauses {a + 1} ({clauses[a]}) and {b + 1} ({clauses[b]}) overlap, "
                f"both hold on {''.join(map(str, result.witness))}"
            )
        object.__setattr__(self, "clauses", clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    @property
    def size(self) -> int:
        """Total number of literals."""
        return sum(len(c.literals) for c in self.clauses)


def evaluate_ddnf(formula: DisjointDNF, x: Sequence[int]) -> int:
    if len(x) != formula.num_vars:
        raise ContractError(f"Expected {formula.num_vars} values, got {len(x)}")
    return int(any(clause.evaluate(x) for clause in formula.clauses))


def ddnf_to_dict(formula: DisjointDNF) -> dict:
    return {"num_vars": formula.num_vars, "clauses": [c.to_signed() for c in formula.clauses]}


def ddnf_from_dict(document: dict) -> DisjointDNF:
    """
    Read a d-DNF document {"num_vars": N, "clauses": [[signed ints], ...]}.

    Raises:
        ContractError: on malformed literals or overlapping clauses
    """
    is_valid, errors = validate_required_fields(document, {"num_vars": int, "clauses": list}, "d-DNF document")
    if is_valid:
        is_valid, errors = validate_signed_literals(document["clauses"], document["num_vars"])
    if not is_valid:
        raise ContractError("; ".join(errors))
    return DisjointDNF(document["num_vars"], tuple(Clause.from_signed(c) for c in document["clauses"]))
