"""
Boolean vector Markov distributions and their sequential form.

A distribution over (X_1, ..., X_N) in {0,1}^N factorizing as
P_init(X_1) prod P_i(X_{i+1} | X_i) becomes a Markov chain over the
alphabet {"0", "1"} that agrees with it on the first N positions and is
uniform afterwards.
"""

import itertools
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np

from src.automata.automaton import Alphabet
from src.ingestion.validator import validate_probability_vector, validate_stochastic_matrix
from src.markov.chain import MarkovChain
from src.utils.exceptions import ConfigurationError, ContractError

BOOLEAN_ALPHABET = Alphabet(("0", "1"))


@dataclass(frozen=True, eq=False)
class VectorMarkov:
    num_vars: int
    init: np.ndarray
    transitions: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise ConfigurationError(f"num_vars must be positive, got {self.num_vars}")
        if len(self.transitions) != self.num_vars - 1:
            raise ConfigurationError(
                f"Expected {self.num_vars - 1} transition matrices for {self.num_vars} variables, "
                f"got {len(self.transitions)}"
            )
        errors = validate_probability_vector(self.init, "init", 2)[1]
        for i, matrix in enumerate(self.transitions, start=1):
            errors.extend(validate_stochastic_matrix(matrix, f"transition {i}", 2)[1])
        if errors:
            raise ConfigurationError("; ".join(errors))
        object.__setattr__(self, "init", np.array(self.init, dtype=np.float64))
        object.__setattr__(self, "transitions", tuple(np.array(m, dtype=np.float64) for m in self.transitions))

    @classmethod
    def independent(cls, marginals: Sequence[float]) -> 'VectorMarkov':
        """Independent bits with P(X_i = 1) = marginals[i - 1]."""
        marginals = list(marginals)
        rows = [np.array([[1 - q, q], [1 - q, q]]) for q in marginals[1:]]
        return cls(len(marginals), np.array([1 - marginals[0], marginals[0]]), tuple(rows))

    def joint_probability(self, x: Sequence[int]) -> float:
        if len(x) != self.num_vars:
            raise ContractError(f"Expected {self.num_vars} values, got {len(x)}")
        probability = float(self.init[x[0]])
        for i in range(1, self.num_vars):
            probability *= float(self.transitions[i - 1][x[i - 1], x[i]])
        return probability

    def joint_table(self) -> Dict[Tuple[int, ...], float]:
        return {x: self.joint_probability(x) for x in itertools.product((0, 1), repeat=self.num_vars)}


def sequentialize(distribution: VectorMarkov) -> MarkovChain:
    """Chain over {"0","1"} equal to the vector distribution on positions 1..N, uniform beyond."""
    return MarkovChain.positional(
        BOOLEAN_ALPHABET,
        distribution.init,
        list(distribution.transitions),
        extension="uniform",
    )


def seq_instance(x: Sequence[int]) -> str:
    """Boolean vector as a word over {"0","1"}."""
    return "".join("1" if bit else "0" for bit in x)


def vector_markov_to_dict(distribution: VectorMarkov) -> dict:
    return {
        "num_vars": distribution.num_vars,
        "init": distribution.init.tolist(),
        "transitions": [m.tolist() for m in distribution.transitions],
    }


def vector_markov_from_dict(document: dict) -> VectorMarkov:
    try:
        return VectorMarkov(
            int(document["num_vars"]),
            np.asarray(document["init"], dtype=np.float64),
            tuple(np.asarray(m, dtype=np.float64) for m in document.get("transitions", [])),
        )
    except KeyError as e:
        raise ConfigurationError(f"Vector Markov document is missing field {e}") from e
    except (TypeError, ValueError) as e:
        raise ConfigurationError(f"Vector Markov document is malformed: {e}") from e
