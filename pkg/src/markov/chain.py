"""
Markovian distributions over sequences with lazily queried transition matrices.

P_i is the row-stochastic matrix governing the step from position i to
position i + 1, so a word w has probability
P_init(w_1) * prod_{i=1}^{|w|-1} P_i[w_i, w_{i+1}].
"""

import itertools
import threading
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from src.automata.automaton import HASH, Alphabet, WordLike, check_word
from src.config.settings import DEFAULT_CONFIG
from src.ingestion.validator import validate_probability_vector, validate_stochastic_matrix
from src.patterns.pattern import Pattern
from src.utils.exceptions import ConfigurationError, ContractError, ScaleError

EXTENSIONS = ("repeat-last", "uniform")


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.float64)
    array.setflags(write=False)
    return array


def _check_matrix(matrix, name: str, size: int) -> np.ndarray:
    is_valid, errors = validate_stochastic_matrix(matrix, name, size)
    if not is_valid:
        raise ConfigurationError("; ".join(errors))
    return _frozen(matrix)


class TransitionProvider(ABC):
    """Total map from a position i >= 1 to the stochastic matrix P_i."""

    kind: str

    @abstractmethod
    def matrix(self, i: int) -> np.ndarray:
        pass


class StationaryProvider(TransitionProvider):
    kind = "stationary"

    def __init__(self, matrix, size: int):
        self._matrix = _check_matrix(matrix, "transition matrix", size)

    def matrix(self, i: int) -> np.ndarray:
        return self._matrix


class PositionalProvider(TransitionProvider):
    """Explicit list P_1..P_m extended beyond m by a declared rule."""

    kind = "positional"

    def __init__(self, matrices: Sequence, size: int, extension: Optional[str]):
        if extension is not None and extension not in EXTENSIONS:
            raise ConfigurationError(f"extension must be one of {EXTENSIONS}, got {extension!r}")
        if extension == "repeat-last" and not matrices:
            raise ConfigurationError("repeat-last extension needs at least one stored matrix")
        self._matrices = [_check_matrix(m, f"transition matrix {i}", size) for i, m in enumerate(matrices, start=1)]
        self.size = size
        self.extension = extension
        self._generated: Optional[np.ndarray] = None
        self._lock = threading.Lock()

    @property
    def stored(self) -> List[np.ndarray]:
        return list(self._matrices)

    def matrix(self, i: int) -> np.ndarray:
        if i <= len(self._matrices):
            return self._matrices[i - 1]
        if self.extension == "repeat-last":
            return self._matrices[-1]
        if self.extension == "uniform":
            if self._generated is None:
                with self._lock:
                    if self._generated is None:
                        self._generated = _check_matrix(
                            np.full((self.size, self.size), 1.0 / self.size), "uniform extension", self.size
                        )
            return self._generated
        raise ConfigurationError(
            f"No transition matrix for position {i}: {len(self._matrices)} stored and no extension rule"
        )


@dataclass(frozen=True, eq=False)
class MarkovChain:
    """First-order Markov distribution over words of the alphabet."""

    alphabet: Alphabet
    init: np.ndarray
    provider: TransitionProvider
    _cache: Dict[int, np.ndarray] = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        if self.alphabet.hash_extended:
            raise ConfigurationError("A Markov chain is defined over a base alphabet")
        is_valid, errors = validate_probability_vector(self.init, "init", len(self.alphabet))
        if not is_valid:
            raise ConfigurationError("; ".join(errors))
        object.__setattr__(self, "init", _frozen(self.init))

    @classmethod
    def stationary(cls, alphabet, init, matrix) -> 'MarkovChain':
        alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet.of(alphabet)
        return cls(alphabet, np.asarray(init, dtype=np.float64), StationaryProvider(matrix, len(alphabet)))

    @classmethod
    def positional(cls, alphabet, init, matrices, extension: Optional[str] = "repeat-last") -> 'MarkovChain':
        alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet.of(alphabet)
        return cls(alphabet, np.asarray(init, dtype=np.float64),
                   PositionalProvider(matrices, len(alphabet), extension))

    @classmethod
    def uniform(cls, alphabet) -> 'MarkovChain':
        """The i.i.d. uniform distribution."""
        alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet.of(alphabet)
        size = len(alphabet)
        return cls.stationary(alphabet, np.full(size, 1.0 / size), np.full((size, size), 1.0 / size))

    @property
    def kind(self) -> str:
        return self.provider.kind

    def transition(self, i: int) -> np.ndarray:
        if i < 1:
            raise ContractError(f"Transition index must be >= 1, got {i}")
        matrix = self._cache.get(i)
        if matrix is None:
            matrix = self.provider.matrix(i)
            self._cache[i] = matrix
        return matrix


def transition_matrix(chain: MarkovChain, i: int) -> np.ndarray:
    """P_i, the matrix governing the step from position i to i + 1."""
    return chain.transition(i)


def seq_probability(chain: MarkovChain, word: WordLike) -> float:
    """
    Chain-rule probability of a word.

    Raises:
        ContractError: for the empty word
        InputDomainError: for a symbol outside the chain's alphabet
    """
    word = check_word(chain.alphabet, word)
    if not word:
        raise ContractError("seq_probability needs a word of length >= 1")
    index = [chain.alphabet.index(s) for s in word]
    probability = float(chain.init[index[0]])
    for i in range(1, len(index)):
        probability *= float(chain.transition(i)[index[i - 1], index[i]])
    return probability


def marginal(chain: MarkovChain, m: int) -> np.ndarray:
    """Distribution of the symbol at position m (1-based)."""
    if m < 1:
        raise ContractError(f"Position must be >= 1, got {m}")
    vector = np.array(chain.init)
    for i in range(1, m):
        vector = vector @ chain.transition(i)
    return vector


def pattern_probability(chain: MarkovChain, pattern: Pattern, cap: Optional[int] = None) -> float:
    """
    P(L_p): total probability of the words matching a pattern, by enumeration.

    Raises:
        ScaleError: if |p| exceeds the enumeration cap
    """
    cap = DEFAULT_CONFIG.oracle.max_word_length if cap is None else cap
    if len(pattern) < 1:
        raise ContractError("pattern_probability needs a pattern of length >= 1")
    if len(pattern) > cap:
        raise ScaleError(f"Pattern length {len(pattern)} exceeds the enumeration cap {cap}")
    choices = [tuple(chain.alphabet) if entry == HASH else (entry,) for entry in pattern]
    return sum((seq_probability(chain, word) for word in itertools.product(*choices)), 0.0)


def chain_to_dict(chain: MarkovChain) -> dict:
    document = {
        "alphabet": list(chain.alphabet),
        "init": chain.init.tolist(),
        "kind": chain.kind,
    }
    if isinstance(chain.provider, StationaryProvider):
        document["matrix"] = chain.provider.matrix(1).tolist()
    else:
        document["matrices"] = [m.tolist() for m in chain.provider.stored]
        document["extension"] = chain.provider.extension
    return document


def chain_from_dict(document: dict) -> MarkovChain:
    """
    Build a chain from its JSON document.

    Raises:
        ConfigurationError: for an unknown kind, missing matrices or invalid probabilities
    """
    try:
        alphabet = Alphabet.of(document["alphabet"])
        init = document["init"]
        kind = document.get("kind", "stationary")
        if kind == "stationary":
            return MarkovChain.stationary(alphabet, init, document["matrix"])
        if kind == "positional":
            if "extension" not in document:
                raise ConfigurationError("positional chains must declare an extension rule")
            return MarkovChain.positional(alphabet, init, document["matrices"], document["extension"])
    except KeyError as e:
        raise ConfigurationError(f"Markov chain document is missing field {e}") from e
    except ContractError as e:
        raise ConfigurationError(str(e)) from e
    raise ConfigurationError(f"Unknown chain kind {kind!r}; expected 'stationary' or 'positional'")
