"""
Linear representations of weighted automata and transducers.

A weighted automaton over an alphabet is the tuple <alpha, {A_sigma}, beta>
and computes f(w) = alpha^T A_{w_1} ... A_{w_n} beta. A weighted transducer
carries one matrix per (input symbol, output symbol) pair and computes the
same chain over aligned word pairs. Transition matrices are stored as scipy
CSR matrices; the constructions used by the attribution pipeline are
deterministic and keep a single non-zero per row.
"""

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

from src.utils.exceptions import ContractError, InputDomainError

HASH = "#"

Word = Tuple[str, ...]
WordLike = Union[str, Sequence[str]]


def as_word(word: WordLike) -> Word:
    """Normalize a word: strings are split into single-character symbols."""
    return tuple(word)


@dataclass(frozen=True)
class Alphabet:
    """Ordered finite set of symbols; '#' only appears in hash-extended alphabets."""

    symbols: Tuple[str, ...]
    hash_extended: bool = False
    _index: Dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if not symbols:
            raise ContractError("An alphabet needs at least one symbol")
        if len(set(symbols)) != len(symbols):
            raise ContractError(f"Duplicate symbols in alphabet {symbols}")
        for symbol in symbols:
            if not isinstance(symbol, str) or not symbol:
                raise ContractError(f"Alphabet symbols must be non-empty strings, got {symbol!r}")
        base = symbols[:-1] if self.hash_extended else symbols
        if HASH in base:
            raise ContractError(f"'{HASH}' is reserved and cannot be a base symbol")
        if self.hash_extended and (symbols[-1] != HASH or not base):
            raise ContractError(f"A hash-extended alphabet ends with '{HASH}' after its base symbols")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(symbols)})

    @classmethod
    def of(cls, symbols: Iterable[str]) -> 'Alphabet':
        """Build an alphabet from a symbol list; a single trailing '#' marks Sigma_#."""
        symbols = tuple(symbols)
        extended = bool(symbols) and symbols[-1] == HASH and symbols.count(HASH) == 1
        return cls(symbols, hash_extended=extended)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol) -> bool:
        return symbol in self._index

    def index(self, symbol: str) -> int:
        return self._index[symbol]

    def extended(self) -> 'Alphabet':
        """The pattern alphabet Sigma_# = Sigma + ('#',)."""
        if self.hash_extended:
            return self
        return Alphabet(self.symbols + (HASH,), hash_extended=True)

    def base(self) -> 'Alphabet':
        if not self.hash_extended:
            return self
        return Alphabet(self.symbols[:-1])

    @property
    def single_character(self) -> bool:
        return all(len(s) == 1 for s in self.symbols)


def check_word(alphabet: Alphabet, word: WordLike) -> Word:
    """
    Validate a word against an alphabet.

    Raises:
        InputDomainError: naming the first unknown symbol and its 1-based position
    """
    word = as_word(word)
    for position, symbol in enumerate(word, start=1):
        if symbol not in alphabet:
            raise InputDomainError(
                f"Unknown symbol {symbol!r} at position {position}; alphabet is {list(alphabet)}",
                symbol=symbol,
                position=position,
            )
    return word


def _as_vector(values, name: str) -> np.ndarray:
    vector = np.asarray(values, dtype=np.float64).reshape(-1)
    if not np.isfinite(vector).all():
        raise ContractError(f"{name} has non-finite entries")
    vector.setflags(write=False)
    return vector


def _as_matrix(matrix, dim: int, label: str) -> sparse.csr_matrix:
    csr = sparse.csr_matrix(matrix, dtype=np.float64, copy=True)
    if csr.shape != (dim, dim):
        raise ContractError(f"Transition matrix for {label} has shape {csr.shape}, expected {(dim, dim)}")
    if not np.isfinite(csr.data).all():
        raise ContractError(f"Transition matrix for {label} has non-finite entries")
    csr.eliminate_zeros()
    csr.sort_indices()
    return csr


def _max_row_nonzeros(matrices: Iterable[sparse.csr_matrix]) -> int:
    return max((int(np.diff(m.indptr).max(initial=0)) for m in matrices), default=0)


@dataclass(frozen=True, eq=False)
class WeightedAutomaton:
    """Linear representation <alpha, {A_sigma}, beta> of a weighted automaton."""

    alphabet: Alphabet
    alpha: np.ndarray
    transitions: Mapping[str, sparse.csr_matrix]
    beta: np.ndarray

    def __post_init__(self):
        alpha = _as_vector(self.alpha, "alpha")
        beta = _as_vector(self.beta, "beta")
        dim = alpha.shape[0]
        if dim < 1 or beta.shape[0] != dim:
            raise ContractError(f"alpha and beta must share a positive length, got {dim} and {beta.shape[0]}")
        missing = [s for s in self.alphabet if s not in self.transitions]
        extra = [s for s in self.transitions if s not in self.alphabet]
        if missing or extra:
            raise ContractError(f"Transition family mismatch: missing {missing}, unexpected {extra}")
        transitions = {s: _as_matrix(self.transitions[s], dim, repr(s)) for s in self.alphabet}
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "transitions", MappingProxyType(transitions))

    @classmethod
    def from_dense(
        cls,
        alphabet: Union[Alphabet, Iterable[str]],
        alpha: Sequence[float],
        transitions: Mapping[str, Sequence[Sequence[float]]],
        beta: Sequence[float],
    ) -> 'WeightedAutomaton':
        if not isinstance(alphabet, Alphabet):
            alphabet = Alphabet.of(alphabet)
        return cls(alphabet, np.asarray(alpha, dtype=np.float64),
                   {s: np.asarray(m, dtype=np.float64) for s, m in transitions.items()},
                   np.asarray(beta, dtype=np.float64))

    @property
    def dim(self) -> int:
        return self.alpha.shape[0]

    def matrix(self, symbol: str) -> sparse.csr_matrix:
        return self.transitions[symbol]

    def with_alphabet(self, alphabet: Alphabet) -> 'WeightedAutomaton':
        """The same function with its symbols listed in the order of alphabet."""
        if alphabet == self.alphabet:
            return self
        if set(alphabet) != set(self.alphabet) or alphabet.hash_extended != self.alphabet.hash_extended:
            raise ContractError(f"Cannot re-index alphabet {list(self.alphabet)} as {list(alphabet)}")
        return WeightedAutomaton(alphabet, self.alpha, dict(self.transitions), self.beta)

    def operator(self) -> sparse.csr_matrix:
        """The symbol-summed transition operator sum_sigma A_sigma."""
        total = sparse.csr_matrix((self.dim, self.dim), dtype=np.float64)
        for symbol in self.alphabet:
            total = total + self.transitions[symbol]
        return total

    @property
    def is_deterministic(self) -> bool:
        """At most one initial state and one successor per (state, symbol)."""
        return (np.count_nonzero(self.alpha) <= 1
                and _max_row_nonzeros(self.transitions.values()) <= 1)

    def __repr__(self) -> str:
        return f"WeightedAutomaton(dim={self.dim}, alphabet={list(self.alphabet)})"


def complete_family(
    input_alphabet: Alphabet,
    output_alphabet: Alphabet,
    dim: int,
    entries: Mapping[Tuple[str, str], object],
) -> Dict[Tuple[str, str], object]:
    """Fill the (input, output) pairs not listed in entries with zero matrices."""
    family = {}
    for a in input_alphabet:
        for b in output_alphabet:
            matrix = entries.get((a, b))
            family[(a, b)] = matrix if matrix is not None else sparse.csr_matrix((dim, dim))
    return family


@dataclass(frozen=True, eq=False)
class WeightedTransducer:
    """Linear representation <alpha, {A_sigma^sigma'}, beta> of a weighted transducer."""

    input_alphabet: Alphabet
    output_alphabet: Alphabet
    alpha: np.ndarray
    transitions: Mapping[Tuple[str, str], sparse.csr_matrix]
    beta: np.ndarray

    def __post_init__(self):
        alpha = _as_vector(self.alpha, "alpha")
        beta = _as_vector(self.beta, "beta")
        dim = alpha.shape[0]
        if dim < 1 or beta.shape[0] != dim:
            raise ContractError(f"alpha and beta must share a positive length, got {dim} and {beta.shape[0]}")
        pairs = [(a, b) for a in self.input_alphabet for b in self.output_alphabet]
        missing = [p for p in pairs if p not in self.transitions]
        if missing or len(self.transitions) != len(pairs):
            raise ContractError(f"Transducer needs one matrix per symbol pair; missing {missing}")
        transitions = {p: _as_matrix(self.transitions[p], dim, f"{p[0]}|{p[1]}") for p in pairs}
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "transitions", MappingProxyType(transitions))

    @classmethod
    def from_dense(
        cls,
        input_alphabet: Union[Alphabet, Iterable[str]],
        output_alphabet: Union[Alphabet, Iterable[str]],
        alpha: Sequence[float],
        transitions: Mapping[Tuple[str, str], Sequence[Sequence[float]]],
        beta: Sequence[float],
    ) -> 'WeightedTransducer':
        if not isinstance(input_alphabet, Alphabet):
            input_alphabet = Alphabet.of(input_alphabet)
        if not isinstance(output_alphabet, Alphabet):
            output_alphabet = Alphabet.of(output_alphabet)
        return cls(input_alphabet, output_alphabet, np.asarray(alpha, dtype=np.float64),
                   {p: np.asarray(m, dtype=np.float64) for p, m in transitions.items()},
                   np.asarray(beta, dtype=np.float64))

    @property
    def dim(self) -> int:
        return self.alpha.shape[0]

    def matrix(self, input_symbol: str, output_symbol: str) -> sparse.csr_matrix:
        return self.transitions[(input_symbol, output_symbol)]

    @property
    def is_deterministic(self) -> bool:
        """At most one successor per (state, input symbol, output symbol)."""
        return (np.count_nonzero(self.alpha) <= 1
                and _max_row_nonzeros(self.transitions.values()) <= 1)

    def __repr__(self) -> str:
        return (f"WeightedTransducer(dim={self.dim}, input={list(self.input_alphabet)}, "
                f"output={list(self.output_alphabet)})")


def wa_evaluate(automaton: WeightedAutomaton, word: WordLike) -> float:
    """
    Compute f_A(w) = alpha^T A_{w_1} ... A_{w_n} beta.

    The empty word evaluates to alpha^T beta.

    Raises:
        InputDomainError: if w holds a symbol outside the automaton's alphabet
    """
    word = check_word(automaton.alphabet, word)
    vector = np.array(automaton.alpha)
    for symbol in word:
        vector = automaton.transitions[symbol].T @ vector
    return float(vector @ automaton.beta)


def wt_evaluate(transducer: WeightedTransducer, word: WordLike, output: WordLike) -> float:
    """
    Compute f_T(w, u) for an aligned pair of words.

    Raises:
        ContractError: if |w| != |u|
        InputDomainError: for a symbol outside either alphabet
    """
    word = check_word(transducer.input_alphabet, word)
    output = check_word(transducer.output_alphabet, output)
    if len(word) != len(output):
        raise ContractError(f"Transducer words must be aligned, got lengths {len(word)} and {len(output)}")
    vector = np.array(transducer.alpha)
    for a, b in zip(word, output):
        vector = transducer.transitions[(a, b)].T @ vector
    return float(vector @ transducer.beta)
