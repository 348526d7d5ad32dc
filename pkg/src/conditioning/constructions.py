"""
Deterministic weighted automata used to condition a model on a pattern.

- build_markov_dwa: A_{w,P}, the distribution P restricted to words of length |w|
- build_inverse_prob_dwa: A_{w,i,P}, p -> 1 / P(L_{swap(p,i)}) (or 1 / P(L_p))
"""

from collections import defaultdict
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import sparse

from src.automata.automaton import HASH, WeightedAutomaton, WordLike, as_word
from src.conditioning.g_table import GTable
from src.markov.chain import MarkovChain
from src.patterns.pattern import BOS
from src.utils.exceptions import ConfigurationError, ContractError
from src.utils.logger import LoggerFactory

logger = LoggerFactory.get_logger(__name__)

Entries = Dict[str, Tuple[List[int], List[int], List[float]]]


def _to_matrices(entries: Entries, symbols, dim: int) -> Dict[str, sparse.csr_matrix]:
    matrices = {}
    for symbol in symbols:
        rows, cols, data = entries.get(symbol, ([], [], []))
        matrices[symbol] = sparse.csr_matrix((data, (rows, cols)), shape=(dim, dim))
    return matrices


def _add(entries: Entries, symbol: str, row: int, col: int, weight: float) -> None:
    rows, cols, data = entries[symbol]
    rows.append(row)
    cols.append(col)
    data.append(weight)


def markov_state(position: int, symbol_index: int, alphabet_size: int) -> int:
    """Index of state (position, symbol); symbol_index == alphabet_size stands for BOS."""
    return position * (alphabet_size + 1) + symbol_index


def build_markov_dwa(word: WordLike, chain: MarkovChain) -> WeightedAutomaton:
    """
    A_{w,P}: value P(w') on every w' of length |w|, 0 on other lengths.

    States are (position, last symbol read) with BOS before the first symbol.
    """
    length = len(as_word(word))
    if length < 1:
        raise ContractError("build_markov_dwa needs a word of length >= 1")
    alphabet = chain.alphabet
    size = len(alphabet)
    dim = (length + 1) * (size + 1)
    entries: Entries = defaultdict(lambda: ([], [], []))

    source = markov_state(0, size, size)
    for j, symbol in enumerate(alphabet):
        _add(entries, symbol, source, markov_state(1, j, size), float(chain.init[j]))
    for position in range(1, length):
        matrix = chain.transition(position)
        for s in range(size):
            for j, symbol in enumerate(alphabet):
                _add(entries, symbol, markov_state(position, s, size), markov_state(position + 1, j, size),
                     float(matrix[s, j]))

    alpha = np.zeros(dim)
    alpha[source] = 1.0
    beta = np.zeros(dim)
    for s in range(size):
        beta[markov_state(length, s, size)] = 1.0
    return WeightedAutomaton(alphabet, alpha, _to_matrices(entries, alphabet, dim), beta)


def inverse_state(k: int, last: int, symbol_index: int, length: int, alphabet_size: int) -> int:
    """Index of state (k, last fixed position, symbol at it)."""
    return (k * (length + 1) + last) * (alphabet_size + 1) + symbol_index


def build_inverse_prob_dwa(
    word: WordLike,
    chain: MarkovChain,
    swap_index: Optional[int] = None,
    table: Optional[GTable] = None,
) -> WeightedAutomaton:
    """
    A_{w,i,P} over the hash-extended alphabet.

    On a pattern p of length |w| it computes 1 / P(L_{swap(p,i)}), or
    1 / P(L_p) without a swap index. The state (k, l, sigma) records the
    number of symbols read, the last fixed position l and its symbol, so
    every fixed symbol is weighted by the reciprocal of
    G(sigma', l, sigma, k + 1) and the weights multiply up to 1 / P(L_p') by
    the Markov chain rule. The swapped position reads any symbol with weight 1.

    Args:
        word: Explained instance (only its length is used)
        chain: Markov chain
        swap_index: Optional 1-based position freed by the swap
        table: Optional G table shared across constructions

    Returns:
        Deterministic-structured WeightedAutomaton of dimension (|w|+1)^2 (|Sigma|+1)
    """
    length = len(as_word(word))
    if length < 1:
        raise ContractError("build_inverse_prob_dwa needs a word of length >= 1")
    if swap_index is not None and not 1 <= swap_index <= length:
        raise ContractError(f"swap position {swap_index} outside 1..{length}")
    table = GTable(chain) if table is None else table
    alphabet = chain.alphabet
    extended = alphabet.extended()
    size = len(alphabet)
    dim = (length + 1) ** 2 * (size + 1)
    entries: Entries = defaultdict(lambda: ([], [], []))

    for k in range(length):
        for last in range(k + 1):
            anchors = ((size, BOS),) if last == 0 else tuple(enumerate(alphabet))
            for s, anchor in anchors:
                source = inverse_state(k, last, s, length, size)
                if swap_index is not None and k == swap_index - 1:
                    for symbol in extended:
                        _add(entries, symbol, source, inverse_state(k + 1, last, s, length, size), 1.0)
                    continue
                _add(entries, HASH, source, inverse_state(k + 1, last, s, length, size), 1.0)
                for j, symbol in enumerate(alphabet):
                    probability = table.value(symbol, last, anchor, k + 1)
                    if probability <= 0:
                        raise ConfigurationError(
                            f"Zero conditional probability for {symbol!r} at position {k + 1}"
                        )
                    _add(entries, symbol, source, inverse_state(k + 1, k + 1, j, length, size), 1.0 / probability)

    alpha = np.zeros(dim)
    alpha[inverse_state(0, 0, size, length, size)] = 1.0
    beta = np.zeros(dim)
    for last in range(length + 1):
        for s in ((size,) if last == 0 else range(size)):
            beta[inverse_state(length, last, s, length, size)] = 1.0
    logger.debug(f"inverse-probability DWA for |w|={length}, swap={swap_index}: dim {dim}")
    return WeightedAutomaton(extended, alpha, _to_matrices(entries, extended, dim), beta)
