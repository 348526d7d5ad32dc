"""
Compile the uniform coalition distribution of an instance into a weighted automaton.

The DFA tracks (position, hashes read so far) and accepts the patterns of
w with a prescribed number of hashes. Embedded with {0,1} weights and a
one-hot initial vector, then normalized on alpha, it computes the uniform
distribution over the binomial(|w|, k) coalitions of size |w| - k.
"""

from typing import Dict, List, Tuple

import numpy as np
from scipy import sparse

from src.automata.automaton import HASH, Alphabet, WeightedAutomaton, WordLike, check_word
from src.automata.operators import wa_scale
from src.patterns.pattern import coalition_count
from src.utils.exceptions import ContractError


def pattern_state(position: int, hashes: int, max_hashes: int) -> int:
    return position * (max_hashes + 1) + hashes


def build_pattern_dfa(
    word: WordLike,
    alphabet: Alphabet,
    max_hashes: int,
    graded: bool = False,
) -> WeightedAutomaton:
    """
    Build the {0,1} pattern DFA of word over the hash-extended alphabet.

    Args:
        word: The explained instance
        alphabet: Base alphabet of the instance
        max_hashes: Largest number of hashes a run may read
        graded: Accept every hash count (final states (|w|, h) for all h)
            instead of only h = max_hashes

    Returns:
        WeightedAutomaton with states (position, hashes), index position * (max_hashes + 1) + hashes
    """
    word = check_word(alphabet.base(), word)
    length = len(word)
    if not 0 <= max_hashes <= length:
        raise ContractError(f"hash count {max_hashes} outside 0..{length}")
    extended = alphabet.extended()
    dim = (length + 1) * (max_hashes + 1)

    entries: Dict[str, Tuple[List[int], List[int]]] = {s: ([], []) for s in extended}
    for t, symbol in enumerate(word):
        for h in range(max_hashes + 1):
            rows, cols = entries[symbol]
            rows.append(pattern_state(t, h, max_hashes))
            cols.append(pattern_state(t + 1, h, max_hashes))
            if h < max_hashes:
                rows, cols = entries[HASH]
                rows.append(pattern_state(t, h, max_hashes))
                cols.append(pattern_state(t + 1, h + 1, max_hashes))

    transitions = {
        s: sparse.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(dim, dim))
        for s, (rows, cols) in entries.items()
    }
    alpha = np.zeros(dim)
    alpha[0] = 1.0
    beta = np.zeros(dim)
    finals = range(max_hashes + 1) if graded else (max_hashes,)
    for h in finals:
        beta[pattern_state(length, h, max_hashes)] = 1.0
    return WeightedAutomaton(extended, alpha, transitions, beta)


def build_pattern_wa(word: WordLike, k: int, alphabet: Alphabet) -> WeightedAutomaton:
    """
    WA of the uniform distribution over the patterns of word with exactly k hashes.

    Value 1 / binomial(|w|, k) on each such pattern, 0 elsewhere (including other lengths).
    """
    word = check_word(alphabet.base(), word)
    dfa = build_pattern_dfa(word, alphabet, k)
    return wa_scale(dfa, 1.0 / coalition_count(len(word), k))
