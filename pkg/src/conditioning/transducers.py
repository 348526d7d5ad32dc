"""
Indicator transducers and the assembled conditional transducers.

g(w', p) = P(w' | w' in L_p') with p' = p or p' = swap(p, i) is assembled as
inv(A_{w,i,P} x inv(A_{w,P} x T)), T the matching indicator. The pipeline
form is what the attribution engine evaluates; materializing it is only
done for small instances.
"""

from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import sparse

from src.automata.automaton import HASH, Alphabet, WeightedTransducer, WordLike, as_word
from src.automata.pipeline import (
    AutomatonLeaf,
    InverseNode,
    MultiplicativeNode,
    Seq2SeqNode,
    TransducerLeaf,
    materialize,
)
from src.conditioning.constructions import build_inverse_prob_dwa, build_markov_dwa
from src.conditioning.g_table import GTable
from src.markov.chain import MarkovChain
from src.utils.exceptions import ContractError


def _pairs_matrix(pairs: Dict[Tuple[str, str], List[Tuple[int, int]]], input_alphabet: Alphabet,
                  output_alphabet: Alphabet, dim: int) -> Dict[Tuple[str, str], sparse.csr_matrix]:
    family = {}
    for a in input_alphabet:
        for b in output_alphabet:
            edges = pairs.get((a, b), [])
            rows = [r for r, _ in edges]
            cols = [c for _, c in edges]
            family[(a, b)] = sparse.csr_matrix((np.ones(len(edges)), (rows, cols)), shape=(dim, dim))
    return family


def build_indicator_dft(alphabet: Alphabet) -> WeightedTransducer:
    """Single-state DFT over Sigma x Sigma_#: value 1 iff w' matches p."""
    alphabet = alphabet.base()
    extended = alphabet.extended()
    pairs = {(a, b): [(0, 0)] for a in alphabet for b in extended if b == a or b == HASH}
    return WeightedTransducer(alphabet, extended, np.ones(1), _pairs_matrix(pairs, alphabet, extended, 1), np.ones(1))


def build_swap_indicator_dft(alphabet: Alphabet, i: int) -> WeightedTransducer:
    """
    T_i over Sigma x Sigma_#: value 1 iff w' matches swap(p, i).

    States 0..i count the positions read up to i; position i accepts any pair.
    """
    if i < 1:
        raise ContractError(f"swap position must be >= 1, got {i}")
    alphabet = alphabet.base()
    extended = alphabet.extended()
    pairs: Dict[Tuple[str, str], List[Tuple[int, int]]] = {}
    for a in alphabet:
        for b in extended:
            matching = b == a or b == HASH
            edges = [(j, j + 1) for j in range(i - 1) if matching]
            edges.append((i - 1, i))
            if matching:
                edges.append((i, i))
            pairs[(a, b)] = edges
    return WeightedTransducer(alphabet, extended, np.eye(1, i + 1, 0).ravel(),
                              _pairs_matrix(pairs, alphabet, extended, i + 1), np.ones(i + 1))


def build_conditional_pipeline(
    word: WordLike,
    chain: MarkovChain,
    swap_index: Optional[int] = None,
    table: Optional[GTable] = None,
    markov_dwa=None,
) -> Seq2SeqNode:
    """
    Unmaterialized g-transducer over Sigma x Sigma_#.

    Args:
        word: Explained instance
        chain: Markov chain
        swap_index: Optional 1-based position freed in the conditioning pattern
        table: Optional shared G table
        markov_dwa: Optional prebuilt A_{w,P} for this length

    Returns:
        inv(A_{w,i,P} x inv(A_{w,P} x T)) as a pipeline expression
    """
    word = as_word(word)
    markov_dwa = build_markov_dwa(word, chain) if markov_dwa is None else markov_dwa
    if swap_index is None:
        indicator = TransducerLeaf(build_indicator_dft(chain.alphabet), "T")
        inverse_dwa = AutomatonLeaf(build_inverse_prob_dwa(word, chain, None, table), "A_inv")
    else:
        indicator = TransducerLeaf(build_swap_indicator_dft(chain.alphabet, swap_index), f"T_{swap_index}")
        inverse_dwa = AutomatonLeaf(build_inverse_prob_dwa(word, chain, swap_index, table), f"A_inv_{swap_index}")
    joint = InverseNode(MultiplicativeNode(AutomatonLeaf(markov_dwa, "A_wP"), indicator))
    return InverseNode(MultiplicativeNode(inverse_dwa, joint))


def build_conditional_wt(
    word: WordLike,
    chain: MarkovChain,
    swap_index: Optional[int] = None,
    limit: Optional[int] = None,
) -> WeightedTransducer:
    """Materialized g-transducer; raises ScaleError above the materialization limit."""
    return materialize(build_conditional_pipeline(word, chain, swap_index), limit)
