"""Markov distributions over words and boolean vectors."""

from .chain import (
    MarkovChain,
    PositionalProvider,
    StationaryProvider,
    TransitionProvider,
    chain_from_dict,
    chain_to_dict,
    marginal,
    pattern_probability,
    seq_probability,
    transition_matrix,
)
from .sequentialize import (
    BOOLEAN_ALPHABET,
    VectorMarkov,
    seq_instance,
    sequentialize,
    vector_markov_from_dict,
    vector_markov_to_dict,
)

__all__ = [
    'MarkovChain',
    'PositionalProvider',
    'StationaryProvider',
    'TransitionProvider',
    'chain_from_dict',
    'chain_to_dict',
    'marginal',
    'pattern_probability',
    'seq_probability',
    'transition_matrix',
    'BOOLEAN_ALPHABET',
    'VectorMarkov',
    'seq_instance',
    'sequentialize',
    'vector_markov_from_dict',
    'vector_markov_to_dict',
]
