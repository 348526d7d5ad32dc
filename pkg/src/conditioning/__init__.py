"""Conditioning constructions: conditional marginals, Markov DWAs and g-transducers."""

from .g_table import GTable, compute_G
from .constructions import build_inverse_prob_dwa, build_markov_dwa, inverse_state, markov_state
from .transducers import (
    build_conditional_pipeline,
    build_conditional_wt,
    build_indicator_dft,
    build_swap_indicator_dft,
)

__all__ = [
    'GTable',
    'compute_G',
    'build_inverse_prob_dwa',
    'build_markov_dwa',
    'inverse_state',
    'markov_state',
    'build_conditional_pipeline',
    'build_conditional_wt',
    'build_indicator_dft',
    'build_swap_indicator_dft',
]
