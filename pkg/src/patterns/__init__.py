"""Coalition patterns and their automaton compilation."""

from .pattern import (
    BOS,
    Pattern,
    coalition_count,
    matches,
    patterns_with_hashes,
    pos,
    swap,
    sym,
)
from .compiler import build_pattern_dfa, build_pattern_wa, pattern_state

__all__ = [
    'BOS',
    'Pattern',
    'coalition_count',
    'matches',
    'patterns_with_hashes',
    'pos',
    'swap',
    'sym',
    'build_pattern_dfa',
    'build_pattern_wa',
    'pattern_state',
]
