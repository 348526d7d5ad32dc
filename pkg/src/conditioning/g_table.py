"""
Conditional marginals G(target, n, anchor, m) of a Markov chain.

G is the probability that position m carries `target` given that position
n carries `anchor` (the plain marginal at m when n = 0 and anchor is BOS).
Rows are pushed forward one transition at a time,
row(n, anchor, m) = row(n, anchor, m - 1) @ P_{m-1}, and memoized.
"""

import threading
from typing import Dict, Optional, Tuple

import numpy as np

from src.automata.automaton import HASH
from src.markov.chain import MarkovChain
from src.patterns.pattern import BOS
from src.utils.exceptions import ConfigurationError, ContractError
from src.utils.logger import LoggerFactory

logger = LoggerFactory.get_logger(__name__)

RowKey = Tuple[int, str, int]


class GTable:
    """Memoized rows of G for one chain; safe for concurrent reads."""

    def __init__(self, chain: MarkovChain):
        self.chain = chain
        self._rows: Dict[RowKey, np.ndarray] = {}
        self._lock = threading.Lock()

    def _check(self, n: int, anchor: str, m: int) -> None:
        if n == 0:
            if anchor != BOS:
                raise ContractError(f"Anchor at position 0 must be BOS, got {anchor!r}")
        elif n < 0 or anchor not in self.chain.alphabet:
            raise ContractError(f"Invalid anchor ({n}, {anchor!r})")
        if m < n + 1:
            raise ContractError(f"Target position {m} must exceed anchor position {n}")

    def _base(self, n: int, anchor: str) -> np.ndarray:
        if n == 0:
            return np.array(self.chain.init)
        return np.array(self.chain.transition(n)[self.chain.alphabet.index(anchor)])

    def row(self, n: int, anchor: str, m: int) -> np.ndarray:
        """Distribution of the symbol at position m given the anchor."""
        self._check(n, anchor, m)
        cached = self._rows.get((n, anchor, m))
        if cached is not None:
            return cached

        # walk back to the nearest stored row, then push forward
        start = m
        while start > n + 1 and (n, anchor, start) not in self._rows:
            start -= 1
        vector = self._rows.get((n, anchor, start))
        if vector is None:
            vector = self._base(n, anchor)
        computed = [(start, vector)]
        for position in range(start + 1, m + 1):
            vector = vector @ self.chain.transition(position - 1)
            computed.append((position, vector))

        with self._lock:
            for position, values in computed:
                if (n, anchor, position) not in self._rows:
                    if (values <= 0).any():
                        raise ConfigurationError(
                            f"Non-positive conditional marginal at position {position} given ({n}, {anchor!r})"
                        )
                    values = np.array(values)
                    values.setflags(write=False)
                    self._rows[(n, anchor, position)] = values
            return self._rows[(n, anchor, m)]

    def value(self, target: str, n: int, anchor: str, m: int) -> float:
        if target == HASH:
            self._check(n, anchor, m)
            return 1.0
        if target not in self.chain.alphabet:
            raise ContractError(f"Unknown target symbol {target!r}")
        return float(self.row(n, anchor, m)[self.chain.alphabet.index(target)])

    def precompute(self, max_position: int) -> None:
        """Fill every row with m <= max_position before parallel use."""
        for n in range(max_position):
            anchors = (BOS,) if n == 0 else tuple(self.chain.alphabet)
            for anchor in anchors:
                self.row(n, anchor, max_position)
        logger.debug(f"G table precomputed up to position {max_position}: {len(self._rows)} rows")

    def __len__(self) -> int:
        return len(self._rows)


def compute_G(
    target: str,
    n: int,
    anchor: str,
    m: int,
    chain: MarkovChain,
    table: Optional[GTable] = None,
) -> float:
    """
    G(target, n, anchor, m) for a chain.

    Args:
        target: Symbol of the alphabet, or '#' (always 1)
        n: Anchor position, 0 for the unconditional marginal
        anchor: Symbol at position n, or BOS when n = 0
        m: Target position, m > n
        chain: Markov chain
        table: Optional shared memo table for the same chain

    Returns:
        Conditional probability in (0, 1]
    """
    if table is None:
        table = GTable(chain)
    elif table.chain is not chain:
        raise ContractError("G table belongs to a different chain")
    return table.value(target, n, anchor, m)
