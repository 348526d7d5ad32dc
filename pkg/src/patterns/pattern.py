"""
Coalition patterns: fixed-length words over the hash-extended alphabet.

A pattern p over Sigma + ('#',) stands for the coalition of its non-hash
positions. A word w matches p when both have the same length and w agrees
with p wherever p is not a hash.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import FrozenSet, Iterator, List, Optional, Sequence, Tuple, Union

from scipy.special import comb

from src.automata.automaton import HASH, Alphabet, WordLike, as_word
from src.utils.exceptions import ContractError, InputDomainError

# Internal beginning-of-sequence marker; never part of an alphabet.
BOS = "<BOS>"


@dataclass(frozen=True)
class Pattern:
    entries: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    @classmethod
    def parse(
        cls,
        value: Union[str, Sequence[Optional[str]]],
        alphabet: Optional[Alphabet] = None,
    ) -> 'Pattern':
        """
        Read a pattern from its string form or token-array form.

        Args:
            value: "#b#a#" style string, or a list of tokens where None is the hash
            alphabet: Optional base alphabet every fixed entry must belong to

        Returns:
            Parsed Pattern

        Raises:
            InputDomainError: if a fixed entry is outside the alphabet
        """
        if isinstance(value, str):
            entries = as_word(value)
        else:
            entries = tuple(HASH if token is None else token for token in value)
        if alphabet is not None:
            base = alphabet.base()
            for position, entry in enumerate(entries, start=1):
                if entry != HASH and entry not in base:
                    raise InputDomainError(
                        f"Unknown pattern symbol {entry!r} at position {position}; alphabet is {list(base)}",
                        symbol=entry,
                        position=position,
                    )
        return cls(entries)

    @classmethod
    def full(cls, word: WordLike) -> 'Pattern':
        """The pattern fixing every position of word."""
        return cls(as_word(word))

    @classmethod
    def empty(cls, length: int) -> 'Pattern':
        """The all-hash pattern of a given length."""
        return cls((HASH,) * length)

    def to_json(self) -> Union[str, List[Optional[str]]]:
        if all(len(entry) == 1 for entry in self.entries):
            return "".join(self.entries)
        return [None if entry == HASH else entry for entry in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, index):
        return self.entries[index]

    def __str__(self) -> str:
        if all(len(entry) == 1 for entry in self.entries):
            return "".join(self.entries)
        return " ".join(self.entries)

    @property
    def hash_count(self) -> int:
        return sum(1 for entry in self.entries if entry == HASH)

    @property
    def coalition(self) -> FrozenSet[int]:
        """1-based positions fixed by the pattern."""
        return frozenset(j for j, entry in enumerate(self.entries, start=1) if entry != HASH)

    def swap(self, i: int) -> 'Pattern':
        return swap(self, i)

    def matches(self, word: WordLike) -> bool:
        return matches(word, self)

    @property
    def pos(self) -> int:
        return pos(self)

    @property
    def sym(self) -> str:
        return sym(self)


def swap(p: Pattern, i: int) -> Pattern:
    """
    Free position i (1-based) of the pattern.

    Raises:
        ContractError: if i is outside 1..|p|
    """
    if not 1 <= i <= len(p):
        raise ContractError(f"swap position {i} outside 1..{len(p)}")
    entries = list(p.entries)
    entries[i - 1] = HASH
    return Pattern(tuple(entries))


def matches(word: WordLike, p: Pattern) -> bool:
    word = as_word(word)
    if len(word) != len(p):
        return False
    return all(entry == HASH or entry == symbol for symbol, entry in zip(word, p.entries))


def pos(p: Pattern) -> int:
    """Greatest 1-based index holding a fixed entry, 0 when none."""
    for j in range(len(p), 0, -1):
        if p.entries[j - 1] != HASH:
            return j
    return 0


def sym(p: Pattern) -> str:
    """Entry at pos(p), or BOS for the all-hash pattern."""
    j = pos(p)
    return p.entries[j - 1] if j else BOS


def coalition_count(n: int, k: int) -> int:
    """Number of patterns of w (|w| = n) with exactly k hashes, as an exact integer."""
    if not 0 <= k <= n:
        raise ContractError(f"hash count {k} outside 0..{n}")
    return int(comb(n, k, exact=True))


def patterns_with_hashes(word: WordLike, k: int) -> Iterator[Pattern]:
    """Every pattern matched by word with exactly k hashes, in lexicographic position order."""
    word = as_word(word)
    coalition_count(len(word), k)
    for freed in combinations(range(len(word)), k):
        entries = list(word)
        for j in freed:
            entries[j] = HASH
        yield Pattern(tuple(entries))
