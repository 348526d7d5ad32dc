"""Seeded random models, distributions and instances for verification runs."""

from typing import List, Optional, Sequence

import numpy as np

from src.automata.automaton import Alphabet, WeightedAutomaton
from src.boolean.decision_tree import DecisionTree, tree_from_dict
from src.markov.chain import MarkovChain
from src.markov.sequentialize import VectorMarkov

# keeps random probabilities away from zero
_FLOOR = 0.05


def random_distribution(rng: np.random.Generator, size: int) -> np.ndarray:
    values = rng.dirichlet(np.ones(size)) + _FLOOR
    return values / values.sum()


def random_stochastic(rng: np.random.Generator, size: int) -> np.ndarray:
    return np.vstack([random_distribution(rng, size) for _ in range(size)])


def random_automaton(
    rng: np.random.Generator,
    alphabet: Alphabet,
    dim: int,
    low: float = -1.0,
    high: float = 1.0,
) -> WeightedAutomaton:
    """Dense automaton with every parameter uniform in [low, high]."""
    return WeightedAutomaton(
        alphabet,
        rng.uniform(low, high, dim),
        {s: rng.uniform(low, high, (dim, dim)) for s in alphabet},
        rng.uniform(low, high, dim),
    )


def random_chain(
    rng: np.random.Generator,
    alphabet: Alphabet,
    kind: str = "stationary",
    stored: int = 3,
    extension: str = "repeat-last",
) -> MarkovChain:
    size = len(alphabet)
    init = random_distribution(rng, size)
    if kind == "stationary":
        return MarkovChain.stationary(alphabet, init, random_stochastic(rng, size))
    return MarkovChain.positional(alphabet, init, [random_stochastic(rng, size) for _ in range(stored)], extension)


def random_word(rng: np.random.Generator, alphabet: Alphabet, length: int) -> str:
    symbols: Sequence[str] = tuple(alphabet)
    return "".join(symbols[j] for j in rng.integers(0, len(symbols), length))


def random_vector_markov(rng: np.random.Generator, num_vars: int) -> VectorMarkov:
    return VectorMarkov(
        num_vars,
        random_distribution(rng, 2),
        tuple(random_stochastic(rng, 2) for _ in range(num_vars - 1)),
    )


def random_tree_document(
    rng: np.random.Generator,
    num_vars: int,
    max_depth: int,
    available: Optional[List[int]] = None,
    depth: int = 0,
) -> dict:
    available = list(range(1, num_vars + 1)) if available is None else available
    if not available or depth >= max_depth or rng.random() < 0.2 * depth:
        return {"leaf": int(rng.integers(0, 2))}
    var = int(rng.choice(available))
    rest = [v for v in available if v != var]
    return {
        "var": var,
        "low": random_tree_document(rng, num_vars, max_depth, rest, depth + 1),
        "high": random_tree_document(rng, num_vars, max_depth, rest, depth + 1),
    }


def random_tree(rng: np.random.Generator, num_vars: int, max_depth: int) -> DecisionTree:
    return tree_from_dict(random_tree_document(rng, num_vars, max_depth), num_vars)
