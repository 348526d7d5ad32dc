"""
Brute-force ground truth by exhaustive enumeration.

Nothing here goes through the operator pipeline: languages are evaluated
with dense matrix products, probabilities with the chain rule, and
conditional expectations with the Bayes formula over every word of the
support. Exponential by construction, so every entry point checks the
configured caps first.

With arithmetic="exact" every float input is converted to a Fraction
exactly and all sums run in rational arithmetic.
"""

import itertools
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from src.automata.automaton import HASH, WeightedAutomaton, as_word
from src.config.settings import DEFAULT_CONFIG, OracleConfig
from src.markov.chain import MarkovChain
from src.markov.sequentialize import VectorMarkov
from src.shap.report import WeightMode
from src.utils.exceptions import ContractError, ScaleError

Word = Tuple[str, ...]
Language = Union[WeightedAutomaton, Callable[[Word], float]]
Number = Union[float, Fraction]


def _number(config: OracleConfig) -> Callable[[float], Number]:
    return Fraction if config.arithmetic == "exact" else float


def dense_evaluator(automaton: WeightedAutomaton) -> Callable[[Word], float]:
    """f_A via dense alpha^T A_{w_1} ... A_{w_n} beta."""
    blocks = {s: automaton.matrix(s).toarray() for s in automaton.alphabet}
    alpha, beta = np.array(automaton.alpha), np.array(automaton.beta)

    def evaluate(word: Word) -> float:
        vector = alpha
        for symbol in word:
            vector = vector @ blocks[symbol]
        return float(vector @ beta)

    return evaluate


def _as_function(f: Language) -> Callable[[Word], float]:
    return dense_evaluator(f) if isinstance(f, WeightedAutomaton) else f


def _check_length(n: int, alphabet_size: int, config: OracleConfig) -> None:
    if n > config.max_word_length:
        raise ScaleError(f"Length {n} exceeds the oracle cap {config.max_word_length}")
    if alphabet_size ** n > config.max_table_size:
        raise ScaleError(f"{alphabet_size}^{n} words exceed the oracle table cap {config.max_table_size}")


def chain_rule_probability(chain: MarkovChain, word: Word) -> float:
    index = [chain.alphabet.index(s) for s in word]
    probability = chain.init[index[0]]
    for position in range(1, len(index)):
        probability = probability * chain.transition(position)[index[position - 1], index[position]]
    return float(probability)


class _SupportTable:
    """P(w') and f(w') for every w' of one length."""

    def __init__(self, f: Language, chain: MarkovChain, n: int, config: OracleConfig):
        _check_length(n, len(chain.alphabet), config)
        number = _number(config)
        evaluate = _as_function(f)
        self.words = list(itertools.product(tuple(chain.alphabet), repeat=n))
        self.probability = {w: number(chain_rule_probability(chain, w)) for w in self.words}
        self.value = {w: number(evaluate(w)) for w in self.words}
        self._memo: Dict[Word, Number] = {}

    def conditional(self, pattern: Word) -> Number:
        cached = self._memo.get(pattern)
        if cached is None:
            mass = sum(self.probability[w] for w in self.words if _fits(w, pattern))
            weighted = sum(self.probability[w] * self.value[w] for w in self.words if _fits(w, pattern))
            cached = weighted / mass
            self._memo[pattern] = cached
        return cached


def _fits(word: Word, pattern: Word) -> bool:
    return all(e == HASH or e == s for s, e in zip(word, pattern))


def oracle_value(f: Language, pattern, chain: MarkovChain, config: Optional[OracleConfig] = None) -> float:
    """E[f(w') | w' matches pattern] by enumeration of the whole support."""
    config = config or DEFAULT_CONFIG.oracle
    pattern = tuple(pattern)
    return float(_SupportTable(f, chain, len(pattern), config).conditional(pattern))


def oracle_expected_value(f: Language, chain: MarkovChain, n: int, config: Optional[OracleConfig] = None) -> float:
    config = config or DEFAULT_CONFIG.oracle
    table = _SupportTable(f, chain, n, config)
    return float(sum(table.probability[w] * table.value[w] for w in table.words))


def _coalition_pattern(word: Word, coalition) -> Word:
    return tuple(s if j in coalition else HASH for j, s in enumerate(word, start=1))


def oracle_shap_patterns(
    f: Language,
    word,
    i: int,
    chain: MarkovChain,
    mode: WeightMode = WeightMode.CLASSIC_SHAPLEY,
    config: Optional[OracleConfig] = None,
) -> float:
    """
    Pattern-form score: sum over coalitions T of c(|T|) / binomial(n, |T|) * [V(T) - V(T minus i)].

    c(k) = 1 / (n - k) for 1 <= k <= n - 1 in paper mode, 1 / k for 1 <= k <= n in classic mode.
    """
    config = config or DEFAULT_CONFIG.oracle
    word = as_word(word)
    n = len(word)
    if not 1 <= i <= n:
        raise ContractError(f"Position {i} outside 1..{n}")
    table = _SupportTable(f, chain, n, config)
    mode = WeightMode.parse(mode)
    sizes = range(1, n) if mode is WeightMode.PAPER_LITERAL else range(1, n + 1)

    score = Fraction(0) if config.arithmetic == "exact" else 0.0
    for k in sizes:
        scale = Fraction(1, (n - k) if mode is WeightMode.PAPER_LITERAL else k) / comb(n, k)
        if config.arithmetic != "exact":
            scale = float(scale)
        for coalition in itertools.combinations(range(1, n + 1), k):
            if i not in coalition:
                continue
            with_i = table.conditional(_coalition_pattern(word, coalition))
            without_i = table.conditional(_coalition_pattern(word, set(coalition) - {i}))
            score += scale * (with_i - without_i)
    return float(score)


def oracle_shap_subsets(
    f: Callable[[Tuple[int, ...]], float],
    x: Sequence[int],
    i: int,
    distribution: VectorMarkov,
    mode: WeightMode = WeightMode.CLASSIC_SHAPLEY,
    config: Optional[OracleConfig] = None,
) -> float:
    """
    Subset-form score with v(S) = E[f(X) | X_S = x_S].

    In classic mode: sum over S not containing i of |S|!(n-|S|-1)!/n! [v(S + i) - v(S)].
    In paper mode: sum over S containing i, 1 <= |S| <= n-1, of |S|!(n-|S|-1)!/n! [v(S) - v(S - i)].
    """
    config = config or DEFAULT_CONFIG.oracle
    n = len(x)
    if n != distribution.num_vars:
        raise ContractError(f"Instance has {n} values, distribution {distribution.num_vars}")
    if n > config.max_variables:
        raise ScaleError(f"{n} variables exceed the oracle cap {config.max_variables}")
    if not 1 <= i <= n:
        raise ContractError(f"Feature index {i} outside 1..{n}")
    number = _number(config)
    mode = WeightMode.parse(mode)

    points = list(itertools.product((0, 1), repeat=n))
    joint = {z: number(distribution.joint_probability(z)) for z in points}
    values = {z: number(f(z)) for z in points}
    memo: Dict[frozenset, Number] = {}

    def v(subset: frozenset) -> Number:
        if subset not in memo:
            agreeing = [z for z in points if all(z[j - 1] == x[j - 1] for j in subset)]
            memo[subset] = sum(joint[z] * values[z] for z in agreeing) / sum(joint[z] for z in agreeing)
        return memo[subset]

    others = [j for j in range(1, n + 1) if j != i]
    score = Fraction(0) if config.arithmetic == "exact" else 0.0
    for size in range(n):
        for rest in itertools.combinations(others, size):
            subset = frozenset(rest)
            if mode is WeightMode.CLASSIC_SHAPLEY:
                s = len(subset)
            else:
                s = len(subset) + 1
                if s > n - 1:
                    continue
            weight = Fraction(factorial(s) * factorial(n - s - 1), factorial(n))
            if config.arithmetic != "exact":
                weight = float(weight)
            score += weight * (v(subset | {i}) - v(subset))
    return float(score)


def enumerate_language(
    automaton: WeightedAutomaton,
    n: int,
    config: Optional[OracleConfig] = None,
) -> Dict[Word, float]:
    """Every word of length n with its value."""
    config = config or DEFAULT_CONFIG.oracle
    if len(automaton.alphabet) ** n > config.max_table_size:
        raise ScaleError(f"{len(automaton.alphabet)}^{n} words exceed the oracle table cap {config.max_table_size}")
    evaluate = dense_evaluator(automaton)
    return {w: evaluate(w) for w in itertools.product(tuple(automaton.alphabet), repeat=n)}
