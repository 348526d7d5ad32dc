"""
Exact SHAP scores of weighted automata under Markov distributions.

For an instance w of length n and m hashes,

    shap1(m)    = E_{p ~ uniform patterns of w with m hashes} V(p)
    shap2(i, m) = same expectation of V(swap(p, i))

where V(p) = E_P[f_A(w') | w' in L_p]. Both are partition constants at
support n of  pattern-WA (x) Pi(f_A, g), with g the conditional transducer
(plain for shap1, swap-aware for shap2). Scores combine the differences
shap1 - shap2 with the coefficients of the weight mode.

The explainer reads all m at once: the pattern DFA with every hash count
final is put in the product, and the partition constant is split by the
hash count of the final pattern state. A full attribution vector then costs
one forward pass for shap1 plus one per position.
"""

import itertools
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional

from src.automata.automaton import HASH, WeightedAutomaton, Word, WordLike, check_word, wa_evaluate
from src.automata.pipeline import (
    AutomatonLeaf,
    ProductNode,
    ProjectionNode,
    pipeline_evaluate,
    pipeline_partition,
    pipeline_partition_by,
)
from src.conditioning.constructions import build_markov_dwa
from src.conditioning.g_table import GTable
from src.conditioning.transducers import build_conditional_pipeline
from src.config.settings import DEFAULT_CONFIG, ApplicationConfig
from src.markov.chain import MarkovChain, seq_probability
from src.patterns.compiler import build_pattern_dfa, build_pattern_wa
from src.patterns.pattern import Pattern, coalition_count
from src.shap.report import ShapReport, WeightMode, combine_terms, mode_coefficients
from src.utils.exceptions import ContractError, ScaleError
from src.utils.logger import LoggerFactory, log_execution

logger = LoggerFactory.get_logger(__name__)


class ShapExplainer:
    """
    Attribution engine for one model and one background chain.

    Caches A_{w,P} per instance length and the G table of the chain, so that
    repeated calls and all positions of an instance share them.
    """

    def __init__(
        self,
        model: WeightedAutomaton,
        chain: MarkovChain,
        mode: WeightMode = WeightMode.CLASSIC_SHAPLEY,
        config: Optional[ApplicationConfig] = None,
    ):
        if set(model.alphabet) != set(chain.alphabet):
            raise ContractError(
                f"Model alphabet {list(model.alphabet)} differs from chain alphabet {list(chain.alphabet)}"
            )
        # summation follows the chain's symbol order
        self.model = model.with_alphabet(chain.alphabet)
        self.chain = chain
        self.mode = WeightMode.parse(mode)
        self.config = config or DEFAULT_CONFIG
        self.g_table = GTable(chain)
        self._model_leaf = AutomatonLeaf(self.model, "A")
        self._markov_dwas: Dict[int, WeightedAutomaton] = {}

    def _word(self, word: WordLike) -> Word:
        word = check_word(self.chain.alphabet, word)
        if not word:
            raise ContractError("The explained instance must have length >= 1")
        return word

    def markov_dwa(self, length: int) -> WeightedAutomaton:
        dwa = self._markov_dwas.get(length)
        if dwa is None:
            dwa = build_markov_dwa(HASH * length, self.chain)
            self._markov_dwas[length] = dwa
        return dwa

    def _projection(self, word: Word, swap_index: Optional[int]) -> ProjectionNode:
        g = build_conditional_pipeline(
            word, self.chain, swap_index, table=self.g_table, markov_dwa=self.markov_dwa(len(word))
        )
        return ProjectionNode(self._model_leaf, g)

    def _graded(self, word: Word, swap_index: Optional[int]) -> List[float]:
        n = len(word)
        patterns = AutomatonLeaf(build_pattern_dfa(word, self.chain.alphabet, n, graded=True), "P_w")
        expr = ProductNode(patterns, self._projection(word, swap_index))
        # final pattern states are (n, h) with index n * (n + 1) + h
        totals = pipeline_partition_by(expr, n, lambda key: key[0] % (n + 1))
        return [totals.get(m, 0.0) / coalition_count(n, m) for m in range(n + 1)]

    def shap1_all(self, word: WordLike) -> List[float]:
        """shap1(m) for m = 0..|w| from a single forward pass."""
        word = self._word(word)
        self.g_table.precompute(len(word))
        return self._graded(word, None)

    def shap2_all(self, word: WordLike, position: int) -> List[float]:
        """shap2(position, m) for m = 0..|w| from a single forward pass."""
        word = self._word(word)
        if not 1 <= position <= len(word):
            raise ContractError(f"Position {position} outside 1..{len(word)}")
        self.g_table.precompute(len(word))
        return self._graded(word, position)

    def shap1(self, word: WordLike, k: int) -> float:
        """|pattern-WA(w, k) (x) Pi(f_A, g1)|_{|w|} for a single hash count."""
        word = self._word(word)
        expr = ProductNode(AutomatonLeaf(build_pattern_wa(word, k, self.chain.alphabet), "P_wk"),
                           self._projection(word, None))
        return pipeline_partition(expr, len(word))

    def shap2(self, word: WordLike, position: int, k: int) -> float:
        word = self._word(word)
        if not 1 <= position <= len(word):
            raise ContractError(f"Position {position} outside 1..{len(word)}")
        expr = ProductNode(AutomatonLeaf(build_pattern_wa(word, k, self.chain.alphabet), "P_wk"),
                           self._projection(word, position))
        return pipeline_partition(expr, len(word))

    def value(self, pattern: Pattern) -> float:
        """V(p) = E_P[f_A(w') | w' in L_p] through the conditional pipeline."""
        if len(pattern) < 1:
            raise ContractError("V needs a pattern of length >= 1")
        pattern = Pattern.parse(list(pattern), self.chain.alphabet)
        return pipeline_evaluate(self._projection(tuple(pattern), None), pattern.entries)

    def expected_value(self, n: int) -> float:
        """E_P[f_A] over words of length n."""
        return expected_value(self.model, self.chain, n)

    def _report(self, word: Word, position: int, first: List[float], second: List[float],
                value: float) -> ShapReport:
        n = len(word)
        terms = tuple((m, first[m], second[m]) for m in mode_coefficients(self.mode, n))
        return ShapReport(
            word=word,
            position=position,
            score=combine_terms(self.mode, n, terms),
            mode=self.mode,
            per_k_terms=terms if self.config.engine.record_terms else None,
            value=value,
            baseline=first[n],
        )

    def explain(self, word: WordLike, position: int) -> ShapReport:
        word = self._word(word)
        first = self.shap1_all(word)
        second = self.shap2_all(word, position)
        return self._report(word, position, first, second, wa_evaluate(self.model, word))

    @log_execution(logger)
    def explain_all(self, word: WordLike, positions: Optional[List[int]] = None) -> List[ShapReport]:
        """
        Reports for the requested positions (all positions by default).

        Position passes run on a thread pool sized by the engine configuration;
        every score is combined in ascending hash count whatever the completion order.
        """
        word = self._word(word)
        n = len(word)
        positions = list(range(1, n + 1)) if positions is None else list(positions)
        for position in positions:
            if not 1 <= position <= n:
                raise ContractError(f"Position {position} outside 1..{n}")

        self.g_table.precompute(n)
        self.markov_dwa(n)
        first = self._graded(word, None)
        threads = self.config.engine.threads
        if threads == 1 or len(positions) <= 1:
            seconds = [self._graded(word, i) for i in positions]
        else:
            with ThreadPoolExecutor(max_workers=threads or None) as executor:
                seconds = list(executor.map(lambda i: self._graded(word, i), positions))

        value = wa_evaluate(self.model, word)
        logger.debug(f"explained |w|={n} at {len(positions)} positions, baseline {first[n]:.6g}")
        return [self._report(word, i, first, second, value) for i, second in zip(positions, seconds)]


def value_V(
    model: WeightedAutomaton,
    pattern: Pattern,
    length: int,
    chain: MarkovChain,
    method: str = "pipeline",
    cap: Optional[int] = None,
) -> float:
    """
    Conditional expectation of the model given that the word matches pattern.

    Args:
        model: Explained automaton
        pattern: Conditioning pattern
        length: Expected pattern length
        chain: Background distribution
        method: "pipeline" (conditional transducer) or "enumeration" (Bayes formula)
        cap: Enumeration cap on |p|

    Raises:
        ScaleError: when enumerating beyond the cap
    """
    if len(pattern) != length or length < 1:
        raise ContractError(f"Pattern length {len(pattern)} does not match the expected length {length}")
    if method == "pipeline":
        return ShapExplainer(model, chain).value(pattern)
    if method != "enumeration":
        raise ContractError(f"Unknown method {method!r}")
    cap = DEFAULT_CONFIG.oracle.max_word_length if cap is None else cap
    if length > cap:
        raise ScaleError(f"Pattern length {length} exceeds the enumeration cap {cap}")
    choices = [tuple(chain.alphabet) if entry == HASH else (entry,) for entry in pattern]
    mass, weighted = 0.0, 0.0
    for word in itertools.product(*choices):
        probability = seq_probability(chain, word)
        mass += probability
        weighted += probability * wa_evaluate(model, word)
    return weighted / mass


def expected_value(model: WeightedAutomaton, chain: MarkovChain, n: int) -> float:
    """|f_A (x) A_{w,P}|_n = E_P[f_A] on words of length n."""
    if n < 1:
        raise ContractError(f"Support length must be >= 1, got {n}")
    expr = ProductNode(AutomatonLeaf(model.with_alphabet(chain.alphabet), "A"),
                       AutomatonLeaf(build_markov_dwa(HASH * n, chain), "A_wP"))
    return pipeline_partition(expr, n)


def shap1(model: WeightedAutomaton, word: WordLike, k: int, chain: MarkovChain) -> float:
    return ShapExplainer(model, chain).shap1(word, k)


def shap2(model: WeightedAutomaton, word: WordLike, position: int, k: int, chain: MarkovChain) -> float:
    return ShapExplainer(model, chain).shap2(word, position, k)


def shap(
    model: WeightedAutomaton,
    word: WordLike,
    position: int,
    chain: MarkovChain,
    mode: WeightMode = WeightMode.CLASSIC_SHAPLEY,
) -> ShapReport:
    """SHAP score of one position of word."""
    return ShapExplainer(model, chain, mode).explain(word, position)


def shap_vector(
    model: WeightedAutomaton,
    word: WordLike,
    chain: MarkovChain,
    mode: WeightMode = WeightMode.CLASSIC_SHAPLEY,
    config: Optional[ApplicationConfig] = None,
) -> List[ShapReport]:
    """One report per position, sharing shap1 values, A_{w,P} and the G table."""
    return ShapExplainer(model, chain, mode, config).explain_all(word)
