"""
Composite operator expressions evaluated by sparse forward propagation.

A pipeline is an expression tree whose leaves are weighted automata or
transducers and whose inner nodes are the operators of the algebra
(product, sum, scale, projection, multiplicative, inverse). Nothing is
multiplied out: each node knows how its Kronecker-factored transition acts
on one composite state, and the forward vector is a map from state keys to
weights.

Leaves with at most one successor per (state, symbol) are walked state by
state and contribute scalar weights. Other leaves (typically the explained
model) are carried as a dense block: their key is the empty tuple and their
weights are numpy vectors and matrices, so a composite key stands for a
whole block of states. Only exact zeros are pruned.
"""

from abc import ABC, abstractmethod
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Tuple, Union

import numpy as np

from src.automata.automaton import (
    Alphabet,
    WeightedAutomaton,
    WeightedTransducer,
    WordLike,
    check_word,
)
from src.automata.operators import (
    _check_limit,
    wa_product,
    wa_project,
    wa_scale,
    wa_sum,
    wa_times_wt,
    wt_inverse,
)
from src.utils.exceptions import ContractError, ScaleError
from src.utils.logger import LoggerFactory

logger = LoggerFactory.get_logger(__name__)

Key = Hashable
Weight = Union[float, np.ndarray]
Transition = Tuple[Key, Weight]


def _kron(left: Weight, right: Weight) -> Weight:
    left_dense, right_dense = isinstance(left, np.ndarray), isinstance(right, np.ndarray)
    if left_dense and right_dense:
        return np.kron(left, right)
    # unit scalars leave the other factor untouched
    if not left_dense and left == 1.0:
        return right
    if not right_dense and right == 1.0:
        return left
    return left * right


def _apply(value: Weight, weight: Weight) -> Weight:
    if isinstance(weight, np.ndarray):
        return value @ weight
    return value * weight


def _contract(value: Weight, final: Weight) -> float:
    return float(np.dot(value, final))


class PipelineNode(ABC):
    """Common interface of language and seq2seq nodes."""

    dim: int
    factorization: str

    @abstractmethod
    def initial(self) -> List[Transition]:
        """Initial (key, weight) entries."""

    @abstractmethod
    def final(self, key: Key) -> Weight:
        """Final weight attached to a key."""

    @abstractmethod
    def materialize(self, limit: Optional[int] = None):
        """Build the equivalent WeightedAutomaton or WeightedTransducer."""

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.factorization}, dim={self.dim})"


class LanguageNode(PipelineNode):
    alphabet: Alphabet

    @abstractmethod
    def step(self, key: Key, symbol: str) -> Iterable[Transition]:
        """Successors of key when reading symbol."""


class Seq2SeqNode(PipelineNode):
    input_alphabet: Alphabet
    output_alphabet: Alphabet

    @abstractmethod
    def step_pair(self, key: Key, input_symbol: str, output_symbol: str) -> Iterable[Transition]:
        """Successors of key when reading an aligned symbol pair."""


class _LeafRows:
    """Lazily extracted CSR rows of a deterministic-structured leaf."""

    def __init__(self, matrices):
        self._matrices = matrices
        self._rows: Dict[Tuple[Hashable, int], List[Transition]] = {}

    def row(self, label: Hashable, state: int) -> List[Transition]:
        cached = self._rows.get((label, state))
        if cached is None:
            matrix = self._matrices[label]
            start, end = matrix.indptr[state], matrix.indptr[state + 1]
            cached = list(zip(matrix.indices[start:end].tolist(), matrix.data[start:end].tolist()))
            self._rows[(label, state)] = cached
        return cached


def _leaf_mode(dense: Optional[bool], deterministic: bool, dim: int, label: str) -> bool:
    dense = (not deterministic) if dense is None else dense
    if dense:
        _check_limit(dim, None, f"dense block for leaf {label}")
    return dense


class AutomatonLeaf(LanguageNode):
    """A WeightedAutomaton as a pipeline leaf."""

    def __init__(self, automaton: WeightedAutomaton, label: str = "A", dense: Optional[bool] = None):
        self.automaton = automaton
        self.alphabet = automaton.alphabet
        self.dim = automaton.dim
        self.factorization = label
        self.dense = _leaf_mode(dense, automaton.is_deterministic, automaton.dim, label)
        if self.dense:
            self._blocks = {s: automaton.matrix(s).toarray() for s in automaton.alphabet}
        else:
            self._rows = _LeafRows(automaton.transitions)

    def initial(self) -> List[Transition]:
        if self.dense:
            return [((), np.array(self.automaton.alpha))]
        return [(int(j), float(self.automaton.alpha[j])) for j in np.flatnonzero(self.automaton.alpha)]

    def step(self, key: Key, symbol: str) -> Iterable[Transition]:
        if self.dense:
            return [((), self._blocks[symbol])]
        return self._rows.row(symbol, key)

    def final(self, key: Key) -> Weight:
        if self.dense:
            return self.automaton.beta
        return float(self.automaton.beta[key])

    def materialize(self, limit: Optional[int] = None) -> WeightedAutomaton:
        return self.automaton


class TransducerLeaf(Seq2SeqNode):
    """A WeightedTransducer as a pipeline leaf."""

    def __init__(self, transducer: WeightedTransducer, label: str = "T", dense: Optional[bool] = None):
        self.transducer = transducer
        self.input_alphabet = transducer.input_alphabet
        self.output_alphabet = transducer.output_alphabet
        self.dim = transducer.dim
        self.factorization = label
        self.dense = _leaf_mode(dense, transducer.is_deterministic, transducer.dim, label)
        if self.dense:
            self._blocks = {p: m.toarray() for p, m in transducer.transitions.items()}
        else:
            self._rows = _LeafRows(transducer.transitions)

    def initial(self) -> List[Transition]:
        if self.dense:
            return [((), np.array(self.transducer.alpha))]
        return [(int(j), float(self.transducer.alpha[j])) for j in np.flatnonzero(self.transducer.alpha)]

    def step_pair(self, key: Key, input_symbol: str, output_symbol: str) -> Iterable[Transition]:
        if self.dense:
            return [((), self._blocks[(input_symbol, output_symbol)])]
        return self._rows.row((input_symbol, output_symbol), key)

    def final(self, key: Key) -> Weight:
        if self.dense:
            return self.transducer.beta
        return float(self.transducer.beta[key])

    def materialize(self, limit: Optional[int] = None) -> WeightedTransducer:
        return self.transducer


class ProductNode(LanguageNode):
    """Hadamard product: transition action A_sigma (x) B_sigma."""

    def __init__(self, left: LanguageNode, right: LanguageNode):
        if left.alphabet != right.alphabet:
            raise ContractError(
                f"product needs matching alphabets, got {list(left.alphabet)} and {list(right.alphabet)}"
            )
        self.left, self.right = left, right
        self.alphabet = left.alphabet
        self.dim = left.dim * right.dim
        self.factorization = f"({left.factorization} ⊗ {right.factorization})"

    def initial(self) -> List[Transition]:
        return [((kl, kr), _kron(vl, vr)) for kl, vl in self.left.initial() for kr, vr in self.right.initial()]

    def step(self, key: Key, symbol: str) -> Iterable[Transition]:
        left_key, right_key = key
        for kl, wl in self.left.step(left_key, symbol):
            for kr, wr in self.right.step(right_key, symbol):
                yield (kl, kr), _kron(wl, wr)

    def final(self, key: Key) -> Weight:
        return _kron(self.left.final(key[0]), self.right.final(key[1]))

    def materialize(self, limit: Optional[int] = None) -> WeightedAutomaton:
        return wa_product(self.left.materialize(limit), self.right.materialize(limit), limit)


class SumNode(LanguageNode):
    """Block-diagonal sum: keys are tagged with the branch they live in."""

    def __init__(self, left: LanguageNode, right: LanguageNode):
        if left.alphabet != right.alphabet:
            raise ContractError(
                f"sum needs matching alphabets, got {list(left.alphabet)} and {list(right.alphabet)}"
            )
        self.branches = (left, right)
        self.alphabet = left.alphabet
        self.dim = left.dim + right.dim
        self.factorization = f"({left.factorization} ⊕ {right.factorization})"

    def initial(self) -> List[Transition]:
        return [((tag, k), v) for tag, branch in enumerate(self.branches) for k, v in branch.initial()]

    def step(self, key: Key, symbol: str) -> Iterable[Transition]:
        tag, inner = key
        for k, w in self.branches[tag].step(inner, symbol):
            yield (tag, k), w

    def final(self, key: Key) -> Weight:
        tag, inner = key
        return self.branches[tag].final(inner)

    def materialize(self, limit: Optional[int] = None) -> WeightedAutomaton:
        left, right = self.branches
        return wa_sum(left.materialize(limit), right.materialize(limit), limit)


class ScaleNode(LanguageNode):
    def __init__(self, child: LanguageNode, factor: float):
        if not np.isfinite(factor):
            raise ContractError(f"Scale factor must be finite, got {factor}")
        self.child = child
        self.factor = float(factor)
        self.alphabet = child.alphabet
        self.dim = child.dim
        self.factorization = f"{self.factor:g}·{child.factorization}"

    def initial(self) -> List[Transition]:
        return [(k, v * self.factor) for k, v in self.child.initial()]

    def step(self, key: Key, symbol: str) -> Iterable[Transition]:
        return self.child.step(key, symbol)

    def final(self, key: Key) -> Weight:
        return self.child.final(key)

    def materialize(self, limit: Optional[int] = None) -> WeightedAutomaton:
        return wa_scale(self.child.materialize(limit), self.factor)


class ProjectionNode(LanguageNode):
    """Pi(f_A, f_T): transition action sum_sigma A_sigma (x) T_sigma^sigma'."""

    def __init__(self, automaton: LanguageNode, transducer: Seq2SeqNode):
        if automaton.alphabet != transducer.input_alphabet:
            raise ContractError(
                "projection needs the transducer input alphabet to equal the automaton alphabet, "
                f"got {list(transducer.input_alphabet)} and {list(automaton.alphabet)}"
            )
        self.automaton, self.transducer = automaton, transducer
        self.alphabet = transducer.output_alphabet
        self.dim = automaton.dim * transducer.dim
        self.factorization = f"Σσ[{automaton.factorization}_σ ⊗ {transducer.factorization}_σ]"
        self._pair_steps: Dict[Tuple[Key, str, str], List[Transition]] = {}

    def initial(self) -> List[Transition]:
        return [((ka, kt), _kron(va, vt))
                for ka, va in self.automaton.initial() for kt, vt in self.transducer.initial()]

    def step(self, key: Key, symbol: str) -> Iterable[Transition]:
        automaton_key, transducer_key = key
        for inner in self.automaton.alphabet:
            for kt, wt in self._transducer_step(transducer_key, inner, symbol):
                for ka, wa in self.automaton.step(automaton_key, inner):
                    yield (ka, kt), _kron(wa, wt)

    def _transducer_step(self, key: Key, inner: str, symbol: str) -> List[Transition]:
        # the same transducer key recurs under many automaton keys
        cached = self._pair_steps.get((key, inner, symbol))
        if cached is None:
            cached = list(self.transducer.step_pair(key, inner, symbol))
            self._pair_steps[(key, inner, symbol)] = cached
        return cached

    def final(self, key: Key) -> Weight:
        return _kron(self.automaton.final(key[0]), self.transducer.final(key[1]))

    def materialize(self, limit: Optional[int] = None) -> WeightedAutomaton:
        return wa_project(self.automaton.materialize(limit), self.transducer.materialize(limit), limit)


class MultiplicativeNode(Seq2SeqNode):
    """(f x g)(u, s) = f(u) g(u, s): transition action A_sigma (x) T_sigma^sigma'."""

    def __init__(self, automaton: LanguageNode, transducer: Seq2SeqNode):
        if automaton.alphabet != transducer.input_alphabet:
            raise ContractError(
                "multiplicative operator needs the transducer input alphabet to equal the automaton "
                f"alphabet, got {list(transducer.input_alphabet)} and {list(automaton.alphabet)}"
            )
        self.automaton, self.transducer = automaton, transducer
        self.input_alphabet = transducer.input_alphabet
        self.output_alphabet = transducer.output_alphabet
        self.dim = automaton.dim * transducer.dim
        self.factorization = f"({automaton.factorization} × {transducer.factorization})"

    def initial(self) -> List[Transition]:
        return [((ka, kt), _kron(va, vt))
                for ka, va in self.automaton.initial() for kt, vt in self.transducer.initial()]

    def step_pair(self, key: Key, input_symbol: str, output_symbol: str) -> Iterable[Transition]:
        automaton_key, transducer_key = key
        for kt, wt in self.transducer.step_pair(transducer_key, input_symbol, output_symbol):
            for ka, wa in self.automaton.step(automaton_key, input_symbol):
                yield (ka, kt), _kron(wa, wt)

    def final(self, key: Key) -> Weight:
        return _kron(self.automaton.final(key[0]), self.transducer.final(key[1]))

    def materialize(self, limit: Optional[int] = None) -> WeightedTransducer:
        return wa_times_wt(self.automaton.materialize(limit), self.transducer.materialize(limit), limit)


class InverseNode(Seq2SeqNode):
    def __init__(self, transducer: Seq2SeqNode):
        self.child = transducer
        self.input_alphabet = transducer.output_alphabet
        self.output_alphabet = transducer.input_alphabet
        self.dim = transducer.dim
        self.factorization = f"inv({transducer.factorization})"

    def initial(self) -> List[Transition]:
        return self.child.initial()

    def step_pair(self, key: Key, input_symbol: str, output_symbol: str) -> Iterable[Transition]:
        return self.child.step_pair(key, output_symbol, input_symbol)

    def final(self, key: Key) -> Weight:
        return self.child.final(key)

    def materialize(self, limit: Optional[int] = None) -> WeightedTransducer:
        return wt_inverse(self.child.materialize(limit))


def leaf(model: Union[WeightedAutomaton, WeightedTransducer], label: Optional[str] = None,
         dense: Optional[bool] = None) -> PipelineNode:
    """Wrap an automaton or transducer as a pipeline leaf."""
    if isinstance(model, WeightedAutomaton):
        return AutomatonLeaf(model, label or "A", dense)
    if isinstance(model, WeightedTransducer):
        return TransducerLeaf(model, label or "T", dense)
    raise ContractError(f"Cannot wrap {type(model).__name__} as a pipeline leaf")


def _advance(state: Dict[Key, Weight], transitions_of: Callable[[Key], Iterable[Transition]]) -> Dict[Key, Weight]:
    advanced: Dict[Key, Weight] = {}
    for key in sorted(state):
        value = state[key]
        for next_key, weight in transitions_of(key):
            contribution = _apply(value, weight)
            previous = advanced.get(next_key)
            advanced[next_key] = contribution if previous is None else previous + contribution
    return {k: v for k, v in advanced.items() if np.any(v)}


def _start(expr: PipelineNode) -> Dict[Key, Weight]:
    state: Dict[Key, Weight] = {}
    for key, value in expr.initial():
        previous = state.get(key)
        state[key] = value if previous is None else previous + value
    return {k: v for k, v in state.items() if np.any(v)}


def _require_language(expr) -> None:
    if not isinstance(expr, LanguageNode):
        raise ContractError(f"Expected a pipeline denoting a language, got {type(expr).__name__}")


def pipeline_forward(expr: LanguageNode, n: int) -> Dict[Key, Weight]:
    """Forward vector after reading every word of length n (summed over Sigma^n)."""
    _require_language(expr)
    if n < 0:
        raise ContractError(f"Support length must be non-negative, got {n}")
    symbols = tuple(expr.alphabet)
    state = _start(expr)
    for position in range(n):
        state = _advance(state, lambda key: (t for s in symbols for t in expr.step(key, s)))
        logger.debug(f"forward step {position + 1}/{n}: {len(state)} live keys")
    return state


def pipeline_partition(expr: LanguageNode, n: int) -> float:
    """Partition constant |f|_n of a composite language by sparse forward propagation."""
    state = pipeline_forward(expr, n)
    return sum((_contract(state[key], expr.final(key)) for key in sorted(state)), 0.0)


def pipeline_partition_by(expr: LanguageNode, n: int, grouping: Callable[[Key], Hashable]) -> Dict[Hashable, float]:
    """Partition constant at support n split by a function of the final key."""
    state = pipeline_forward(expr, n)
    totals: Dict[Hashable, float] = {}
    for key in sorted(state):
        group = grouping(key)
        totals[group] = totals.get(group, 0.0) + _contract(state[key], expr.final(key))
    return totals


def pipeline_evaluate(expr: LanguageNode, word: WordLike) -> float:
    """Value of a composite language on one word."""
    _require_language(expr)
    word = check_word(expr.alphabet, word)
    state = _start(expr)
    for symbol in word:
        state = _advance(state, lambda key: expr.step(key, symbol))
    return sum((_contract(state[key], expr.final(key)) for key in sorted(state)), 0.0)


def pipeline_evaluate_pair(expr: Seq2SeqNode, word: WordLike, output: WordLike) -> float:
    """Value of a composite seq2seq language on one aligned pair."""
    if not isinstance(expr, Seq2SeqNode):
        raise ContractError(f"Expected a pipeline denoting a seq2seq language, got {type(expr).__name__}")
    word = check_word(expr.input_alphabet, word)
    output = check_word(expr.output_alphabet, output)
    if len(word) != len(output):
        raise ContractError(f"Transducer words must be aligned, got lengths {len(word)} and {len(output)}")
    state = _start(expr)
    for a, b in zip(word, output):
        state = _advance(state, lambda key: expr.step_pair(key, a, b))
    return sum((_contract(state[key], expr.final(key)) for key in sorted(state)), 0.0)


def materialize(expr: PipelineNode, limit: Optional[int] = None):
    """Fully build a composite expression; refused above the materialization limit."""
    try:
        _check_limit(expr.dim, limit, f"materializing {expr.factorization}")
    except ScaleError:
        logger.debug(f"refusing to materialize dim {expr.dim}")
        raise
    return expr.materialize(limit)
