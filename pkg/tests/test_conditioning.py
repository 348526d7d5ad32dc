"""Tests for conditional marginals, Markov DWAs and the conditional transducers."""

import itertools

import numpy as np
import pytest

from src.automata.automaton import HASH, wa_evaluate, wt_evaluate
from src.automata.pipeline import pipeline_evaluate_pair
from src.conditioning.constructions import (
    build_inverse_prob_dwa,
    build_markov_dwa,
    inverse_state,
    markov_state,
)
from src.conditioning.g_table import GTable, compute_G
from src.conditioning.transducers import (
    build_conditional_pipeline,
    build_conditional_wt,
    build_indicator_dft,
    build_swap_indicator_dft,
)
from src.markov.chain import marginal, pattern_probability, seq_probability
from src.patterns.pattern import BOS, Pattern, swap
from src.utils.exceptions import ContractError, ScaleError
from tests.fixtures.sample_models import AB, create_positional_chain, create_stationary_chain

P = np.array([[0.9, 0.1], [0.2, 0.8]])


def _patterns(length):
    return [Pattern(p) for p in itertools.product(("a", "b", HASH), repeat=length)]


def test_unconditional_marginals():
    """Test G rows anchored at the beginning of the word."""
    chain = create_stationary_chain()
    for m in range(1, 6):
        for j, symbol in enumerate(("a", "b")):
            assert compute_G(symbol, 0, BOS, m, chain) == pytest.approx(marginal(chain, m)[j])


def test_conditional_marginals_match_matrix_powers():
    """G(target, n, anchor, m) is entry (anchor, target) of P^(m - n) for a stationary chain."""
    chain = create_stationary_chain()
    for n in range(1, 10):
        for m in range(n + 1, 11):
            power = np.linalg.matrix_power(P, m - n)
            for i, anchor in enumerate(("a", "b")):
                for j, target in enumerate(("a", "b")):
                    assert compute_G(target, n, anchor, m, chain) == pytest.approx(power[i, j], abs=1e-12)


@pytest.mark.parametrize("extension", ["repeat-last", "uniform"])
def test_positional_marginals_match_matrix_products(extension):
    """With positional transitions G follows P_n, P_(n+1), ..., P_(m-1)."""
    chain = create_positional_chain(extension)
    for n in range(1, 10):
        for m in range(n + 1, 11):
            for i, anchor in enumerate(("a", "b", "c")):
                row = chain.transition(n)[i]
                for k in range(n + 1, m):
                    row = row @ chain.transition(k)
                for j, target in enumerate(("a", "b", "c")):
                    assert compute_G(target, n, anchor, m, chain) == pytest.approx(row[j], abs=1e-12)


@pytest.mark.parametrize("chain_factory", [create_stationary_chain, create_positional_chain])
def test_g_rows_are_normalized(chain_factory):
    """Every conditional row is a probability distribution over the next symbols."""
    chain = chain_factory()
    table = GTable(chain)
    for m in range(1, 11):
        assert table.row(0, BOS, m).sum() == pytest.approx(1.0, abs=1e-10)
        for n in range(1, m):
            for anchor in chain.alphabet:
                assert table.row(n, anchor, m).sum() == pytest.approx(1.0, abs=1e-10)


def test_positional_marginals():
    """Test G rows of a positional chain."""
    chain = create_positional_chain()
    expected = chain.transition(2)[1] @ chain.transition(3) @ chain.transition(4)
    assert compute_G("c", 2, "b", 5, chain) == pytest.approx(expected[2])


def test_hash_target_and_normalization():
    """Test the '#' target and row sums."""
    chain = create_positional_chain()
    table = GTable(chain)
    assert compute_G(HASH, 1, "a", 3, chain, table) == 1.0
    assert table.row(1, "a", 4).sum() == pytest.approx(1.0)
    assert table.row(0, BOS, 3).sum() == pytest.approx(1.0)


def test_g_table_contract():
    """Test invalid G table arguments."""
    chain = create_stationary_chain()
    table = GTable(chain)
    with pytest.raises(ContractError):
        table.row(0, "a", 2)
    with pytest.raises(ContractError):
        table.row(2, "a", 2)
    with pytest.raises(ContractError):
        compute_G("a", 1, "a", 2, chain, GTable(create_stationary_chain()))


def test_g_table_precompute_is_memoized():
    """Test that precomputed rows are reused."""
    chain = create_stationary_chain()
    table = GTable(chain)
    table.precompute(5)
    size = len(table)
    assert size > 0
    table.value("a", 2, "b", 4)
    assert len(table) == size


def test_markov_dwa_reproduces_probabilities():
    """Test the Markov DWA against word probabilities."""
    chain = create_positional_chain()
    dwa = build_markov_dwa("abc", chain)
    assert dwa.is_deterministic
    assert dwa.dim == 4 * 4
    for word in itertools.product(("a", "b", "c"), repeat=3):
        assert wa_evaluate(dwa, word) == pytest.approx(seq_probability(chain, word))
    assert wa_evaluate(dwa, "ab") == 0.0
    assert markov_state(0, 3, 3) == 3


def test_inverse_dwa_is_reciprocal_of_pattern_mass():
    """f(p) * P(L_p) = 1 on every pattern of length |w|."""
    chain = create_stationary_chain()
    dwa = build_inverse_prob_dwa("abb", chain)
    assert dwa.dim == 16 * 3
    for p in _patterns(3):
        assert wa_evaluate(dwa, p.entries) * pattern_probability(chain, p) == pytest.approx(1.0)


def test_swapped_inverse_dwa():
    """Test the inverse DWA with a swapped position."""
    chain = create_positional_chain()
    for i in range(1, 4):
        dwa = build_inverse_prob_dwa("abc", chain, swap_index=i)
        for p in itertools.product(("a", "b", "c", HASH), repeat=3):
            pattern = Pattern(p)
            mass = pattern_probability(chain, swap(pattern, i))
            assert wa_evaluate(dwa, p) * mass == pytest.approx(1.0)


def test_inverse_dwa_state_path():
    """Trace p = "##aab" with the swap at position 3 through the state space."""
    chain = create_stationary_chain()
    length, size = 5, 2
    dwa = build_inverse_prob_dwa("aabab", chain, swap_index=3)

    def advance(state, symbol):
        row = dwa.matrix(symbol).getrow(state)
        assert row.nnz == 1
        return int(row.indices[0]), float(row.data[0])

    state = inverse_state(0, 0, size, length, size)
    assert dwa.alpha[state] == 1.0
    visited, weight = [], 1.0
    for symbol in "##aab":
        state, w = advance(state, symbol)
        visited.append(state)
        weight *= w

    assert visited == [
        inverse_state(1, 0, size, length, size),
        inverse_state(2, 0, size, length, size),
        # the swapped position reads any symbol without moving the anchor
        inverse_state(3, 0, size, length, size),
        inverse_state(4, 4, 0, length, size),
        inverse_state(5, 5, 1, length, size),
    ]
    assert dwa.beta[state] == 1.0
    mass = marginal(chain, 4)[0] * P[0, 1]
    assert weight == pytest.approx(1.0 / mass)
    assert mass == pytest.approx(pattern_probability(chain, Pattern.parse("###ab")))


def test_inverse_dwa_contract():
    """Test invalid inverse DWA arguments."""
    chain = create_stationary_chain()
    with pytest.raises(ContractError):
        build_inverse_prob_dwa("", chain)
    with pytest.raises(ContractError):
        build_inverse_prob_dwa("ab", chain, swap_index=3)


def test_indicator_transducers():
    """Test the plain and swapped indicator transducers."""
    indicator = build_indicator_dft(AB)
    assert wt_evaluate(indicator, "ab", "a#") == 1.0
    assert wt_evaluate(indicator, "ab", "##") == 1.0
    assert wt_evaluate(indicator, "ab", "b#") == 0.0

    swapped = build_swap_indicator_dft(AB, 2)
    assert wt_evaluate(swapped, "ab", "ab") == 1.0
    assert wt_evaluate(swapped, "ab", "aa") == 1.0
    assert wt_evaluate(swapped, "ab", "bb") == 0.0
    assert wt_evaluate(swapped, "abb", "aaa") == 0.0
    with pytest.raises(ContractError):
        build_swap_indicator_dft(AB, 0)


@pytest.mark.parametrize("swap_index", [None, 1, 2])
def test_conditional_transducer(swap_index):
    """g(w', p) = P(w') / P(L_p') on the words matching p', 0 elsewhere."""
    chain = create_stationary_chain()
    g = build_conditional_wt("ab", chain, swap_index)
    pipeline = build_conditional_pipeline("ab", chain, swap_index)
    assert g.input_alphabet == AB
    assert g.output_alphabet == AB.extended()
    for p in _patterns(2):
        target = p if swap_index is None else swap(p, swap_index)
        mass = pattern_probability(chain, target)
        for word in itertools.product(("a", "b"), repeat=2):
            expected = seq_probability(chain, word) / mass if target.matches(word) else 0.0
            assert wt_evaluate(g, word, p.entries) == pytest.approx(expected)
            assert pipeline_evaluate_pair(pipeline, word, p.entries) == pytest.approx(expected)


def test_conditional_transducer_is_normalized():
    """Test that the conditional transducer sums to one per pattern."""
    chain = create_positional_chain()
    pipeline = build_conditional_pipeline("abc", chain, 2)
    for p in [Pattern.parse("a#c"), Pattern.parse("abc"), Pattern.parse("#b#")]:
        total = sum(
            pipeline_evaluate_pair(pipeline, w, p.entries) for w in itertools.product(("a", "b", "c"), repeat=3)
        )
        assert total == pytest.approx(1.0)


def test_conditional_transducer_materialization_limit():
    """Test the materialization limit on the conditional transducer."""
    chain = create_stationary_chain()
    assert build_conditional_wt("abab", chain, 4).dim == 5625
    with pytest.raises(ScaleError):
        build_conditional_wt("ababa", chain, 5)


@pytest.mark.parametrize("length", [1, 2, 3, 4, 5])
def test_reciprocal_identity_up_to_five_symbols(length):
    """f(p) * P(L_swap(p, i)) = 1 for every pattern and swap position of instances up to length 5."""
    chain = create_stationary_chain()
    word = "abbab"[:length]
    for swap_index in [None, *range(1, length + 1)]:
        dwa = build_inverse_prob_dwa(word, chain, swap_index=swap_index)
        for p in _patterns(length):
            target = p if swap_index is None else swap(p, swap_index)
            assert wa_evaluate(dwa, p.entries) * pattern_probability(chain, target) == pytest.approx(1.0, abs=1e-10)
