"""Tests for weighted automata, the operator algebra and pipeline evaluation."""

import itertools

import numpy as np
import pytest

from src.automata.automaton import (
    HASH,
    Alphabet,
    WeightedTransducer,
    as_word,
    check_word,
    wa_evaluate,
    wt_evaluate,
)
from src.automata.operators import (
    constant_automaton,
    partition_constant,
    wa_product,
    wa_project,
    wa_scale,
    wa_sum,
    wa_times_wt,
    wt_inverse,
)
from src.automata.pipeline import (
    AutomatonLeaf,
    InverseNode,
    MultiplicativeNode,
    ProductNode,
    ProjectionNode,
    ScaleNode,
    SumNode,
    TransducerLeaf,
    leaf,
    materialize,
    pipeline_evaluate,
    pipeline_evaluate_pair,
    pipeline_partition,
)
from src.automata.serialization import (
    automaton_from_dict,
    automaton_to_dict,
    transducer_from_dict,
    transducer_to_dict,
)
from src.conditioning.transducers import build_conditional_wt, build_indicator_dft
from src.oracle.brute_force import enumerate_language
from src.oracle.instances import random_automaton
from src.patterns.compiler import build_pattern_wa
from src.utils.exceptions import ContractError, InputDomainError, ScaleError
from tests.fixtures.sample_models import (
    AB,
    create_automaton_document,
    create_count_automaton,
    create_first_symbol_automaton,
    create_stationary_chain,
)


def _words(alphabet, max_length=3):
    for n in range(max_length + 1):
        yield from itertools.product(tuple(alphabet), repeat=n)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture
def pair(rng):
    return random_automaton(rng, AB, 3), random_automaton(rng, AB, 2)


def test_count_automaton_values():
    """Test evaluation of a small automaton."""
    counter = create_count_automaton()
    assert wa_evaluate(counter, "abab") == pytest.approx(2.0)
    assert wa_evaluate(counter, "bbb") == pytest.approx(0.0)
    # empty word: alpha . beta
    assert wa_evaluate(counter, "") == pytest.approx(0.0)


def test_unknown_symbol_reports_position():
    """Test that an unknown symbol is reported with its 1-based position."""
    with pytest.raises(InputDomainError) as info:
        check_word(AB, "abz")
    assert info.value.symbol == "z"
    assert info.value.position == 3


def test_alphabet_rejects_hash_symbol():
    """Test that '#' is refused as a base symbol."""
    with pytest.raises(ContractError):
        Alphabet(("a", HASH))
    with pytest.raises(ContractError):
        Alphabet(("a", "a"))
    extended = AB.extended()
    assert tuple(extended) == ("a", "b", HASH)
    assert extended.base() == AB


def test_determinism_flag():
    """Test the determinism flag on deterministic and branching automata."""
    assert create_first_symbol_automaton().is_deterministic
    assert not create_count_automaton().is_deterministic


def test_product_sum_scale_pointwise(pair):
    """Test the operators against pointwise arithmetic on every short word."""
    left, right = pair
    product = wa_product(left, right)
    total = wa_sum(left, right)
    scaled = wa_scale(left, -1.5)
    assert product.dim == 6
    assert total.dim == 5
    for word in _words(AB):
        f, g = wa_evaluate(left, word), wa_evaluate(right, word)
        assert wa_evaluate(product, word) == pytest.approx(f * g, abs=1e-12)
        assert wa_evaluate(total, word) == pytest.approx(f + g, abs=1e-12)
        assert wa_evaluate(scaled, word) == pytest.approx(-1.5 * f, abs=1e-12)


def test_partition_constant_matches_enumeration(pair):
    """Test the support sum against explicit enumeration of words."""
    automaton = pair[0]
    for n in range(5):
        expected = sum(enumerate_language(automaton, n).values())
        assert partition_constant(automaton, n) == pytest.approx(expected, abs=1e-10)


def test_constant_automaton():
    """Test the one-state constant automaton."""
    constant = constant_automaton(AB, 0.25)
    assert partition_constant(constant, 3) == pytest.approx(0.25 * 8)


def test_projection_sums_matching_words(pair):
    """Pi(f, T)(p) sums f over the words matching p when T is the matching indicator."""
    automaton = pair[0]
    projected = wa_project(automaton, build_indicator_dft(AB))
    assert projected.alphabet == AB.extended()
    for pattern in itertools.product(("a", "b", HASH), repeat=3):
        choices = [("a", "b") if e == HASH else (e,) for e in pattern]
        expected = sum(wa_evaluate(automaton, w) for w in itertools.product(*choices))
        assert wa_evaluate(projected, pattern) == pytest.approx(expected, abs=1e-10)


def test_inverse_and_multiplicative(pair):
    """Test the multiplicative and inverse constructions pointwise."""
    automaton = pair[0]
    indicator = build_indicator_dft(AB)
    inverse = wt_inverse(indicator)
    weighted = wa_times_wt(automaton, indicator)
    for word in itertools.product(("a", "b"), repeat=2):
        for pattern in itertools.product(("a", "b", HASH), repeat=2):
            value = wt_evaluate(indicator, word, pattern)
            assert wt_evaluate(inverse, pattern, word) == value
            assert wt_evaluate(weighted, word, pattern) == pytest.approx(wa_evaluate(automaton, word) * value)


def test_transducer_words_must_align():
    """Test that transducer words of different lengths are rejected."""
    with pytest.raises(ContractError):
        wt_evaluate(build_indicator_dft(AB), "ab", "a")


def test_materialization_limit(pair):
    """Test that products above the materialization limit raise ScaleError."""
    left, right = pair
    with pytest.raises(ScaleError):
        wa_product(left, right, limit=5)
    with pytest.raises(ScaleError):
        materialize(ProductNode(leaf(left), leaf(right)), limit=5)


def test_mismatched_alphabets_are_rejected(pair):
    """Test that operators refuse operands over different alphabets."""
    other = constant_automaton(Alphabet(("x", "y")))
    with pytest.raises(ContractError):
        wa_product(pair[0], other)
    with pytest.raises(ContractError):
        ProductNode(leaf(pair[0]), leaf(other))


def test_pipeline_agrees_with_materialized(pair):
    """Test sparse forward propagation against the built operators."""
    left, right = pair
    deterministic = create_first_symbol_automaton()
    expressions = [
        ProductNode(leaf(left), leaf(right)),
        SumNode(leaf(left), leaf(deterministic)),
        ScaleNode(ProductNode(leaf(deterministic), leaf(right)), 0.5),
    ]
    for expr in expressions:
        built = materialize(expr)
        assert built.dim == expr.dim
        for n in range(4):
            assert pipeline_partition(expr, n) == pytest.approx(partition_constant(built, n), abs=1e-10)
        for word in _words(AB):
            assert pipeline_evaluate(expr, word) == pytest.approx(wa_evaluate(built, word), abs=1e-12)


def test_projection_node(pair):
    """Test lazy projection against the materialized projection."""
    automaton = pair[0]
    indicator = build_indicator_dft(AB)
    expr = ProjectionNode(AutomatonLeaf(automaton), TransducerLeaf(indicator))
    built = wa_project(automaton, indicator)
    assert "Σσ" in expr.factorization
    for pattern in itertools.product(("a", "b", HASH), repeat=3):
        assert pipeline_evaluate(expr, pattern) == pytest.approx(wa_evaluate(built, pattern), abs=1e-12)


def test_seq2seq_pipeline(pair):
    """Test materializing the inverse of a multiplicative node into a transducer."""
    automaton = pair[1]
    expr = InverseNode(MultiplicativeNode(leaf(automaton), leaf(build_indicator_dft(AB))))
    built = materialize(expr)
    assert isinstance(built, WeightedTransducer)
    assert expr.input_alphabet == AB.extended()
    for word in itertools.product(("a", "b"), repeat=2):
        for pattern in itertools.product(("a", "b", HASH), repeat=2):
            assert pipeline_evaluate_pair(expr, pattern, word) == pytest.approx(
                wt_evaluate(built, pattern, word), abs=1e-12
            )


def test_leaf_storage_modes():
    """Test sparse and dense leaf storage."""
    assert not AutomatonLeaf(create_first_symbol_automaton()).dense
    assert AutomatonLeaf(create_count_automaton()).dense
    assert AutomatonLeaf(create_first_symbol_automaton(), dense=True).dense


def test_automaton_document():
    """Test reading and writing automaton documents."""
    automaton = automaton_from_dict(create_automaton_document())
    assert wa_evaluate(automaton, "aab") == pytest.approx(2.0)
    restored = automaton_from_dict(automaton_to_dict(automaton))
    assert wa_evaluate(restored, "aab") == pytest.approx(2.0)


def test_automaton_document_errors():
    """Test malformed automaton documents."""
    document = create_automaton_document()
    del document["beta"]
    with pytest.raises(ContractError):
        automaton_from_dict(document)
    document = create_automaton_document()
    document["transitions"]["a"] = [[1.0]]
    with pytest.raises(ContractError):
        automaton_from_dict(document)


def test_transducer_document_fills_missing_pairs():
    """Test that unlisted transducer pairs read as zero matrices."""
    document = transducer_to_dict(build_indicator_dft(AB))
    # only the matching pairs carry non-zero matrices
    assert set(document["transitions"]) == {"a|a", "a|#", "b|b", "b|#"}
    restored = transducer_from_dict(document)
    assert wt_evaluate(restored, "ab", "a#") == 1.0
    assert wt_evaluate(restored, "ab", "b#") == 0.0

    document["transitions"]["a-b"] = [[1.0]]
    with pytest.raises(ContractError):
        transducer_from_dict(document)


def test_as_word_normalizes_strings_and_sequences():
    """Test that strings split into characters and symbol sequences pass through."""
    assert as_word("ab#") == ("a", "b", HASH)
    assert as_word(["yes", "no"]) == ("yes", "no")
    assert as_word(("a",)) == ("a",)
    assert as_word("") == ()


def test_alphabet_of_recognizes_trailing_hash():
    """A single trailing '#' in a symbol list reads back as the pattern alphabet."""
    assert Alphabet.of(["a", "b", HASH]) == AB.extended()
    assert Alphabet.of(["a", "b"]) == AB
    with pytest.raises(ContractError):
        Alphabet.of(["a", HASH, "b"])
    with pytest.raises(ContractError):
        Alphabet.of([HASH])


def test_pattern_automaton_document_round_trip():
    """Automata over Sigma_# are read back from their own documents."""
    automaton = build_pattern_wa("ab", 1, AB)
    restored = automaton_from_dict(automaton_to_dict(automaton))
    assert restored.alphabet == AB.extended()
    for pattern in itertools.product(("a", "b", HASH), repeat=2):
        assert wa_evaluate(restored, pattern) == pytest.approx(wa_evaluate(automaton, pattern))


def test_conditional_transducer_document_round_trip():
    """Test that the conditional transducer survives a document round trip."""
    g = build_conditional_wt("ab", create_stationary_chain())
    restored = transducer_from_dict(transducer_to_dict(g))
    assert restored.input_alphabet == AB
    assert restored.output_alphabet == AB.extended()
    for word in itertools.product(("a", "b"), repeat=2):
        for pattern in itertools.product(("a", "b", HASH), repeat=2):
            assert wt_evaluate(restored, word, pattern) == pytest.approx(wt_evaluate(g, word, pattern))


def test_with_alphabet_reorders_symbols():
    """Test re-indexing an automaton to another symbol order."""
    automaton = create_count_automaton()
    reordered = automaton.with_alphabet(Alphabet(("b", "a")))
    assert tuple(reordered.alphabet) == ("b", "a")
    for word in _words(AB):
        assert wa_evaluate(reordered, word) == wa_evaluate(automaton, word)
    assert automaton.with_alphabet(AB) is automaton
    with pytest.raises(ContractError):
        automaton.with_alphabet(Alphabet(("a", "c")))


LAW_ALPHABETS = [Alphabet(("a",)), AB, Alphabet(("a", "b", "c"))]


def _assert_close(actual, expected, scale=1.0):
    assert abs(actual - expected) <= 1e-12 * max(1.0, abs(expected), scale)


def _law_case(seed):
    rng = np.random.default_rng(seed)
    alphabet = LAW_ALPHABETS[seed % len(LAW_ALPHABETS)]
    left = random_automaton(rng, alphabet, int(rng.integers(1, 4)))
    right = random_automaton(rng, alphabet, int(rng.integers(1, 4)))
    return rng, alphabet, left, right, float(rng.uniform(-2.0, 2.0))


@pytest.mark.parametrize("block", range(10))
def test_operator_laws_on_random_cases(block):
    """Two hundred seeded cases: every operator agrees with pointwise arithmetic up to length 4."""
    for seed in range(20 * block, 20 * block + 20):
        rng, alphabet, left, right, factor = _law_case(seed)
        product, total, scaled = wa_product(left, right), wa_sum(left, right), wa_scale(left, factor)
        indicator = build_indicator_dft(alphabet)
        projected = wa_project(left, indicator)
        weighted = wa_times_wt(right, indicator)
        inverse = wt_inverse(weighted)
        symbols = tuple(alphabet)
        extended = symbols + (HASH,)

        values = {}
        for word in _words(alphabet, 4):
            f, g = wa_evaluate(left, word), wa_evaluate(right, word)
            values[word] = f
            _assert_close(wa_evaluate(product, word), f * g, abs(f * g))
            _assert_close(wa_evaluate(total, word), f + g, abs(f) + abs(g))
            _assert_close(wa_evaluate(scaled, word), factor * f, abs(factor * f))

            matching = tuple(HASH if rng.random() < 0.5 else s for s in word)
            other = tuple(extended[int(rng.integers(len(extended)))] for _ in word)
            for pattern in (matching, other):
                expected = g * wt_evaluate(indicator, word, pattern)
                _assert_close(wt_evaluate(weighted, word, pattern), expected, abs(expected))
                assert wt_evaluate(inverse, pattern, word) == wt_evaluate(weighted, word, pattern)

        for n in range(5):
            terms = [v for w, v in values.items() if len(w) == n]
            _assert_close(partition_constant(left, n), sum(terms), sum(abs(v) for v in terms))

        for pattern in _words(Alphabet(extended, hash_extended=True), 4):
            choices = [symbols if e == HASH else (e,) for e in pattern]
            terms = [values[w] for w in itertools.product(*choices)]
            _assert_close(wa_evaluate(projected, pattern), sum(terms), sum(abs(v) for v in terms))


def test_mixed_product_consistency():
    """(A.B) (x) (C.D) = (A (x) C).(B (x) D) on random 2x2 blocks and along product automata."""
    rng = np.random.default_rng(21)
    for _ in range(100):
        a, b, c, d = (rng.uniform(-1.0, 1.0, (2, 2)) for _ in range(4))
        np.testing.assert_allclose(np.kron(a @ b, c @ d), np.kron(a, c) @ np.kron(b, d), rtol=0, atol=1e-13)

    left, right = random_automaton(rng, AB, 2), random_automaton(rng, AB, 2)
    product = wa_product(left, right)
    for word in _words(AB, 4):
        chain_left, chain_right, chain_product = np.eye(2), np.eye(2), np.eye(4)
        for symbol in word:
            chain_left = chain_left @ left.matrix(symbol).toarray()
            chain_right = chain_right @ right.matrix(symbol).toarray()
            chain_product = chain_product @ product.matrix(symbol).toarray()
        np.testing.assert_allclose(chain_product, np.kron(chain_left, chain_right), rtol=0, atol=1e-13)
