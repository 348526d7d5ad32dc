"""Tests for coalition patterns and the pattern automata."""

import itertools

import pytest

from src.automata.automaton import HASH, wa_evaluate
from src.automata.operators import partition_constant
from src.patterns.compiler import build_pattern_dfa, build_pattern_wa
from src.patterns.pattern import (
    BOS,
    Pattern,
    coalition_count,
    matches,
    patterns_with_hashes,
    pos,
    swap,
    sym,
)
from src.utils.exceptions import ContractError, InputDomainError
from tests.fixtures.sample_models import AB


def test_swap_frees_one_position():
    """Test swap on the binary example."""
    assert swap(Pattern.parse("##00#1"), 3) == Pattern.parse("###0#1")
    # freeing a hash is a no-op
    assert swap(Pattern.parse("##00#1"), 1) == Pattern.parse("##00#1")
    with pytest.raises(ContractError):
        swap(Pattern.parse("ab"), 3)


def test_matching():
    """Test pattern matching."""
    p = Pattern.parse("a#b")
    assert matches("aab", p)
    assert matches("abb", p)
    assert not matches("bab", p)
    assert not matches("aabb", p)
    assert p.matches("abb")


def test_pos_and_sym():
    """Test fixed positions and symbols of a pattern."""
    p = Pattern.parse("#ab#")
    assert pos(p) == 3
    assert sym(p) == "b"
    empty = Pattern.empty(4)
    assert empty.pos == 0
    assert empty.sym == BOS
    assert Pattern.full("ab").pos == 2


def test_coalition_view():
    """Test patterns as coalitions."""
    p = Pattern.parse("#a#b")
    assert p.hash_count == 2
    assert p.coalition == frozenset({2, 4})


def test_parse_token_form():
    """Test parsing space-separated patterns."""
    p = Pattern.parse(["bb", None, "c"])
    assert p.entries == ("bb", HASH, "c")
    assert p.to_json() == ["bb", None, "c"]
    assert Pattern.parse("a#").to_json() == "a#"


def test_parse_rejects_unknown_symbol():
    """Test parsing a pattern with an unknown symbol."""
    with pytest.raises(InputDomainError) as info:
        Pattern.parse("a#z", AB)
    assert info.value.position == 3


def test_coalition_count():
    """Test coalition counts."""
    assert coalition_count(4, 2) == 6
    assert coalition_count(30, 15) == 155117520
    with pytest.raises(ContractError):
        coalition_count(3, 4)


def test_patterns_with_hashes():
    """Test listing the patterns with k hashes."""
    patterns = list(patterns_with_hashes("abc", 1))
    assert [str(p) for p in patterns] == ["#bc", "a#c", "ab#"]
    assert len(list(patterns_with_hashes("abcab", 2))) == 10


def test_pattern_wa_is_uniform():
    """Each pattern of w with k hashes gets 1 / C(|w|, k); everything else gets 0."""
    word = "aabab"
    automaton = build_pattern_wa(word, 2, AB)
    assert wa_evaluate(automaton, "#a#ab") == pytest.approx(1 / 10)
    assert wa_evaluate(automaton, "aab##") == pytest.approx(1 / 10)
    assert wa_evaluate(automaton, "#b#ab") == 0.0
    assert wa_evaluate(automaton, "#abab") == 0.0
    assert wa_evaluate(automaton, "#a#a") == 0.0
    assert partition_constant(automaton, 5) == pytest.approx(1.0)


def test_pattern_wa_support():
    """Test the support of the pattern automaton."""
    word = "aba"
    for k in range(4):
        automaton = build_pattern_wa(word, k, AB)
        expected = {str(p) for p in patterns_with_hashes(word, k)}
        for candidate in itertools.product(("a", "b", HASH), repeat=3):
            value = wa_evaluate(automaton, candidate)
            if "".join(candidate) in expected:
                assert value == pytest.approx(1 / coalition_count(3, k))
            else:
                assert value == 0.0


def test_graded_pattern_dfa_accepts_every_hash_count():
    """Test that the graded pattern DFA accepts every hash count."""
    word = "abba"
    graded = build_pattern_dfa(word, AB, len(word), graded=True)
    assert graded.is_deterministic
    # every pattern of w is accepted once
    assert partition_constant(graded, 4) == pytest.approx(2 ** 4)
    single = build_pattern_dfa(word, AB, 2)
    assert partition_constant(single, 4) == pytest.approx(6)


def test_pattern_dfa_errors():
    """Test pattern DFA argument errors."""
    with pytest.raises(ContractError):
        build_pattern_dfa("ab", AB, 3)
    with pytest.raises(InputDomainError):
        build_pattern_wa("ac", 1, AB)
