"""Compile disjoint DNFs into weighted automata over {"0", "1"}."""

from functools import reduce

import numpy as np
from scipy import sparse

from src.automata.automaton import HASH, Alphabet, WeightedAutomaton
from src.automata.operators import constant_automaton, wa_sum
from src.boolean.clauses import Clause, DisjointDNF
from src.markov.sequentialize import BOOLEAN_ALPHABET
from src.patterns.pattern import Pattern
from src.utils.logger import LoggerFactory

logger = LoggerFactory.get_logger(__name__)


def clause_to_pattern(clause: Clause, num_vars: int) -> Pattern:
    """Start from #^N and fix position k to "1" / "0" for a positive / negative literal on X_k."""
    entries = [HASH] * num_vars
    for variable, polarity in clause.literals:
        entries[variable - 1] = "1" if polarity else "0"
    return Pattern(tuple(entries))


def pattern_language_dfa(pattern: Pattern, alphabet: Alphabet) -> WeightedAutomaton:
    """{0,1} DFA of L_p: a chain of |p| + 1 states, position t reading any symbol p_t allows."""
    alphabet = alphabet.base()
    length = len(pattern)
    dim = length + 1
    transitions = {}
    for symbol in alphabet:
        rows = [t for t, entry in enumerate(pattern) if entry == HASH or entry == symbol]
        transitions[symbol] = sparse.csr_matrix(
            (np.ones(len(rows)), (rows, [t + 1 for t in rows])), shape=(dim, dim)
        )
    alpha = np.zeros(dim)
    alpha[0] = 1.0
    beta = np.zeros(dim)
    beta[length] = 1.0
    return WeightedAutomaton(alphabet, alpha, transitions, beta)


def ddnf_to_wa(formula: DisjointDNF) -> WeightedAutomaton:
    """
    Indicator of the satisfying assignments as a sum of per-clause DFAs.

    Disjointness keeps the sum in {0, 1}. A formula without clauses is the constant 0.
    """
    if not formula.clauses:
        return constant_automaton(BOOLEAN_ALPHABET, 0.0)
    dfas = [pattern_language_dfa(clause_to_pattern(c, formula.num_vars), BOOLEAN_ALPHABET) for c in formula.clauses]
    automaton = reduce(wa_sum, dfas)
    logger.debug(f"compiled {len(formula)} clauses over {formula.num_vars} variables into dim {automaton.dim}")
    return automaton
