"""
Closed operator algebra over weighted automata and transducers.

Every constructor builds its result from Kronecker products, block-diagonal
sums or re-indexing of the operands' parameters and refuses to build a
representation whose dimension exceeds the materialization limit.
"""

from typing import Optional

import numpy as np
from scipy import sparse

from src.automata.automaton import (
    Alphabet,
    WeightedAutomaton,
    WeightedTransducer,
)
from src.config.settings import DEFAULT_CONFIG
from src.utils.exceptions import ContractError, ScaleError


def _check_limit(dim: int, limit: Optional[int], operation: str) -> None:
    limit = DEFAULT_CONFIG.engine.materialize_limit if limit is None else limit
    if dim > limit:
        raise ScaleError(
            f"{operation} would materialize dimension {dim} above the limit {limit}; "
            "use the pipeline evaluation instead"
        )


def _same_alphabet(left: Alphabet, right: Alphabet, operation: str) -> None:
    if left != right:
        raise ContractError(
            f"{operation} needs matching alphabets, got {list(left)} and {list(right)}"
        )


def constant_automaton(alphabet: Alphabet, value: float = 1.0) -> WeightedAutomaton:
    """Single-state automaton computing the constant language w -> value."""
    return WeightedAutomaton(
        alphabet,
        np.array([value]),
        {s: np.ones((1, 1)) for s in alphabet},
        np.array([1.0]),
    )


def wa_product(
    left: WeightedAutomaton,
    right: WeightedAutomaton,
    limit: Optional[int] = None,
) -> WeightedAutomaton:
    """Hadamard product: f(w) = f_left(w) * f_right(w), via Kronecker parameters."""
    _same_alphabet(left.alphabet, right.alphabet, "wa_product")
    _check_limit(left.dim * right.dim, limit, "wa_product")
    return WeightedAutomaton(
        left.alphabet,
        np.kron(left.alpha, right.alpha),
        {s: sparse.kron(left.matrix(s), right.matrix(s), format="csr") for s in left.alphabet},
        np.kron(left.beta, right.beta),
    )


def wa_sum(
    left: WeightedAutomaton,
    right: WeightedAutomaton,
    limit: Optional[int] = None,
) -> WeightedAutomaton:
    """Pointwise sum via the block-diagonal construction."""
    _same_alphabet(left.alphabet, right.alphabet, "wa_sum")
    _check_limit(left.dim + right.dim, limit, "wa_sum")
    return WeightedAutomaton(
        left.alphabet,
        np.concatenate([left.alpha, right.alpha]),
        {s: sparse.block_diag((left.matrix(s), right.matrix(s)), format="csr") for s in left.alphabet},
        np.concatenate([left.beta, right.beta]),
    )


def wa_scale(automaton: WeightedAutomaton, factor: float) -> WeightedAutomaton:
    """Multiply every value by factor (the initial vector is scaled)."""
    if not np.isfinite(factor):
        raise ContractError(f"Scale factor must be finite, got {factor}")
    return WeightedAutomaton(
        automaton.alphabet,
        automaton.alpha * float(factor),
        dict(automaton.transitions),
        automaton.beta,
    )


def partition_constant(automaton: WeightedAutomaton, n: int) -> float:
    """
    Compute |f_A|_n = alpha^T (sum_sigma A_sigma)^n beta.

    Uses n vector-matrix products with the summed operator, never enumeration.
    """
    if n < 0:
        raise ContractError(f"Support length must be non-negative, got {n}")
    operator_t = automaton.operator().T.tocsr()
    vector = np.array(automaton.alpha)
    for _ in range(n):
        vector = operator_t @ vector
    return float(vector @ automaton.beta)


def wa_project(
    automaton: WeightedAutomaton,
    transducer: WeightedTransducer,
    limit: Optional[int] = None,
) -> WeightedAutomaton:
    """
    Projection Pi(f_A, f_T)(u) = sum_{w in Sigma^|u|} f_A(w) f_T(w, u).

    The result lives over the transducer's output alphabet with matrices
    sum_sigma A_sigma (x) T_sigma^sigma'.
    """
    _same_alphabet(automaton.alphabet, transducer.input_alphabet, "wa_project")
    dim = automaton.dim * transducer.dim
    _check_limit(dim, limit, "wa_project")
    transitions = {}
    for output_symbol in transducer.output_alphabet:
        total = sparse.csr_matrix((dim, dim), dtype=np.float64)
        for symbol in automaton.alphabet:
            total = total + sparse.kron(
                automaton.matrix(symbol), transducer.matrix(symbol, output_symbol), format="csr"
            )
        transitions[output_symbol] = total
    return WeightedAutomaton(
        transducer.output_alphabet,
        np.kron(automaton.alpha, transducer.alpha),
        transitions,
        np.kron(automaton.beta, transducer.beta),
    )


def wt_inverse(transducer: WeightedTransducer) -> WeightedTransducer:
    """inv(f)(u, s) = f(s, u): swap the alphabets and re-index the matrix family."""
    return WeightedTransducer(
        transducer.output_alphabet,
        transducer.input_alphabet,
        transducer.alpha,
        {(b, a): matrix for (a, b), matrix in transducer.transitions.items()},
        transducer.beta,
    )


def wa_times_wt(
    automaton: WeightedAutomaton,
    transducer: WeightedTransducer,
    limit: Optional[int] = None,
) -> WeightedTransducer:
    """Multiplicative operator (f x g)(u, s) = f(u) * g(u, s)."""
    _same_alphabet(automaton.alphabet, transducer.input_alphabet, "wa_times_wt")
    _check_limit(automaton.dim * transducer.dim, limit, "wa_times_wt")
    return WeightedTransducer(
        transducer.input_alphabet,
        transducer.output_alphabet,
        np.kron(automaton.alpha, transducer.alpha),
        {
            (a, b): sparse.kron(automaton.matrix(a), matrix, format="csr")
            for (a, b), matrix in transducer.transitions.items()
        },
        np.kron(automaton.beta, transducer.beta),
    )
