"""JSON documents for weighted automata and transducers."""

from typing import Dict

import numpy as np

from src.automata.automaton import Alphabet, WeightedAutomaton, WeightedTransducer, complete_family
from src.ingestion.validator import validate_required_fields
from src.utils.exceptions import ContractError

PAIR_SEPARATOR = "|"


def automaton_to_dict(automaton: WeightedAutomaton) -> dict:
    return {
        "alphabet": list(automaton.alphabet),
        "alpha": automaton.alpha.tolist(),
        "beta": automaton.beta.tolist(),
        "transitions": {s: automaton.matrix(s).toarray().tolist() for s in automaton.alphabet},
    }


def automaton_from_dict(document: dict) -> WeightedAutomaton:
    """
    Read {"alphabet": [...], "alpha": [...], "beta": [...], "transitions": {symbol: matrix}}.

    Raises:
        ContractError: for missing fields or inconsistent shapes
    """
    is_valid, errors = validate_required_fields(
        document, {"alphabet": list, "alpha": list, "beta": list, "transitions": dict}, "automaton document"
    )
    if not is_valid:
        raise ContractError("; ".join(errors))
    try:
        return WeightedAutomaton.from_dense(
            document["alphabet"], document["alpha"], document["transitions"], document["beta"]
        )
    except (TypeError, ValueError) as e:
        raise ContractError(f"automaton document is malformed: {e}") from e


def transducer_to_dict(transducer: WeightedTransducer) -> dict:
    return {
        "input_alphabet": list(transducer.input_alphabet),
        "output_alphabet": list(transducer.output_alphabet),
        "alpha": transducer.alpha.tolist(),
        "beta": transducer.beta.tolist(),
        "transitions": {
            f"{a}{PAIR_SEPARATOR}{b}": matrix.toarray().tolist()
            for (a, b), matrix in transducer.transitions.items()
            if matrix.nnz
        },
    }


def transducer_from_dict(document: dict) -> WeightedTransducer:
    """
    Read a transducer document; transitions are keyed "input|output", unlisted pairs are zero.
    """
    is_valid, errors = validate_required_fields(
        document,
        {"input_alphabet": list, "output_alphabet": list, "alpha": list, "beta": list, "transitions": dict},
        "transducer document",
    )
    if not is_valid:
        raise ContractError("; ".join(errors))
    input_alphabet = Alphabet.of(document["input_alphabet"])
    output_alphabet = Alphabet.of(document["output_alphabet"])
    entries: Dict = {}
    for key, matrix in document["transitions"].items():
        a, separator, b = key.partition(PAIR_SEPARATOR)
        if not separator or a not in input_alphabet or b not in output_alphabet:
            raise ContractError(f"Invalid transducer transition key {key!r}; expected 'input{PAIR_SEPARATOR}output'")
        entries[(a, b)] = np.asarray(matrix, dtype=np.float64)
    dim = len(document["alpha"])
    try:
        return WeightedTransducer(
            input_alphabet,
            output_alphabet,
            np.asarray(document["alpha"], dtype=np.float64),
            complete_family(input_alphabet, output_alphabet, dim, entries),
            np.asarray(document["beta"], dtype=np.float64),
        )
    except (TypeError, ValueError) as e:
        raise ContractError(f"transducer document is malformed: {e}") from e
