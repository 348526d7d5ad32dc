"""JSON readers for models, distributions and instances."""

import json
from pathlib import Path
from typing import Any, Callable, Optional, TypeVar, Union

from src.automata.automaton import WeightedAutomaton, WeightedTransducer
from src.automata.serialization import automaton_from_dict, transducer_from_dict
from src.boolean.clauses import DisjointDNF, ddnf_from_dict
from src.boolean.decision_tree import DecisionTree, tree_from_dict
from src.markov.chain import MarkovChain, chain_from_dict
from src.markov.sequentialize import VectorMarkov, vector_markov_from_dict
from src.utils.exceptions import DocumentError, ShapMarkovError
from src.utils.logger import LoggerFactory

logger = LoggerFactory.get_logger(__name__)

T = TypeVar("T")
PathLike = Union[str, Path]


def _reject_constant(name: str):
    raise ValueError(f"non-finite number {name} is not allowed")


def read_json(file_path: PathLike) -> Any:
    """
    Read a JSON document, refusing NaN and Infinity literals.

    Raises:
        DocumentError: naming the file when it is missing or unparsable
    """
    path = Path(file_path)
    try:
        with path.open("r", encoding="utf-8") as handle:
            return json.load(handle, parse_constant=_reject_constant)
    except FileNotFoundError as e:
        raise DocumentError("file not found", path=str(path)) from e
    except (json.JSONDecodeError, ValueError, UnicodeDecodeError) as e:
        raise DocumentError(f"invalid JSON: {e}", path=str(path)) from e


def write_json(file_path: PathLike, document: Any) -> None:
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_json(document) + "\n", encoding="utf-8")


def dump_json(document: Any) -> str:
    """Deterministic JSON text: sorted keys, fixed separators, shortest float repr."""
    return json.dumps(document, sort_keys=True, indent=2, allow_nan=False)


def _load(file_path: PathLike, build: Callable[[Any], T], what: str) -> T:
    document = read_json(file_path)
    try:
        result = build(document)
    except ShapMarkovError as e:
        raise DocumentError(f"invalid {what}: {e}", path=str(file_path)) from e
    logger.debug(f"loaded {what} from {file_path}")
    return result


def load_automaton(file_path: PathLike) -> WeightedAutomaton:
    return _load(file_path, automaton_from_dict, "weighted automaton")


def load_transducer(file_path: PathLike) -> WeightedTransducer:
    return _load(file_path, transducer_from_dict, "weighted transducer")


def load_chain(file_path: PathLike) -> MarkovChain:
    return _load(file_path, chain_from_dict, "Markov chain")


def load_vector_markov(file_path: PathLike) -> VectorMarkov:
    return _load(file_path, vector_markov_from_dict, "vector Markov distribution")


def load_ddnf(file_path: PathLike) -> DisjointDNF:
    return _load(file_path, ddnf_from_dict, "d-DNF")


def load_tree(file_path: PathLike, num_vars: Optional[int] = None) -> DecisionTree:
    return _load(file_path, lambda document: tree_from_dict(document, num_vars), "decision tree")
