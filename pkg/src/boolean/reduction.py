"""
SHAP for d-DNFs and decision trees by reduction to the automaton engine.

The boolean function becomes the indicator WA of its satisfying words, the
instance x becomes the word x_1...x_N and the vector distribution becomes
its sequential chain; the score of feature i is the score of position i.
"""

from typing import List, Optional, Sequence, Union

from src.automata.automaton import WeightedAutomaton
from src.boolean.clauses import DisjointDNF
from src.boolean.compiler import ddnf_to_wa
from src.boolean.decision_tree import DecisionTree, dt_to_ddnf
from src.config.settings import ApplicationConfig
from src.markov.sequentialize import VectorMarkov, seq_instance, sequentialize
from src.shap.engine import ShapExplainer
from src.shap.report import ShapReport, WeightMode
from src.utils.exceptions import ContractError

BooleanModel = Union[DisjointDNF, DecisionTree]


def boolean_to_wa(model: BooleanModel) -> WeightedAutomaton:
    formula = dt_to_ddnf(model) if isinstance(model, DecisionTree) else model
    return ddnf_to_wa(formula)


def _check_dimensions(model: BooleanModel, x: Sequence[int], distribution: VectorMarkov) -> None:
    if not (model.num_vars == len(x) == distribution.num_vars):
        raise ContractError(
            f"Dimension mismatch: model has {model.num_vars} variables, instance {len(x)}, "
            f"distribution {distribution.num_vars}"
        )
    if any(bit not in (0, 1) for bit in x):
        raise ContractError(f"Boolean instance must hold 0/1 values, got {list(x)}")


def boolean_explainer(
    model: BooleanModel,
    distribution: VectorMarkov,
    mode: WeightMode = WeightMode.CLASSIC_SHAPLEY,
    config: Optional[ApplicationConfig] = None,
) -> ShapExplainer:
    return ShapExplainer(boolean_to_wa(model), sequentialize(distribution), mode, config)


def shap_boolean(
    model: BooleanModel,
    x: Sequence[int],
    i: int,
    distribution: VectorMarkov,
    mode: WeightMode = WeightMode.CLASSIC_SHAPLEY,
) -> ShapReport:
    """SHAP score of feature X_i at the instance x."""
    _check_dimensions(model, x, distribution)
    if not 1 <= i <= len(x):
        raise ContractError(f"Feature index {i} outside 1..{len(x)}")
    return boolean_explainer(model, distribution, mode).explain(seq_instance(x), i)


def shap_boolean_vector(
    model: BooleanModel,
    x: Sequence[int],
    distribution: VectorMarkov,
    mode: WeightMode = WeightMode.CLASSIC_SHAPLEY,
    config: Optional[ApplicationConfig] = None,
) -> List[ShapReport]:
    _check_dimensions(model, x, distribution)
    return boolean_explainer(model, distribution, mode, config).explain_all(seq_instance(x))
