"""Boolean models (d-DNFs, decision trees) and their reduction to automata."""

from .clauses import (
    Clause,
    DisjointDNF,
    DisjointnessResult,
    check_disjoint,
    ddnf_from_dict,
    ddnf_to_dict,
    evaluate_ddnf,
)
from .decision_tree import DecisionTree, dt_to_ddnf, evaluate_tree, tree_from_dict, tree_to_dict
from .compiler import clause_to_pattern, ddnf_to_wa, pattern_language_dfa
from .reduction import boolean_explainer, boolean_to_wa, shap_boolean, shap_boolean_vector

__all__ = [
    'Clause',
    'DisjointDNF',
    'DisjointnessResult',
    'check_disjoint',
    'ddnf_from_dict',
    'ddnf_to_dict',
    'evaluate_ddnf',
    'DecisionTree',
    'dt_to_ddnf',
    'evaluate_tree',
    'tree_from_dict',
    'tree_to_dict',
    'clause_to_pattern',
    'ddnf_to_wa',
    'pattern_language_dfa',
    'boolean_explainer',
    'boolean_to_wa',
    'shap_boolean',
    'shap_boolean_vector',
]
