"""Brute-force enumeration oracles."""

from .brute_force import (
    chain_rule_probability,
    dense_evaluator,
    enumerate_language,
    oracle_expected_value,
    oracle_shap_patterns,
    oracle_shap_subsets,
    oracle_value,
)

__all__ = [
    'chain_rule_probability',
    'dense_evaluator',
    'enumerate_language',
    'oracle_expected_value',
    'oracle_shap_patterns',
    'oracle_shap_subsets',
    'oracle_value',
]
