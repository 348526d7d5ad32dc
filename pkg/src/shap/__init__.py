"""Exact SHAP attribution engine."""

from .report import (
    ShapReport,
    WeightMode,
    combine_terms,
    mode_coefficients,
    reports_to_document,
    reports_to_frame,
)
from .engine import (
    ShapExplainer,
    expected_value,
    shap,
    shap1,
    shap2,
    shap_vector,
    value_V,
)

__all__ = [
    'ShapReport',
    'WeightMode',
    'combine_terms',
    'mode_coefficients',
    'reports_to_document',
    'reports_to_frame',
    'ShapExplainer',
    'expected_value',
    'shap',
    'shap1',
    'shap2',
    'shap_vector',
    'value_V',
]
