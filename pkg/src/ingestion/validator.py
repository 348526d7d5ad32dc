"""Numeric and structural checks for distributions, models and JSON documents."""

from typing import Any, Dict, List, Mapping, Sequence, Tuple

import numpy as np

NORMALIZATION_TOLERANCE = 1e-12


def validate_probability_vector(
    values: Sequence[float],
    name: str,
    size: int,
    tolerance: float = NORMALIZATION_TOLERANCE,
) -> Tuple[bool, List[str]]:
    """
    Validate a strictly positive probability vector.

    Args:
        values: Vector to check
        name: Label used in error messages
        size: Expected length
        tolerance: Allowed deviation of the sum from 1

    Returns:
        Tuple of (is_valid, list_of_errors)
    """
    errors = []
    vector = np.asarray(values, dtype=np.float64)

    if vector.shape != (size,):
        errors.append(f"{name} has shape {vector.shape}, expected ({size},)")
        return False, errors
    if not np.isfinite(vector).all():
        errors.append(f"{name} has non-finite entries")
        return False, errors

    if (vector <= 0).any():
        errors.append(f"{name} has non-positive entries at {np.flatnonzero(vector <= 0).tolist()}")
    if abs(vector.sum() - 1.0) > tolerance:
        errors.append(f"{name} sums to {vector.sum():.17g}, expected 1")

    return len(errors) == 0, errors


def validate_stochastic_matrix(
    matrix: Sequence[Sequence[float]],
    name: str,
    size: int,
    tolerance: float = NORMALIZATION_TOLERANCE,
) -> Tuple[bool, List[str]]:
    """
    Validate a strictly positive row-stochastic square matrix.

    Returns:
        Tuple of (is_valid, list_of_errors)
    """
    errors = []
    array = np.asarray(matrix, dtype=np.float64)

    if array.shape != (size, size):
        errors.append(f"{name} has shape {array.shape}, expected ({size}, {size})")
        return False, errors
    if not np.isfinite(array).all():
        errors.append(f"{name} has non-finite entries")
        return False, errors

    if (array <= 0).any():
        rows, cols = np.nonzero(array <= 0)
        errors.append(f"{name} has non-positive entries at {list(zip(rows.tolist(), cols.tolist()))}")
    sums = array.sum(axis=1)
    bad_rows = np.flatnonzero(np.abs(sums - 1.0) > tolerance)
    if bad_rows.size:
        errors.append(f"{name} rows {bad_rows.tolist()} do not sum to 1")

    return len(errors) == 0, errors


def validate_required_fields(
    document: Any,
    required: Mapping[str, type],
    name: str,
) -> Tuple[bool, List[str]]:
    """
    Validate that a JSON document is an object carrying the required typed fields.

    Returns:
        Tuple of (is_valid, list_of_errors)
    """
    errors = []

    if not isinstance(document, dict):
        return False, [f"{name} must be a JSON object, got {type(document).__name__}"]

    for field_name, field_type in required.items():
        if field_name not in document:
            errors.append(f"{name} is missing field '{field_name}'")
        elif not isinstance(document[field_name], field_type):
            errors.append(
                f"{name} field '{field_name}' must be {field_type.__name__}, "
                f"got {type(document[field_name]).__name__}"
            )

    return len(errors) == 0, errors


def validate_signed_literals(
    clauses: Sequence[Sequence[int]],
    num_vars: int,
) -> Tuple[bool, List[str]]:
    """
    Validate DIMACS-style clauses: non-zero integers within 1..num_vars, no repeated variable.

    Returns:
        Tuple of (is_valid, list_of_errors)
    """
    errors = []

    for index, clause in enumerate(clauses, start=1):
        if not isinstance(clause, list):
            errors.append(f"clause {index} must be a list of signed integers")
            continue
        seen: Dict[int, int] = {}
        for literal in clause:
            if isinstance(literal, bool) or not isinstance(literal, int) or literal == 0:
                errors.append(f"clause {index} holds invalid literal {literal!r}")
                continue
            variable = abs(literal)
            if variable > num_vars:
                errors.append(f"clause {index} mentions X{variable} beyond num_vars={num_vars}")
            if variable in seen:
                errors.append(f"clause {index} repeats variable X{variable}")
            seen[variable] = literal

    return len(errors) == 0, errors
