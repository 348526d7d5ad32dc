"""Dagster pipeline verifying exact attributions against brute-force oracles."""

from dagster import Definitions

from assets import verification

all_assets = [
    verification.random_instances,
    verification.engine_attributions,
    verification.oracle_attributions,
    verification.verification_report,
]


defs = Definitions(
    assets=all_assets,
)
