"""Dagster assets cross-checking engine attributions against brute-force oracles."""

from dagster import asset, AssetExecutionContext
from typing import Any, Dict, List
from datetime import datetime

import numpy as np
import polars as pl

from src.automata.automaton import Alphabet
from src.automata.serialization import automaton_from_dict, automaton_to_dict
from src.config.settings import ApplicationConfig
from src.ingestion.loader import write_json
from src.markov.chain import chain_from_dict, chain_to_dict
from src.oracle.brute_force import oracle_shap_patterns
from src.oracle.instances import random_automaton, random_chain, random_word
from src.shap.engine import shap_vector
from src.shap.report import WeightMode

SEED = 20240601
INSTANCE_COUNT = 20
REPORT_PATH = "verification_report.json"


@asset
def random_instances(context: AssetExecutionContext) -> List[Dict[str, Any]]:
    """
    Seeded random (automaton, chain, word) triples as JSON-ready documents.

    Returns:
        List of instance documents
    """
    context.log.info(f"Generating {INSTANCE_COUNT} random instances (seed {SEED})...")
    rng = np.random.default_rng(SEED)
    instances = []

    for index in range(INSTANCE_COUNT):
        alphabet = Alphabet(("a", "b") if index % 2 == 0 else ("a", "b", "c"))
        kind = "stationary" if index % 3 else "positional"
        instances.append({
            "id": index,
            "model": automaton_to_dict(random_automaton(rng, alphabet, int(rng.integers(1, 5)))),
            "chain": chain_to_dict(random_chain(rng, alphabet, kind)),
            "word": random_word(rng, alphabet, int(rng.integers(2, 6))),
        })

    context.log.info(f"✓ Generated {len(instances)} instances")
    return instances


def _attribution_rows(instance: Dict[str, Any], mode: WeightMode, scores: List[float]) -> List[Dict[str, Any]]:
    return [
        {"id": instance["id"], "mode": mode.value, "position": position, "score": score}
        for position, score in enumerate(scores, start=1)
    ]


@asset
def engine_attributions(
    context: AssetExecutionContext,
    random_instances: List[Dict[str, Any]],
) -> List[Dict[str, Any]]:
    """Attribution vectors from the automaton pipeline, both weight modes."""
    context.log.info("Computing engine attributions...")
    rows = []

    for instance in random_instances:
        model = automaton_from_dict(instance["model"])
        chain = chain_from_dict(instance["chain"])
        for mode in WeightMode:
            reports = shap_vector(model, instance["word"], chain, mode)
            rows.extend(_attribution_rows(instance, mode, [r.score for r in reports]))

    context.log.info(f"✓ Computed {len(rows)} engine scores")
    return rows


@asset
def oracle_attributions(
    context: AssetExecutionContext,
    random_instances: List[Dict[str, Any]],
) -> List[Dict[str, Any]]:
    """Attribution vectors by exhaustive pattern enumeration, both weight modes."""
    context.log.info("Computing oracle attributions...")
    rows = []

    for instance in random_instances:
        model = automaton_from_dict(instance["model"])
        chain = chain_from_dict(instance["chain"])
        word = instance["word"]
        for mode in WeightMode:
            scores = [oracle_shap_patterns(model, word, i, chain, mode) for i in range(1, len(word) + 1)]
            rows.extend(_attribution_rows(instance, mode, scores))

    context.log.info(f"✓ Computed {len(rows)} oracle scores")
    return rows


@asset
def verification_report(
    context: AssetExecutionContext,
    engine_attributions: List[Dict[str, Any]],
    oracle_attributions: List[Dict[str, Any]],
) -> Dict[str, Any]:
    """
    Join engine and oracle scores and summarize the deviations.

    Returns:
        Dictionary with per-mode maxima and the overall verdict
    """
    tolerance = ApplicationConfig.create_from_environment().verification.tolerance
    keys = ["id", "mode", "position"]
    df = (
        pl.DataFrame(engine_attributions)
        .join(pl.DataFrame(oracle_attributions), on=keys, suffix="_oracle")
        .with_columns((pl.col("score") - pl.col("score_oracle")).abs().alias("abs_dev"))
        .sort(keys)
    )
    by_mode = df.group_by("mode").agg(pl.col("abs_dev").max().alias("max_abs_dev")).sort("mode")
    max_abs_dev = float(df["abs_dev"].max()) if len(df) else 0.0

    report = {
        "timestamp": datetime.now().isoformat(),
        "summary": {
            "scores_compared": len(df),
            "max_abs_dev": max_abs_dev,
            "tolerance": tolerance,
            "passed": max_abs_dev <= tolerance,
        },
        "by_mode": {row["mode"]: row["max_abs_dev"] for row in by_mode.iter_rows(named=True)},
    }

    if report["summary"]["passed"]:
        context.log.info(f"✓ Engine matches oracle: max deviation {max_abs_dev:.3e}")
    else:
        context.log.warning(f"Engine deviates from oracle: max deviation {max_abs_dev:.3e} > {tolerance:g}")

    write_json(REPORT_PATH, report)
    context.log.info(f"Report saved to {REPORT_PATH}")
    return report
