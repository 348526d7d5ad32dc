"""Tests for the command-line entry point."""

import json

import pytest

from main import EXIT_DEVIATION, EXIT_INPUT, EXIT_OK, EXIT_SCALE, run
from src.automata.automaton import wa_evaluate
from src.automata.serialization import automaton_from_dict, transducer_to_dict
from src.conditioning.transducers import build_conditional_wt
from src.ingestion.loader import write_json
from src.shap.report import WeightMode, mode_coefficients
from tests.fixtures.sample_models import (
    create_automaton_document,
    create_chain_document,
    create_example_ddnf_document,
    create_stationary_chain,
    create_tree_document,
    create_vector_markov_document,
)


@pytest.fixture
def inputs(tmp_path):
    """Write one document of each kind and return their paths."""
    paths = {
        "model": tmp_path / "model.json",
        "chain": tmp_path / "chain.json",
        "ddnf": tmp_path / "ddnf.json",
        "tree": tmp_path / "tree.json",
        "vector4": tmp_path / "vector4.json",
        "vector3": tmp_path / "vector3.json",
    }
    write_json(paths["model"], create_automaton_document())
    write_json(paths["chain"], create_chain_document())
    write_json(paths["ddnf"], create_example_ddnf_document())
    write_json(paths["tree"], create_tree_document())
    write_json(paths["vector4"], create_vector_markov_document(4))
    write_json(paths["vector3"], create_vector_markov_document(3))
    return {name: str(path) for name, path in paths.items()}


def _json_output(capsys):
    return json.loads(capsys.readouterr().out)


def test_shap_wa_json(inputs, capsys):
    """Test JSON output of shap-wa."""
    code = run(["shap-wa", "--model", inputs["model"], "--chain", inputs["chain"],
                "--instance", "abab", "--format", "json"])
    assert code == EXIT_OK
    document = _json_output(capsys)
    assert document["instance"] == "abab"
    assert document["mode"] == "classic"
    assert [s["position"] for s in document["scores"]] == [1, 2, 3, 4]
    assert document["value"] == pytest.approx(2.0)
    total = sum(s["score"] for s in document["scores"])
    assert total == pytest.approx(document["value"] - document["baseline"])


def test_json_output_is_deterministic(inputs, capsys):
    """Test that repeated runs print identical JSON."""
    argv = ["shap-wa", "--model", inputs["model"], "--chain", inputs["chain"], "--instance", "abba",
            "--mode", "paper", "--format", "json"]
    assert run(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert run(argv) == EXIT_OK
    assert capsys.readouterr().out == first


def test_verbose_terms_recombine(inputs, capsys):
    """Test that verbose terms recombine into the score."""
    code = run(["-v", "shap-wa", "--model", inputs["model"], "--chain", inputs["chain"],
                "--instance", "abb", "--position", "2", "--format", "json"])
    assert code == EXIT_OK
    document = _json_output(capsys)
    (entry,) = document["scores"]
    coefficients = mode_coefficients(WeightMode.CLASSIC_SHAPLEY, 3)
    rebuilt = sum(coefficients[t["k"]] * (t["shap1"] - t["shap2"]) for t in entry["terms"])
    assert rebuilt == pytest.approx(entry["score"], abs=1e-15)


def test_text_output(inputs, capsys):
    """Test the text report."""
    assert run(["shap-wa", "--model", inputs["model"], "--chain", inputs["chain"], "--instance", "ab"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "instance: ab" in out
    assert "score" in out


def test_boolean_commands(inputs, capsys):
    """Test shap-dnf and shap-dt."""
    assert run(["shap-dnf", "--model", inputs["ddnf"], "--distribution", inputs["vector4"],
                "--instance", "1011", "--format", "json"]) == EXIT_OK
    assert _json_output(capsys)["value"] == 1.0
    assert run(["shap-dt", "--model", inputs["tree"], "--distribution", inputs["vector3"],
                "--instance", "010", "--format", "json"]) == EXIT_OK
    assert len(_json_output(capsys)["scores"]) == 3


@pytest.mark.parametrize("kind", ["wa", "dnf", "dt"])
def test_verify_passes(inputs, capsys, kind):
    """Test verify on every model kind."""
    if kind == "wa":
        extra = ["--model", inputs["model"], "--chain", inputs["chain"], "--instance", "abba"]
    elif kind == "dnf":
        extra = ["--model", inputs["ddnf"], "--distribution", inputs["vector4"], "--instance", "0110"]
    else:
        extra = ["--model", inputs["tree"], "--distribution", inputs["vector3"], "--instance", "101"]
    assert run(["verify", "--kind", kind, *extra, "--format", "json"]) == EXIT_OK
    document = _json_output(capsys)
    assert document["verify"]["max_abs_dev"] <= document["verify"]["tolerance"]


def test_verify_deviation_exit_code(inputs):
    """Test the deviation exit code."""
    code = run(["verify", "--model", inputs["model"], "--chain", inputs["chain"],
                "--instance", "ab", "--tolerance", "-1"])
    assert code == EXIT_DEVIATION


def test_scale_exit_code(inputs, monkeypatch):
    """Test the scale exit code when the oracle cap is exceeded."""
    monkeypatch.setenv("SHAP_MARKOV_ORACLE_CAP", "3")
    code = run(["verify", "--model", inputs["model"], "--chain", inputs["chain"], "--instance", "abab"])
    assert code == EXIT_SCALE


def test_input_errors(inputs, tmp_path):
    """Test the input error exit code."""
    base = ["shap-wa", "--model", inputs["model"], "--chain", inputs["chain"]]
    assert run([*base, "--instance", "abz"]) == EXIT_INPUT
    assert run([*base, "--instance", "ab", "--position", "3"]) == EXIT_INPUT
    assert run(["shap-wa", "--model", str(tmp_path / "missing.json"), "--chain", inputs["chain"],
                "--instance", "ab"]) == EXIT_INPUT
    assert run(["shap-dnf", "--model", inputs["ddnf"], "--distribution", inputs["vector3"],
                "--instance", "101"]) == EXIT_INPUT
    assert run(["verify", "--kind", "dnf", "--model", inputs["ddnf"], "--instance", "1011"]) == EXIT_INPUT


def test_algebra_commands(inputs, capsys):
    """Test the algebra subcommands."""
    assert run(["algebra", "evaluate", "--model", inputs["model"], "--word", "aab"]) == EXIT_OK
    assert _json_output(capsys)["value"] == pytest.approx(2.0)

    assert run(["algebra", "partition", "--model", inputs["model"], "--length", "2"]) == EXIT_OK
    # total number of a's over the four words of length 2
    assert _json_output(capsys)["partition"] == pytest.approx(4.0)

    assert run(["algebra", "product", "--left", inputs["model"], "--right", inputs["model"]]) == EXIT_OK
    assert len(_json_output(capsys)["alpha"]) == 4


def test_log_file(inputs, tmp_path, capsys):
    """Test writing logs to a file."""
    log_file = tmp_path / "run.log"
    assert run(["--log-file", str(log_file), "verify", "--model", inputs["model"], "--chain", inputs["chain"],
                "--instance", "ab"]) == EXIT_OK
    assert "verified 2 positions" in log_file.read_text()


def test_algebra_evaluate_splits_multi_character_words(tmp_path, capsys):
    """Words over multi-character symbols are given space-separated."""
    path = tmp_path / "votes.json"
    write_json(path, {
        "alphabet": ["yes", "no"],
        "alpha": [1.0, 0.0],
        "beta": [0.0, 1.0],
        "transitions": {"yes": [[1.0, 1.0], [0.0, 1.0]], "no": [[1.0, 0.0], [0.0, 1.0]]},
    })
    assert run(["algebra", "evaluate", "--model", str(path), "--word", "yes no yes"]) == EXIT_OK
    assert _json_output(capsys)["value"] == pytest.approx(2.0)
    assert run(["algebra", "evaluate", "--model", str(path), "--word", "yes maybe"]) == EXIT_INPUT


def test_algebra_project_through_conditional_transducer(inputs, tmp_path, capsys):
    """A stored conditional transducer with a '#' output alphabet loads and projects to pattern values."""
    path = tmp_path / "conditional.json"
    write_json(path, transducer_to_dict(build_conditional_wt("ab", create_stationary_chain())))
    assert run(["algebra", "project", "--model", inputs["model"], "--transducer", str(path)]) == EXIT_OK
    projected = automaton_from_dict(_json_output(capsys))
    assert projected.alphabet.hash_extended
    # one a fixed, plus P(a | a) for the free second position
    assert wa_evaluate(projected, "a#") == pytest.approx(1.9)
    assert wa_evaluate(projected, "ab") == pytest.approx(1.0)
