"""Command-line entry point for exact SHAP attributions under Markov distributions."""

import argparse
import logging
import sys
from typing import Callable, List, Optional, Sequence, Tuple

from src.automata.automaton import Alphabet, WeightedAutomaton, Word, check_word, wa_evaluate
from src.automata.operators import partition_constant, wa_product, wa_project, wa_sum
from src.automata.serialization import automaton_to_dict
from src.boolean.clauses import evaluate_ddnf
from src.boolean.decision_tree import evaluate_tree
from src.boolean.reduction import BooleanModel, boolean_explainer
from src.config.settings import ApplicationConfig
from src.ingestion.loader import (
    dump_json,
    load_automaton,
    load_chain,
    load_ddnf,
    load_transducer,
    load_tree,
    load_vector_markov,
)
from src.markov.sequentialize import VectorMarkov, seq_instance
from src.oracle.brute_force import oracle_shap_patterns, oracle_shap_subsets
from src.shap.engine import ShapExplainer
from src.shap.report import ShapReport, WeightMode, reports_to_document, reports_to_frame
from src.utils.exceptions import (
    ContractError,
    InputDomainError,
    ScaleError,
    ShapMarkovError,
    VerificationError,
)
from src.utils.logger import LoggerFactory, log_execution

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_DEVIATION = 2
EXIT_SCALE = 3

logger = LoggerFactory.get_logger("shap_markov")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--instance", required=True, help="Instance word (e.g. 'abba' or '1011')")
    parser.add_argument("--position", type=int, default=None, help="1-based position (default: all)")
    parser.add_argument("--mode", choices=[m.value for m in WeightMode], default=WeightMode.CLASSIC_SHAPLEY.value,
                        help="classic: classical Shapley kernel (default); paper: pattern-form coefficients 1/m")
    parser.add_argument("--format", choices=["text", "json"], default="text", dest="output_format")


def _add_wa_inputs(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", required=True, help="Weighted automaton JSON")
    parser.add_argument("--chain", required=True, help="Markov chain JSON")


def _add_boolean_inputs(parser: argparse.ArgumentParser, what: str) -> None:
    parser.add_argument("--model", required=True, help=f"{what} JSON")
    parser.add_argument("--distribution", required=True, help="Vector Markov distribution JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shap-markov",
        description="Exact SHAP scores for weighted automata, d-DNFs and decision trees under Markov distributions.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging and per-k terms in reports")
    parser.add_argument("--log-file", default=None, help="Also write logs to this file")
    commands = parser.add_subparsers(dest="command", required=True)

    shap_wa = commands.add_parser("shap-wa", help="Explain a weighted automaton")
    _add_wa_inputs(shap_wa)
    _add_common(shap_wa)

    shap_dnf = commands.add_parser("shap-dnf", help="Explain a disjoint DNF")
    _add_boolean_inputs(shap_dnf, "d-DNF")
    _add_common(shap_dnf)

    shap_dt = commands.add_parser("shap-dt", help="Explain a decision tree")
    _add_boolean_inputs(shap_dt, "Decision tree")
    _add_common(shap_dt)

    verify = commands.add_parser("verify", help="Compare engine scores with the brute-force oracle")
    verify.add_argument("--kind", choices=["wa", "dnf", "dt"], default="wa")
    verify.add_argument("--model", required=True)
    verify.add_argument("--chain", default=None, help="Markov chain JSON (kind wa)")
    verify.add_argument("--distribution", default=None, help="Vector Markov JSON (kinds dnf, dt)")
    verify.add_argument("--tolerance", type=float, default=None, help="Maximum absolute deviation (default 1e-8)")
    _add_common(verify)

    algebra = commands.add_parser("algebra", help="Operator algebra on automaton documents")
    operations = algebra.add_subparsers(dest="operation", required=True)
    for name in ("product", "sum"):
        op = operations.add_parser(name)
        op.add_argument("--left", required=True)
        op.add_argument("--right", required=True)
    project = operations.add_parser("project")
    project.add_argument("--model", required=True)
    project.add_argument("--transducer", required=True)
    partition = operations.add_parser("partition")
    partition.add_argument("--model", required=True)
    partition.add_argument("--length", type=int, required=True)
    evaluate = operations.add_parser("evaluate")
    evaluate.add_argument("--model", required=True)
    evaluate.add_argument("--word", required=True)
    return parser


def _boolean_instance(text: str) -> Tuple[int, ...]:
    for position, char in enumerate(text, start=1):
        if char not in "01":
            raise InputDomainError(f"Boolean instance holds {char!r} at position {position}", char, position)
    if not text:
        raise InputDomainError("Boolean instance is empty")
    return tuple(int(c) for c in text)


def _positions(args: argparse.Namespace, length: int) -> Optional[List[int]]:
    if args.position is None:
        return None
    if not 1 <= args.position <= length:
        raise ContractError(f"--position {args.position} outside 1..{length}")
    return [args.position]


def _emit(reports: Sequence[ShapReport], args: argparse.Namespace, verify: Optional[dict] = None) -> None:
    if args.output_format == "json":
        print(dump_json(reports_to_document(reports, include_terms=args.verbose, verify=verify)))
        return
    first = reports[0]
    print(f"instance: {first.instance}  mode: {first.mode.value}")
    print(f"f(w) = {first.value:.12g}   E[f] = {first.baseline:.12g}")
    print(reports_to_frame(reports))
    if verify is not None:
        print(f"max |engine - oracle| = {verify['max_abs_dev']:.3e} (tolerance {verify['tolerance']:g})")


def _split_word(alphabet: Alphabet, text: str) -> Word:
    # multi-character symbols are written space-separated
    return check_word(alphabet, text if alphabet.single_character else text.split())


def _wa_explainer(args: argparse.Namespace, config: ApplicationConfig) -> Tuple[ShapExplainer, Word]:
    model = load_automaton(args.model)
    chain = load_chain(args.chain)
    word = _split_word(chain.alphabet, args.instance)
    return ShapExplainer(model, chain, WeightMode.parse(args.mode), config), word


def _boolean_inputs(args: argparse.Namespace, kind: str) -> Tuple[BooleanModel, Tuple[int, ...], VectorMarkov]:
    x = _boolean_instance(args.instance)
    distribution = load_vector_markov(args.distribution)
    model = load_tree(args.model, len(x)) if kind == "dt" else load_ddnf(args.model)
    if not (model.num_vars == len(x) == distribution.num_vars):
        raise ContractError(
            f"Dimension mismatch: model has {model.num_vars} variables, instance {len(x)}, "
            f"distribution {distribution.num_vars}"
        )
    return model, x, distribution


@log_execution(logger)
def run_shap_wa(args: argparse.Namespace, config: ApplicationConfig) -> int:
    explainer, word = _wa_explainer(args, config)
    reports = explainer.explain_all(word, _positions(args, len(word)))
    _emit(reports, args)
    return EXIT_OK


@log_execution(logger)
def run_shap_boolean(args: argparse.Namespace, config: ApplicationConfig, kind: str) -> int:
    model, x, distribution = _boolean_inputs(args, kind)
    explainer = boolean_explainer(model, distribution, WeightMode.parse(args.mode), config)
    reports = explainer.explain_all(seq_instance(x), _positions(args, len(x)))
    _emit(reports, args)
    return EXIT_OK


@log_execution(logger)
def run_verify(args: argparse.Namespace, config: ApplicationConfig) -> int:
    tolerance = config.verification.tolerance if args.tolerance is None else args.tolerance
    mode = WeightMode.parse(args.mode)
    if args.kind == "wa":
        if args.chain is None:
            raise ContractError("verify --kind wa needs --chain")
        explainer, word = _wa_explainer(args, config)
        reports = explainer.explain_all(word, _positions(args, len(word)))
        oracle: Callable[[int], float] = lambda i: oracle_shap_patterns(
            explainer.model, word, i, explainer.chain, mode, config.oracle
        )
    else:
        if args.distribution is None:
            raise ContractError(f"verify --kind {args.kind} needs --distribution")
        model, x, distribution = _boolean_inputs(args, args.kind)
        explainer = boolean_explainer(model, distribution, mode, config)
        reports = explainer.explain_all(seq_instance(x), _positions(args, len(x)))
        evaluate = (lambda z: evaluate_tree(model, z)) if args.kind == "dt" else (lambda z: evaluate_ddnf(model, z))
        oracle = lambda i: oracle_shap_subsets(evaluate, x, i, distribution, mode, config.oracle)

    max_abs_dev = max(abs(r.score - oracle(r.position)) for r in reports)
    _emit(reports, args, verify={"max_abs_dev": max_abs_dev, "tolerance": tolerance})
    if max_abs_dev > tolerance:
        raise VerificationError(
            f"engine deviates from oracle by {max_abs_dev:.3e} > {tolerance:g}", max_abs_dev=max_abs_dev
        )
    logger.info(f"verified {len(reports)} positions, max deviation {max_abs_dev:.3e}")
    return EXIT_OK


@log_execution(logger)
def run_algebra(args: argparse.Namespace, config: ApplicationConfig) -> int:
    limit = config.engine.materialize_limit
    if args.operation == "partition":
        print(dump_json({"length": args.length, "partition": partition_constant(load_automaton(args.model), args.length)}))
    elif args.operation == "evaluate":
        model = load_automaton(args.model)
        word = _split_word(model.alphabet, args.word)
        print(dump_json({"word": args.word, "value": wa_evaluate(model, word)}))
    else:
        if args.operation == "project":
            result: WeightedAutomaton = wa_project(load_automaton(args.model), load_transducer(args.transducer), limit)
        else:
            operator = wa_product if args.operation == "product" else wa_sum
            result = operator(load_automaton(args.left), load_automaton(args.right), limit)
        print(dump_json(automaton_to_dict(result)))
    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, dispatch the command and map failures to exit codes."""
    args = build_parser().parse_args(argv)
    handler = None
    if args.log_file:
        handler = logging.FileHandler(args.log_file)
        handler.setFormatter(logger.handlers[0].formatter)
        logger.addHandler(handler)
    LoggerFactory.set_level(logging.DEBUG if args.verbose else logging.INFO)

    try:
        config = ApplicationConfig.create_from_environment()
        if args.command == "shap-wa":
            return run_shap_wa(args, config)
        if args.command in ("shap-dnf", "shap-dt"):
            return run_shap_boolean(args, config, "dt" if args.command == "shap-dt" else "dnf")
        if args.command == "verify":
            return run_verify(args, config)
        return run_algebra(args, config)
    except VerificationError as e:
        logger.error(str(e))
        return EXIT_DEVIATION
    except ScaleError as e:
        logger.error(str(e))
        return EXIT_SCALE
    except ShapMarkovError as e:
        logger.error(str(e))
        return EXIT_INPUT
    finally:
        if handler is not None:
            logger.removeHandler(handler)
            handler.close()


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
