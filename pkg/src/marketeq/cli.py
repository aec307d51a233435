"""Command-line front end: `marketeq <command> ...`.

Exit codes: 0 success, 1 input or guard error, 2 negative verdict
(nonexistence, not representable, not applicable), 3 verification failure.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from marketeq.equilibrium.constructions import (
    balanced_pspe,
    homogeneous_min_delta,
    synergy_two_firm_pspe,
    two_firm_weighted_pspe,
)
from marketeq.equilibrium.search import find_pspe
from marketeq.equilibrium.stability import OBJECTIVES
from marketeq.equilibrium.verify import check_outcome
from marketeq.errors import MarketEqError, NotApplicableError, VerificationError
from marketeq.experiments.generators import DATASETS, GeneratorSpec, generate_dataset
from marketeq.experiments.records import ExperimentRecord
from marketeq.experiments.studies import (
    ExperimentSpec,
    StudyConfig,
    run_experiment,
    summary_document,
)
from marketeq.game.io import dump_json, load_game, load_json, load_outcome
from marketeq.network.influence import InfluenceNetwork, influence_exact, influence_monte_carlo
from marketeq.network.moebius import moebius_decomposition
from marketeq.network.synergy import SynergyMatrix, network_to_synergy, synergy_to_network
from marketeq.partition.configuration import configuration_lp
from marketeq.rational import format_decimal, format_rational
from marketeq.stores.csv import CSVStore
from marketeq.stores.duckdb import DuckDBStore

logger = logging.getLogger("marketeq")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NEGATIVE = 2
EXIT_VERIFICATION = 3

CONSTRUCTIONS = ("auto", "two-firm", "balanced", "homogeneous", "synergy")
DIRECTIONS = ("net2syn", "syn2net", "moebius")
SEED_ENV = "MARKET_EQ_SEED"


def default_seed() -> Optional[int]:
    value = os.environ.get(SEED_ENV)
    return int(value) if value else None


def _emit(document: Any, out: Optional[str]) -> None:
    text = dump_json(document, out)
    if out is None:
        print(text)


def cmd_solve(args: argparse.Namespace) -> int:
    game = load_game(args.game)
    unsafe = args.unsafe_limits
    if args.construction == "auto":
        result = find_pspe(game, objective=args.objective, unsafe_limits=unsafe)
        _emit(result.to_dict(), args.out)
        return EXIT_OK if result.exists else EXIT_NEGATIVE

    document: Dict[str, Any] = {"verdict": "pspe", "construction": args.construction}
    if args.construction == "two-firm":
        outcome, construction = two_firm_weighted_pspe(game, unsafe)
        document["parameters"] = construction.to_dict()
    elif args.construction == "balanced":
        outcome = balanced_pspe(game, unsafe)
        if outcome is None:
            raise NotApplicableError("No almost-balanced optimal partition")
    elif args.construction == "homogeneous":
        uniform = homogeneous_min_delta(game, unsafe)
        if uniform is None:
            _emit({"verdict": "nonexistence", "construction": args.construction}, args.out)
            return EXIT_NEGATIVE
        outcome = uniform.outcome
        document["parameters"] = {
            "delta": format_rational(uniform.delta),
            "lower": format_rational(uniform.lower),
            "upper": None if uniform.upper is None else format_rational(uniform.upper),
            "attains_lower": uniform.attains_lower,
        }
    else:
        outcome = synergy_two_firm_pspe(game, unsafe)
    document.update(outcome.to_dict())
    _emit(document, args.out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    game = load_game(args.game)
    outcome = load_outcome(game, args.outcome)
    report = check_outcome(game, outcome, normalized=args.normalized, unsafe_limits=args.unsafe_limits)
    _emit(report.to_dict(), args.out)
    return EXIT_OK if report.passed else EXIT_VERIFICATION


def cmd_convert(args: argparse.Namespace) -> int:
    data = load_json(args.input)
    if args.direction == "net2syn":
        network = InfluenceNetwork.from_dict(data.get("network", data))
        matrix = network_to_synergy(network, check=True, unsafe_limits=args.unsafe_limits)
        _emit(matrix.to_dict(), args.out)
        return EXIT_OK
    if args.direction == "syn2net":
        matrix = SynergyMatrix.from_dict(data)
        _emit(synergy_to_network(matrix, check=True).to_dict(), args.out)
        return EXIT_OK
    game = load_game(args.input)
    table = moebius_decomposition(game.valuation(args.firm), game.weights, args.unsafe_limits)
    _emit(table.to_dict(), args.out)
    return EXIT_OK if table.representable else EXIT_NEGATIVE


def cmd_influence(args: argparse.Namespace) -> int:
    data = load_json(args.network)
    network = InfluenceNetwork.from_dict(data.get("network", data))
    seeds = [int(s) for s in args.seeds.split(",") if s.strip()] if args.seeds else []
    if args.samples:
        seed = args.seed if args.seed is not None else default_seed()
        estimate = influence_monte_carlo(network, seeds, args.samples, seed, args.workers)
        document = {
            "seeds": seeds,
            "mode": "monte-carlo",
            "mean": estimate.mean,
            "stderr": estimate.stderr,
            "samples": estimate.samples,
            "seed": estimate.seed,
        }
    else:
        value = influence_exact(network, seeds, args.unsafe_limits)
        document = {
            "seeds": seeds,
            "mode": "exact",
            "influence": format_rational(value),
            "decimal": format_decimal(value),
        }
    _emit(document, args.out)
    return EXIT_OK


def cmd_gap(args: argparse.Namespace) -> int:
    game = load_game(args.game)
    report = configuration_lp(game, args.unsafe_limits)
    _emit(report.to_dict(), args.out)
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    overrides: Dict[str, Any] = {"kind": args.kind, "count": args.count}
    seed = args.seed if args.seed is not None else default_seed()
    if seed is not None:
        overrides["master_seed"] = seed
    if args.valuation:
        overrides["valuation"] = args.valuation
    spec = GeneratorSpec.from_dict(overrides)
    folder = Path(args.out)
    folder.mkdir(parents=True, exist_ok=True)
    for game in generate_dataset(spec):
        document = game.to_dict()
        document["metadata"] = {
            key: format_rational(value) if key == "alpha" else value
            for key, value in game.metadata.items()
        }
        dump_json(document, folder / f"{game.metadata['id']}.json")
    dump_json(spec.to_dict(), folder / "dataset.json")
    logger.info("Wrote %d instances to %s", spec.count, folder)
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    data = load_json(args.spec)
    seed = default_seed()
    if isinstance(data, dict) and isinstance(data.get("dataset"), dict) and seed is not None:
        data = {**data, "dataset": {"master_seed": seed, **data["dataset"]}}
    spec = ExperimentSpec.from_dict(data)
    config = StudyConfig(
        workers=args.workers,
        strict=args.strict,
        progress=not args.quiet,
        unsafe_limits=args.unsafe_limits,
    )
    games = generate_dataset(spec.dataset)
    result = run_experiment(spec, games, config)

    folder = Path(args.out)
    folder.mkdir(parents=True, exist_ok=True)
    if args.store == "duckdb":
        store = DuckDBStore.connect(str(folder / "experiments.db"))
    else:
        store = CSVStore.connect(str(folder))
    with store:
        for study in spec.studies:
            store.declare(ExperimentRecord(study=study))
            store.add_all(result.records.get(study, []))
        store.add_all(result.survival)
    dump_json(summary_document(result.summary), folder / "summary.json")
    print(json.dumps(summary_document(result.summary), indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="marketeq",
        description="Stable salaries for firm/worker competition games.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="log at INFO (-v) or DEBUG (-vv)")
    parser.add_argument(
        "--unsafe-limits",
        action="store_true",
        help="bypass the enumeration guards protecting against exponential work",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="find stable payments or certify that none exist")
    solve.add_argument("game", help="game JSON file or bundled fixture name")
    solve.add_argument("--objective", choices=OBJECTIVES, default="feasible", help="LP objective over stable payments")
    solve.add_argument(
        "--construction",
        choices=CONSTRUCTIONS,
        default="auto",
        help="closed-form builder to force; `auto` searches every optimal partition by LP",
    )
    solve.add_argument("--out", help="write the JSON result here instead of stdout")
    solve.set_defaults(handler=cmd_solve)

    verify = commands.add_parser("verify", help="check an outcome and report its deviation gap")
    verify.add_argument("game", help="game JSON file or bundled fixture name")
    verify.add_argument("outcome", help="outcome JSON file or bundled fixture name")
    verify.add_argument("--normalized", action="store_true", help="also divide the gap by the deviating firm's profit")
    verify.add_argument("--out", help="write the JSON report here instead of stdout")
    verify.set_defaults(handler=cmd_verify)

    convert = commands.add_parser("convert", help="convert between networks, synergy matrices and coefficient tables")
    convert.add_argument("input", help="network, matrix or game JSON file")
    convert.add_argument("--direction", choices=DIRECTIONS, required=True, help="conversion to perform")
    convert.add_argument("--firm", type=int, default=1, help="firm whose valuation to decompose (moebius)")
    convert.add_argument("--out", help="write the JSON result here instead of stdout")
    convert.set_defaults(handler=cmd_convert)

    influence = commands.add_parser("influence", help="expected influence of a worker set")
    influence.add_argument("network", help="network JSON file or bundled fixture name")
    influence.add_argument("--seeds", default="", help="comma-separated worker indices")
    influence.add_argument("--samples", type=int, default=0, help="Monte-Carlo samples; exact when 0")
    influence.add_argument("--seed", type=int, default=None, help=f"sampling seed (default ${SEED_ENV})")
    influence.add_argument("--workers", type=int, default=1, help="sampling threads")
    influence.add_argument("--out", help="write the JSON result here instead of stdout")
    influence.set_defaults(handler=cmd_influence)

    gap = commands.add_parser("gap", help="integral and fractional welfare and their ratio")
    gap.add_argument("game", help="game JSON file or bundled fixture name")
    gap.add_argument("--out", help="write the JSON result here instead of stdout")
    gap.set_defaults(handler=cmd_gap)

    generate = commands.add_parser("generate", help="write random weighted games")
    generate.add_argument("--kind", choices=DATASETS, default="D1", help="dataset family")
    generate.add_argument("--count", type=int, required=True, help="number of instances")
    generate.add_argument("--seed", type=int, default=None, help=f"master seed (default ${SEED_ENV} or 0)")
    generate.add_argument(
        "--valuation",
        choices=("random-concave", "random-unconstrained", "power"),
        help="valuation mode (dataset default when omitted)",
    )
    generate.add_argument("--out", required=True, help="output directory")
    generate.set_defaults(handler=cmd_generate)

    experiment = commands.add_parser("experiment", help="run the stability, census and revenue studies")
    experiment.add_argument("--spec", required=True, help="experiment JSON file or bundled fixture name")
    experiment.add_argument("--out", required=True, help="output directory for CSVs and summary.json")
    experiment.add_argument("--workers", type=int, default=1, help="worker threads; results do not depend on it")
    experiment.add_argument("--store", choices=("csv", "duckdb"), default="csv", help="record store")
    experiment.add_argument("--strict", action="store_true", help="test every optimal partition, not only the canonical one")
    experiment.add_argument("--quiet", action="store_true", help="hide the progress bar")
    experiment.set_defaults(handler=cmd_experiment)
    return parser


def _error_document(kind: str, error: Exception) -> str:
    document = {"verdict": kind, "error": type(error).__name__, "message": str(error)}
    witness = getattr(error, "witness", None)
    if witness is not None:
        document["witness"] = witness
    return json.dumps(document, indent=2)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    try:
        return args.handler(args)
    except NotApplicableError as e:
        print(_error_document("not-applicable", e))
        return EXIT_NEGATIVE
    except VerificationError as e:
        logger.error("Verification failed: %s", e)
        return EXIT_VERIFICATION
    except MarketEqError as e:
        logger.error("%s", e)
        return EXIT_INPUT
    except OSError as e:
        logger.error("%s", e)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
