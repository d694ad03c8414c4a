"""Command-line front end.

    python -m app.cli solve MODEL.json --sigma 1.0 --robust rsc
    python -m app.cli verify-theorem2 --T 10 --sigma1 0.3 --sigma2 1.0 [--grid]
    python -m app.cli train CONFIG.json [--dry-run]
    python -m app.cli eval RUN/checkpoint [--episodes 10] [--reference 50]
    python -m app.cli sweep-beta CONFIG.json [--dry-run]
    python -m app.cli compare-augmenters CONFIG.json [--dry-run]
    python -m app.cli gen-hard-instance --T 10 --out hard.json

Exit codes: 0 success, 1 invalid input, 2 numerical failure.
"""
import argparse
import json
import logging
import sys
from typing import Callable, Dict, Optional, Sequence

from pydantic import ValidationError

from app.application.schemas import ExperimentConfig, SolverSection, Theorem2Section
from app.application.use_cases import (
    CompareAugmentersUseCase,
    EvaluateAgentUseCase,
    GenerateHardInstanceUseCase,
    SIGMA2_GRID,
    SolveModelUseCase,
    SweepBetaUseCase,
    TrainAgentUseCase,
    VerifyTheorem2UseCase,
    load_model,
)
from app.domain.enums import EnvVariant, RobustMode
from app.domain.exceptions import ConfigurationError, ModelFormatError, NumericalFailure, ValidationFailure
from app.infrastructure.config import Settings, get_settings
from app.infrastructure.logging import configure_logging
from app.infrastructure.serialization import read_json_document, to_jsonable, write_json_document
from app.infrastructure.versioning import version_stamp

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERICAL = 2


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with the validation code."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _print_json(data) -> None:
    print(json.dumps(to_jsonable(data), indent=2, sort_keys=True))


def _emit_report(report: Dict, out: Optional[str]) -> None:
    """Write the report to --out when given, otherwise to stdout after the summary."""
    if out:
        write_json_document(report, out)
    else:
        _print_json(report)


def load_experiment(path: str, settings: Settings) -> ExperimentConfig:
    """
    Read and validate an experiment file, then apply RSC_SEED / RSC_OUTPUT_DIR.

    Raises:
        ModelFormatError: If the file is missing or not JSON
        pydantic.ValidationError: If the document does not match the schema
    """
    data = read_json_document(path)
    if not isinstance(data, dict):
        raise ModelFormatError(path, "top-level value must be an object")
    config = ExperimentConfig.model_validate(data)
    return config.with_overrides(seed=settings.seed, output_dir=settings.output_dir)


def _workers(config: ExperimentConfig, settings: Settings) -> int:
    if config.sweep is not None and config.sweep.workers is not None:
        return config.sweep.workers
    return settings.workers


# ==================== Commands ====================


def cmd_solve(args: argparse.Namespace, settings: Settings) -> int:
    if args.config:
        section = load_experiment(args.config, settings).require("solver")
    else:
        if args.model is None or args.sigma is None:
            raise ConfigurationError("solver", "give MODEL and --sigma, or --config")
        section = SolverSection(model_path=args.model, sigma=args.sigma, robust=args.robust, state=args.state)

    model = load_model(section.model_path)
    outcome = SolveModelUseCase().execute(model, section.sigma, section.robust, section.state)
    print(outcome.summary_line())
    report = outcome.to_dict()
    report.update({"model_path": section.model_path, "version": version_stamp()})
    _emit_report(report, args.out)
    return EXIT_OK


def cmd_verify_theorem2(args: argparse.Namespace, settings: Settings) -> int:
    if args.config:
        section = load_experiment(args.config, settings).require("theorem2")
    else:
        section = Theorem2Section(
            horizon=args.T, sigma1=args.sigma1, sigma2=args.sigma2, grid=args.grid, horizons=args.horizons or []
        )

    use_case = VerifyTheorem2UseCase()
    if section.grid:
        reports = use_case.execute_grid(section.horizons or [section.horizon], section.sigma1, SIGMA2_GRID)
    else:
        reports = [use_case.execute(section.horizon, section.sigma1, section.sigma2)]
    for report in reports:
        print(report.summary_line())
    _emit_report(
        {"config": section.model_dump(mode="json"), "version": version_stamp(), "rows": [r.to_dict() for r in reports]},
        args.out,
    )
    return EXIT_OK


def cmd_train(args: argparse.Namespace, settings: Settings) -> int:
    config = load_experiment(args.config, settings)
    section = config.require("train")
    if args.dry_run:
        _print_json(config.model_dump(mode="json"))
        return EXIT_OK

    outcome = TrainAgentUseCase().execute(section, config.seed, config.output_dir)
    final = outcome.metrics.final
    if final is not None:
        print(f"nominal_return={final.nominal_return:.6g} shifted_return={final.shifted_return:.6g}")
    print(f"run directory: {outcome.run_dir}")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace, settings: Settings) -> int:
    seed = args.seed if args.seed is not None else (settings.seed or 0)
    variants = list(EnvVariant) if args.variant == "both" else [EnvVariant(args.variant)]
    results = EvaluateAgentUseCase().execute(args.checkpoint, args.episodes, seed, variants, args.reference)
    _print_json({
        "checkpoint": args.checkpoint,
        "seed": seed,
        "version": version_stamp(),
        "results": {variant: result.to_dict() for variant, result in results.items()},
    })
    return EXIT_OK


def cmd_sweep_beta(args: argparse.Namespace, settings: Settings) -> int:
    config = load_experiment(args.config, settings)
    section = config.require("train")
    sweep = config.require("sweep")
    if args.dry_run:
        _print_json(config.model_dump(mode="json"))
        return EXIT_OK

    outcome = SweepBetaUseCase(_workers(config, settings)).execute(
        section, sweep.betas, config.run_seeds(), config.output_dir
    )
    for row in outcome.rows:
        print(f"beta={row.beta:g} nominal={row.nominal_return:.6g} shifted={row.shifted_return:.6g}")
    print(f"run directory: {outcome.run_dir}")
    return EXIT_OK


def cmd_compare_augmenters(args: argparse.Namespace, settings: Settings) -> int:
    config = load_experiment(args.config, settings)
    section = config.require("train")
    sweep = config.require("sweep")
    if args.dry_run:
        _print_json(config.model_dump(mode="json"))
        return EXIT_OK

    rows = CompareAugmentersUseCase(_workers(config, settings)).execute(
        section, sweep.augmenters, config.run_seeds(), config.output_dir
    )
    for row in rows:
        print(f"{row.augmenter}: nominal={row.nominal_return:.6g} shifted={row.shifted_return:.6g}")
    return EXIT_OK


def cmd_gen_hard_instance(args: argparse.Namespace, settings: Settings) -> int:
    path = GenerateHardInstanceUseCase().execute(args.T, args.out, args.form)
    print(f"wrote {path}")
    return EXIT_OK


# ==================== Parser ====================


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="python -m app.cli", description="Robust SC-MDP solvers and RSC training harness")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("solve", help="robust solve of a tabular model file")
    p.add_argument("model", nargs="?", help="FiniteMDP or SC-MDP JSON document")
    p.add_argument("--sigma", type=float, help="uncertainty radius in [0, 1]")
    p.add_argument("--robust", choices=[str(mode) for mode in RobustMode], default=str(RobustMode.RSC))
    p.add_argument("--state", type=int, default=0, help="state index reported in the summary line")
    p.add_argument("--config", help="experiment file with a solver section")
    p.add_argument("--out", help="write the full report as JSON")

    p = sub.add_parser("verify-theorem2", help="separation check on the hard instance")
    p.add_argument("--T", type=int, default=10)
    p.add_argument("--sigma1", type=float, default=0.3)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--grid", action="store_true", help="sweep sigma2 over 0.55, 0.60, ..., 1.00")
    p.add_argument("--horizons", type=int, nargs="+", help="horizons swept with --grid")
    p.add_argument("--config", help="experiment file with a theorem2 section")
    p.add_argument("--out", help="write the rows as JSON")

    p = sub.add_parser("train", help="train one agent from an experiment file")
    p.add_argument("config")
    p.add_argument("--dry-run", action="store_true", help="print the resolved config and exit")

    p = sub.add_parser("eval", help="evaluate a saved checkpoint")
    p.add_argument("checkpoint", help="checkpoint directory")
    p.add_argument("--episodes", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--variant", choices=["nominal", "shifted", "both"], default="both")
    p.add_argument("--reference", type=float, default=None, help="return used for normalization")

    for name, text in (("sweep-beta", "augmentation-ratio sweep"), ("compare-augmenters", "augmenter comparison")):
        p = sub.add_parser(name, help=text)
        p.add_argument("config")
        p.add_argument("--dry-run", action="store_true", help="print the resolved config and exit")

    p = sub.add_parser("gen-hard-instance", help="write the separation instance as a model file")
    p.add_argument("--T", type=int, default=10)
    p.add_argument("--out", required=True)
    p.add_argument("--form", choices=["mdp", "scmdp"], default="scmdp")

    return parser


HANDLERS: Dict[str, Callable[[argparse.Namespace, Settings], int]] = {
    "solve": cmd_solve,
    "verify-theorem2": cmd_verify_theorem2,
    "train": cmd_train,
    "eval": cmd_eval,
    "sweep-beta": cmd_sweep_beta,
    "compare-augmenters": cmd_compare_augmenters,
    "gen-hard-instance": cmd_gen_hard_instance,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = get_settings()
    except ValidationError as error:
        print(f"error: invalid RSC_* settings: {error}", file=sys.stderr)
        return EXIT_INVALID
    configure_logging(settings)

    try:
        return HANDLERS[args.cmd](args, settings)
    except ValidationError as error:
        logger.error("Invalid document", extra={"extra": {"command": args.cmd, "errors": error.error_count()}})
        print(f"error: {error}", file=sys.stderr)
        return EXIT_INVALID
    except ValidationFailure as error:
        logger.error("Invalid input", extra={"extra": {"command": args.cmd, "error": type(error).__name__}})
        print(f"error: {error}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalFailure as error:
        logger.exception("Numerical failure", extra={"extra": {"command": args.cmd}})
        print(f"numerical failure: {error}", file=sys.stderr)
        return EXIT_NUMERICAL
