"""Command-line entry points: simulate, fit, select-r, sweep, hypergraph-to-tensor."""

import argparse
import sys
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd
from loguru import logger

from src.config import ExperimentConfig, SimSpec
from src.data.documents import FitDocument, ParamsDocument, ThetaDocument, write_document
from src.data.hypergraph import hypergraph_to_tensor, read_edge_list
from src.data.source import (
    DTensorFileSource,
    HypergraphFileSource,
    TensorSource,
    read_clustering,
)
from src.data.writers import write_clustering, write_tensor
from src.evalmetrics.metrics import evaluate
from src.experiments.sweep import SweepPipeline, write_table
from src.initialize.factory import DenoiserFactory
from src.methods.factory import MethodFactory
from src.model.params import mean_tensor
from src.select.bic import select_r
from src.simgen.degrees.factory import DegreeFamilyFactory
from src.simgen.sampler import sample_observation

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    """Parser that reports usage errors with exit code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def parse_ints(text: str) -> list[int]:
    try:
        values = [int(token) for token in text.split(",") if token.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("expected at least one integer")
    return values


def add_source_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=["dtensor", "edges"],
        default="dtensor",
        help="Input is a DTENSOR file or a hypergraph edge list.",
    )
    parser.add_argument("--nodes", type=int, help="Node count of an edge-list input.")


def tensor_source(args: argparse.Namespace) -> TensorSource:
    if args.format == "edges":
        return HypergraphFileSource(args.tensor, args.nodes)
    return DTensorFileSource(args.tensor)


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="dtbm", description=__doc__)
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level.")
    parser.add_argument("--log-file", default="dtbm.log", help="Rotating log file.")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    simulate = commands.add_parser("simulate", help="Draw a dTBM instance.")
    simulate.add_argument("--config", type=Path, help="SimSpec JSON; flags override it.")
    simulate.add_argument("--p", type=int)
    simulate.add_argument("--K", type=int)
    simulate.add_argument("--r", type=int)
    simulate.add_argument("--gamma", type=float)
    simulate.add_argument("--sigma", type=float)
    simulate.add_argument("--observation", choices=DenoiserFactory.get_registered_types())
    simulate.add_argument(
        "--degree-family", choices=DegreeFamilyFactory.get_registered_types()
    )
    simulate.add_argument("--shape", type=float)
    simulate.add_argument("--symmetric", action="store_true", default=None)
    simulate.add_argument("--seed", type=int)
    simulate.add_argument("--out", type=Path, required=True, help="Output directory.")

    fit = commands.add_parser("fit", help="Cluster an observed tensor.")
    fit.add_argument("tensor", type=Path)
    add_source_arguments(fit)
    fit.add_argument("--ranks", type=parse_ints, required=True, help="r1,r2,...")
    fit.add_argument(
        "--observation", choices=DenoiserFactory.get_registered_types(), default="gaussian"
    )
    fit.add_argument(
        "--method", choices=MethodFactory.get_registered_types(), default="dtbm_full"
    )
    fit.add_argument("--truth", type=Path, help="True clustering file.")
    fit.add_argument("--seed", type=int, default=0)
    fit.add_argument("--out", type=Path, required=True, help="Output directory.")

    select = commands.add_parser("select-r", help="Choose the cluster number by BIC.")
    select.add_argument("tensor", type=Path)
    add_source_arguments(select)
    select.add_argument("--candidates", type=parse_ints, default=[1, 2, 3, 4, 5, 6])
    select.add_argument("--penalty", choices=["symmetric", "asymmetric"], default="symmetric")
    select.add_argument(
        "--observation", choices=DenoiserFactory.get_registered_types(), default="gaussian"
    )
    select.add_argument("--seed", type=int, default=0)
    select.add_argument("--out", type=Path, help="CSV of candidate scores.")

    sweep = commands.add_parser("sweep", help="Run a Monte-Carlo grid.")
    sweep.add_argument("--config", type=Path, required=True, help="ExperimentConfig JSON.")
    sweep.add_argument("--jobs", type=int, help="Worker processes.")
    sweep.add_argument("--out", type=Path, help="Per-replicate table path.")

    convert = commands.add_parser(
        "hypergraph-to-tensor", help="Convert an edge list to a DTENSOR file."
    )
    convert.add_argument("edges", type=Path)
    convert.add_argument("--nodes", type=int, help="Number of nodes; largest id by default.")
    convert.add_argument("--no-symmetrize", action="store_true")
    convert.add_argument("--out", type=Path, required=True)
    return parser


def cmd_simulate(args: argparse.Namespace) -> None:
    base = (
        SimSpec.model_validate_json(args.config.read_text(encoding="utf-8"))
        if args.config
        else SimSpec()
    )
    overrides = {
        "p": args.p,
        "K": args.K,
        "r": args.r,
        "gamma": args.gamma,
        "sigma": args.sigma,
        "observation": args.observation,
        "degree_family": args.degree_family,
        "shape": args.shape,
        "symmetric": args.symmetric,
        "seed": args.seed,
    }
    spec = SimSpec.model_validate(
        {**base.model_dump(), **{k: v for k, v in overrides.items() if v is not None}}
    )
    simulation = sample_observation(spec)

    args.out.mkdir(parents=True, exist_ok=True)
    write_tensor(simulation.tensor, args.out / "tensor.dtensor")
    write_tensor(mean_tensor(simulation.params), args.out / "mean.dtensor")
    write_clustering(simulation.params.z, args.out / "truth.txt")
    write_document(ParamsDocument.from_params(simulation.params), args.out / "params.json")
    write_document(spec, args.out / "spec.json")
    logger.info(f"Simulated instance written to {args.out} (alpha={simulation.alpha:.6g})")


def cmd_fit(args: argparse.Namespace) -> None:
    method = MethodFactory.create(args.method, observation=args.observation)
    if method.requires_truth and args.truth is None:
        logger.error(f"Method {args.method} needs --truth")
        raise UsageError(f"fit: error: method {args.method} needs --truth")
    tensor = tensor_source(args).fetch_tensor()
    truth = read_clustering(args.truth) if args.truth else None
    fit = method.fit(tensor, args.ranks, np.random.default_rng(args.seed), truth)

    args.out.mkdir(parents=True, exist_ok=True)
    write_clustering(fit.z_hat, args.out / "clustering.txt")
    write_tensor(fit.core_hat, args.out / "core.dtensor")
    write_document(ThetaDocument(theta=[t.tolist() for t in fit.theta_hat]), args.out / "theta.json")
    write_document(
        FitDocument.from_fit(fit, args.method, args.observation, args.seed),
        args.out / "fit.json",
    )
    if truth is not None:
        for mode in range(truth.order):
            report = evaluate(
                fit.z_hat.assignments[mode], truth.assignments[mode], truth.num_clusters[mode]
            )
            print(f"mode {mode + 1}: ell={report.ell:.6g} cer={report.cer:.6g}")
    print(f"{args.method}: {fit.iterations_run} refinement sweeps, written to {args.out}")


def cmd_select_r(args: argparse.Namespace) -> None:
    tensor = tensor_source(args).fetch_tensor()
    r_hat, scores = select_r(
        tensor,
        args.candidates,
        np.random.default_rng(args.seed),
        penalty=args.penalty,
        observation=args.observation,
    )
    table = pd.DataFrame(
        {
            "r": [s.r for s in scores],
            "score": [s.score for s in scores],
            "flagged": [s.flagged for s in scores],
        }
    )
    if args.out:
        write_table(table, args.out)
    print(table.to_string(index=False))
    print(f"selected r = {r_hat}")


def cmd_sweep(args: argparse.Namespace) -> None:
    config = ExperimentConfig.model_validate_json(args.config.read_text(encoding="utf-8"))
    updates = {"jobs": args.jobs, "output": args.out}
    config = config.model_copy(update={k: v for k, v in updates.items() if v is not None})
    pipeline = SweepPipeline(config)
    pipeline.run()
    pipeline.write()
    print(pipeline.aggregate.to_string(index=False))


def cmd_hypergraph_to_tensor(args: argparse.Namespace) -> None:
    edges = read_edge_list(args.edges, args.nodes)
    tensor = hypergraph_to_tensor(edges, symmetrize=not args.no_symmetrize)
    write_tensor(tensor, args.out)
    print(f"wrote tensor of shape {tensor.shape} to {args.out}")


COMMANDS = {
    "simulate": cmd_simulate,
    "fit": cmd_fit,
    "select-r": cmd_select_r,
    "sweep": cmd_sweep,
    "hypergraph-to-tensor": cmd_hypergraph_to_tensor,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return the exit code (0 ok, 1 usage, 2 data error)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as error:
        print(error, file=sys.stderr)
        return EXIT_USAGE

    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if args.verbose else "WARNING")
    logger.add(args.log_file, rotation="500 MB", level="INFO")

    try:
        COMMANDS[args.command](args)
    except UsageError as error:
        print(f"dtbm {error}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as error:
        print(f"dtbm {args.command}: {error}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK
