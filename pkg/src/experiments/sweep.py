import time
from dataclasses import dataclass
from itertools import product
from pathlib import Path

import numpy as np
import pandas as pd
import pandera as pa
from joblib import Parallel, delayed
from loguru import logger

from src.config import ExperimentConfig, SimSpec
from src.evalmetrics.metrics import evaluate
from src.initialize.kmeans import KMeansOptions
from src.methods.factory import MethodFactory
from src.refine.options import RefineOptions
from src.simgen.sampler import Simulation, sample_observation

CELL_COLUMNS = ["p", "K", "r", "gamma", "observation", "degree_family", "shape"]
RESULT_COLUMNS = CELL_COLUMNS + [
    "method",
    "replicate",
    "seed",
    "cer",
    "ell",
    "iterations",
    "wall_ms",
    "error",
]

SWEEP_SCHEMA = pa.DataFrameSchema(
    {
        "p": pa.Column(int, pa.Check.ge(1)),
        "K": pa.Column(int, pa.Check.ge(1)),
        "r": pa.Column(int, pa.Check.ge(1)),
        "gamma": pa.Column(float),
        "observation": pa.Column(str),
        "degree_family": pa.Column(str),
        "shape": pa.Column(float, nullable=True),
        "method": pa.Column(str, pa.Check.isin(MethodFactory.get_registered_types())),
        "replicate": pa.Column(int, pa.Check.ge(0)),
        "seed": pa.Column(int, pa.Check.ge(0)),
        "cer": pa.Column(float, pa.Check.in_range(0.0, 1.0), nullable=True),
        "ell": pa.Column(float, pa.Check.in_range(0.0, 1.0), nullable=True),
        "iterations": pa.Column(int, pa.Check.ge(0)),
        "wall_ms": pa.Column(float, pa.Check.ge(0.0)),
        "error": pa.Column(str),
    },
    strict=True,
    coerce=True,
)


@dataclass(frozen=True)
class ReplicateTask:
    """Everything one worker needs to run all methods on one replicate."""

    cell_index: int
    replicate: int
    base_seed: int
    spec: SimSpec
    methods: tuple[str, ...]
    refine: RefineOptions
    kmeans: KMeansOptions

    def cell(self) -> dict:
        spec = self.spec
        return {
            "p": spec.p,
            "K": spec.K,
            "r": spec.r,
            "gamma": spec.gamma,
            "observation": spec.observation,
            "degree_family": spec.degree_family,
            "shape": spec.shape if spec.shape is not None else np.nan,
        }


def replicate_seed(base_seed: int, cell_index: int, replicate: int) -> np.random.SeedSequence:
    return np.random.SeedSequence([base_seed, cell_index, replicate])


def method_rng(seed: np.random.SeedSequence, method: str) -> np.random.Generator:
    """Generator of ``method`` on a replicate; independent of the method list."""
    key = MethodFactory.get_registered_types().index(method)
    return np.random.default_rng(np.random.SeedSequence([*seed.entropy, key]))


def run_replicate(task: ReplicateTask) -> list[dict]:
    """Simulate one replicate and fit every method on the same data."""
    seed_sequence = replicate_seed(task.base_seed, task.cell_index, task.replicate)
    seed = int(seed_sequence.generate_state(1)[0])
    base = {**task.cell(), "replicate": task.replicate, "seed": seed}

    try:
        simulation = sample_observation(
            task.spec.model_copy(update={"seed": seed}), np.random.default_rng(seed_sequence)
        )
    except Exception as error:
        logger.warning(f"Replicate {task.replicate} of cell {task.cell_index}: {error}")
        return [_failed_row(base, method, error) for method in task.methods]

    return [_fit_row(task, simulation, base, seed_sequence, method) for method in task.methods]


def _failed_row(base: dict, method: str, error: Exception, wall_ms: float = 0.0) -> dict:
    return {
        **base,
        "method": method,
        "cer": np.nan,
        "ell": np.nan,
        "iterations": 0,
        "wall_ms": wall_ms,
        "error": str(error) or type(error).__name__,
    }


def _fit_row(
    task: ReplicateTask,
    simulation: Simulation,
    base: dict,
    seed_sequence: np.random.SeedSequence,
    method: str,
) -> dict:
    truth = simulation.params.z
    estimator = MethodFactory.create(
        method, observation=task.spec.observation, refine=task.refine, kmeans=task.kmeans
    )
    start = time.perf_counter()
    try:
        fit = estimator.fit(
            simulation.tensor, truth.num_clusters, method_rng(seed_sequence, method), truth
        )
    except Exception as error:
        wall_ms = (time.perf_counter() - start) * 1000
        logger.warning(f"{method} failed on replicate {task.replicate}: {error}")
        return _failed_row(base, method, error, wall_ms)
    wall_ms = (time.perf_counter() - start) * 1000

    reports = [
        evaluate(fit.z_hat.assignments[mode], truth.assignments[mode], truth.num_clusters[mode])
        for mode in range(truth.order)
    ]
    return {
        **base,
        "method": method,
        "cer": float(np.mean([report.cer for report in reports])),
        "ell": float(np.mean([report.ell for report in reports])),
        "iterations": fit.iterations_run,
        "wall_ms": wall_ms,
        "error": "",
    }


class SweepPipeline:
    """
    SweepPipeline runs a Monte-Carlo grid and tabulates per-replicate errors.

    Attributes:
        results (pd.DataFrame): One row per (cell, method, replicate).
        aggregate (pd.DataFrame): Mean and standard deviation per (cell, method).
    """

    def __init__(self, config: ExperimentConfig):
        """
        Initialize the sweep.

        Args:
            config (ExperimentConfig): Grid, replicates, methods and outputs.
        """
        self.config = config

        self.results: pd.DataFrame
        self.aggregate: pd.DataFrame

    def cells(self) -> list[SimSpec]:
        """Grid cells in deterministic order; the shape axis applies to pareto only."""
        config = self.config
        specs = []
        for p, K, r, gamma, observation, family in product(
            config.p,
            config.K,
            config.r,
            config.gamma_values(),
            config.observation,
            config.degree_family,
        ):
            for shape in config.shape if family == "pareto" else [None]:
                specs.append(
                    SimSpec(
                        p=p,
                        K=K,
                        r=r,
                        gamma=gamma,
                        sigma=config.sigma,
                        observation=observation,
                        degree_family=family,
                        shape=shape,
                        symmetric=config.symmetric,
                        core_row_norm=config.core_row_norm,
                        bernoulli_peak=config.bernoulli_peak,
                    )
                )
        return specs

    def tasks(self) -> list[ReplicateTask]:
        config = self.config
        return [
            ReplicateTask(
                cell_index=index,
                replicate=replicate,
                base_seed=config.base_seed,
                spec=spec,
                methods=tuple(config.methods),
                refine=config.refine,
                kmeans=config.kmeans,
            )
            for index, spec in enumerate(self.cells())
            for replicate in range(config.replicates)
        ]

    def run(self) -> pd.DataFrame:
        """
        Run every replicate and build the result tables.

        Returns:
            pd.DataFrame: Validated per-replicate results.
        """
        tasks = self.tasks()
        logger.info(f"Starting sweep: {len(tasks)} replicates on {self.config.jobs} worker(s)...")
        batches = Parallel(n_jobs=self.config.jobs)(delayed(run_replicate)(task) for task in tasks)
        logger.info("Sweep completed.")

        rows = [row for batch in batches for row in batch]
        self.results = SWEEP_SCHEMA.validate(pd.DataFrame(rows, columns=RESULT_COLUMNS))
        self.aggregate = aggregate_results(self.results)
        failures = int((self.results["error"] != "").sum())
        if failures:
            logger.warning(f"{failures} of {len(self.results)} runs failed")
        return self.results

    def write(self) -> None:
        write_table(self.results, self.config.output)
        write_table(self.aggregate, self.config.aggregate_path())


def aggregate_results(results: pd.DataFrame) -> pd.DataFrame:
    """Mean and standard deviation of the errors per grid cell and method."""
    keys = CELL_COLUMNS + ["method"]
    grouped = results.groupby(keys, dropna=False, sort=False)
    aggregate = grouped.agg(
        cer_mean=("cer", "mean"),
        cer_std=("cer", "std"),
        ell_mean=("ell", "mean"),
        ell_std=("ell", "std"),
        iterations_mean=("iterations", "mean"),
        wall_ms_mean=("wall_ms", "mean"),
        replicates=("replicate", "count"),
        failures=("error", lambda errors: int((errors != "").sum())),
    )
    return aggregate.reset_index()


def write_table(table: pd.DataFrame, path: str | Path) -> None:
    """Write ``table`` as Parquet for a ``.parquet`` suffix and as CSV otherwise."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if path.suffix == ".parquet":
        table.to_parquet(path, engine="pyarrow", index=False)
    else:
        table.to_csv(path, index=False)
    logger.info(f"Wrote {len(table)} rows to {path}")
