"""Hold-out evaluation: seeded splits, RMSE, synthetic surfaces and benchmarks.

The benchmark withholds a seeded random fraction of a dataset, imputes the
withheld points from the remaining ones with each requested estimator, and
reports RMSE and wall-clock time per estimator.  Splits are reproducible
across runs and platforms: the withheld indices come from a partial
Fisher-Yates pass driven by NumPy's PCG64 generator.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .baselines import aidw_batch, knn_batch
from .config import Config
from .errors import (
    EmptyInputError,
    FractionOutOfRangeError,
    LengthMismatchError,
    UnknownKindError,
)
from .kdtree import build_index
from .model import BoundingBox, QueryPoint, SampleSet
from .rbf import impute_batch, profile_dataset

__all__ = [
    "ESTIMATOR_NAMES",
    "EstimatorResult",
    "EvaluationReport",
    "HoldoutSplit",
    "holdout_split",
    "rmse",
    "run_benchmark",
    "synth_surface",
]

ESTIMATOR_NAMES = ("aidw", "knn", "rbf")


@dataclass(frozen=True, eq=False)
class HoldoutSplit:
    """A dataset partitioned into a known part and a withheld (missing) part.

    The withheld points are stored as coordinate/value arrays ordered by
    ascending original index; ``missing`` materialises them as
    (QueryPoint, true value) pairs on first access.
    """

    known: SampleSet
    missing_xs: np.ndarray
    missing_ys: np.ndarray
    missing_values: np.ndarray
    seed: int
    fraction: float

    def __post_init__(self) -> None:
        m = self.missing_xs.shape[0]
        if self.missing_ys.shape[0] != m or self.missing_values.shape[0] != m:
            raise LengthMismatchError("missing-part arrays must have equal lengths")
        if m == 0:
            raise EmptyInputError("a hold-out split must withhold at least one point")
        for arr in (self.missing_xs, self.missing_ys, self.missing_values):
            arr.setflags(write=False)

    @property
    def total_count(self) -> int:
        return self.known.count + self.missing_xs.shape[0]

    @cached_property
    def missing(self) -> tuple[tuple[QueryPoint, float], ...]:
        return tuple(
            (QueryPoint(float(x), float(y)), float(v))
            for x, y, v in zip(self.missing_xs, self.missing_ys, self.missing_values)
        )

    def missing_queries(self) -> np.ndarray:
        """(m, 2) coordinate array of the withheld locations."""
        return np.column_stack((self.missing_xs, self.missing_ys))


def holdout_split(samples: SampleSet, fraction: float, seed: int) -> HoldoutSplit:
    """Withhold ``round(fraction * count)`` samples chosen by a seeded shuffle.

    The selection is a partial Fisher-Yates pass over the index array using
    ``numpy.random.PCG64(seed)``, so the same (samples, fraction, seed)
    triple always produces the same split.  The withheld count is clamped
    to [1, count - 1] so both parts are non-empty.
    """
    if not 0.0 < fraction < 1.0:
        raise FractionOutOfRangeError(
            f"hold-out fraction must lie in (0, 1), got {fraction}"
        )
    n = samples.count
    if n < 2:
        raise EmptyInputError("cannot split a dataset with fewer than 2 points")
    m = round(fraction * n)
    m = min(max(m, 1), n - 1)
    rng = np.random.Generator(np.random.PCG64(seed))
    indices = np.arange(n, dtype=np.int64)
    # Draw all bounded integers in one generator call, then apply the swaps;
    # the sequence matches drawing them one at a time.
    draws = rng.integers(0, n - np.arange(m, dtype=np.int64))
    for i in range(m):
        j = i + int(draws[i])
        indices[i], indices[j] = indices[j], indices[i]
    withheld = np.sort(indices[:m])
    mask = np.zeros(n, dtype=bool)
    mask[withheld] = True
    known = SampleSet(samples.xs[~mask], samples.ys[~mask], samples.values[~mask])
    return HoldoutSplit(
        known=known,
        missing_xs=samples.xs[withheld],
        missing_ys=samples.ys[withheld],
        missing_values=samples.values[withheld],
        seed=seed,
        fraction=fraction,
    )


def rmse(estimates, truths) -> float:
    """Root-mean-square error between paired value sequences."""
    e = np.asarray(estimates, dtype=np.float64)
    t = np.asarray(truths, dtype=np.float64)
    if e.shape != t.shape or e.ndim != 1:
        raise LengthMismatchError(
            f"estimates and truths must be 1-D and equally long, got {e.shape} and {t.shape}"
        )
    if e.shape[0] == 0:
        raise EmptyInputError("rmse requires at least one pair")
    residuals = e - t
    return float(np.sqrt(np.mean(residuals * residuals)))


def _parse_kind(kind: str) -> tuple[str, list[float]]:
    name, _, raw_params = kind.partition(":")
    name = name.strip().lower()
    params: list[float] = []
    if raw_params:
        try:
            params = [float(p) for p in raw_params.split(",")]
        except ValueError:
            raise UnknownKindError(f"malformed parameters in surface kind {kind!r}") from None
    return name, params


def _hills_field(rng: np.random.Generator, extent: BoundingBox):
    """Draw a smooth mixture of Gaussian bumps spanning the extent.

    The bump widths (1.5-4.5% of the extent) give the surface relief at a
    scale a 20-neighbour estimator can feel at benchmark densities, so the
    estimators separate instead of all averaging the same flat patch.
    """
    n_hills = 30
    cx = rng.uniform(extent.x_min, extent.x_max, n_hills)
    cy = rng.uniform(extent.y_min, extent.y_max, n_hills)
    span = max(extent.width, extent.height)
    sigma = rng.uniform(0.015 * span, 0.045 * span, n_hills)
    amp = rng.uniform(15.0, 45.0, n_hills)

    def field(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        z = np.full(xs.shape, 100.0)
        for h in range(n_hills):
            d2 = (xs - cx[h]) ** 2 + (ys - cy[h]) ** 2
            z += amp[h] * np.exp(-d2 / (2.0 * sigma[h] ** 2))
        return z

    return field


def synth_surface(
    kind: str,
    extent: BoundingBox,
    n_points: int,
    seed: int,
) -> SampleSet:
    """Sample an analytic surface at seeded uniform-random locations.

    Kinds (optionally parameterised as ``name:p1,p2``):

    - ``constant`` — flat surface; value defaults to 5.
    - ``ramp`` — plane ``ax + by``; slopes default to 2, 3.
    - ``hills`` — fixed mixture of Gaussian bumps drawn from the seed.

    Given the same arguments the result is identical across runs.
    """
    if n_points < 1:
        raise EmptyInputError(f"n_points must be at least 1, got {n_points}")
    name, params = _parse_kind(kind)
    rng = np.random.Generator(np.random.PCG64(seed))
    if name == "constant":
        if len(params) > 1:
            raise UnknownKindError("the constant surface takes at most one parameter")
        level = params[0] if params else 5.0

        def field(xs, ys):
            return np.full(xs.shape, level)

    elif name == "ramp":
        if params and len(params) != 2:
            raise UnknownKindError("the ramp surface takes exactly two parameters")
        slope_x, slope_y = params if params else (2.0, 3.0)

        def field(xs, ys):
            return slope_x * xs + slope_y * ys

    elif name == "hills":
        if params:
            raise UnknownKindError("the hills surface takes no parameters")
        field = _hills_field(rng, extent)
    else:
        raise UnknownKindError(f"unknown surface kind {name!r}")
    xs = rng.uniform(extent.x_min, extent.x_max, n_points)
    ys = rng.uniform(extent.y_min, extent.y_max, n_points)
    return SampleSet(xs, ys, field(xs, ys))


@dataclass(frozen=True, eq=False)
class EstimatorResult:
    """One benchmark row: accuracy and timing for a single estimator.

    ``n_points`` counts the successfully imputed points (the ones scored by
    ``rmse``); ``n_points + n_failed`` equals the withheld-point total.
    """

    name: str
    rmse: float
    wall_clock_seconds: float
    n_points: int
    n_failed: int
    residuals: np.ndarray | None = None


@dataclass(frozen=True, eq=False)
class EvaluationReport:
    """Benchmark output: per-estimator rows (sorted by name) plus run context."""

    rows: tuple[EstimatorResult, ...]
    index_build_seconds: float
    n_known: int
    n_missing: int
    fraction: float
    seed: int
    workers: int
    config: Config

    def row(self, name: str) -> EstimatorResult:
        for r in self.rows:
            if r.name == name:
                return r
        raise KeyError(name)


_BATCH_FNS = {
    "aidw": aidw_batch,
    "knn": knn_batch,
    "rbf": impute_batch,
}


def run_benchmark(
    samples: SampleSet,
    fraction: float,
    seed: int,
    estimators=ESTIMATOR_NAMES,
    config: Config | None = None,
    keep_residuals: bool = False,
) -> EvaluationReport:
    """Split, impute the withheld points with each estimator, and report.

    The index over the known part is built once and its build time reported
    separately; each estimator's wall clock covers only its imputation
    loop.  Estimators run sequentially (so timings do not interfere) in
    name order.  Failed points are excluded from RMSE and counted.
    """
    if config is None:
        config = Config()
    names = sorted(set(estimators))
    for name in names:
        if name not in _BATCH_FNS:
            raise UnknownKindError(
                f"unknown estimator {name!r}; expected one of {sorted(_BATCH_FNS)}"
            )
    split = holdout_split(samples, fraction, seed)
    t0 = time.perf_counter()
    index = build_index(split.known)
    profile = profile_dataset(split.known, config)
    index_build_seconds = time.perf_counter() - t0
    queries = split.missing_queries()
    truths = split.missing_values
    workers = config.resolved_workers()
    rows = []
    for name in names:
        batch_fn = _BATCH_FNS[name]
        t0 = time.perf_counter()
        outcome = batch_fn(index, split.known, queries, config, profile=profile)
        elapsed = time.perf_counter() - t0
        ok = ~np.isnan(outcome.values)
        n_failed = len(outcome.failures)
        score = rmse(outcome.values[ok], truths[ok]) if ok.any() else float("nan")
        residuals = (outcome.values[ok] - truths[ok]) if keep_residuals else None
        rows.append(
            EstimatorResult(
                name=name,
                rmse=score,
                wall_clock_seconds=elapsed,
                n_points=int(ok.sum()),
                n_failed=n_failed,
                residuals=residuals,
            )
        )
    return EvaluationReport(
        rows=tuple(rows),
        index_build_seconds=index_build_seconds,
        n_known=split.known.count,
        n_missing=int(queries.shape[0]),
        fraction=fraction,
        seed=seed,
        workers=workers,
        config=config,
    )
