"""Comparison estimators: kNN mean and adaptive inverse-distance weighting.

Both work on the same local neighbourhoods as the RBF path, so benchmark
differences come from the estimators themselves rather than from differing
neighbour selection.  The adaptive IDW exponent reuses the five-level
membership schedule that drives the RBF shape factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._batch import run_chunked
from .config import Config
from .density import density_summary, five_level_schedule
from .errors import EmptyInputError, GeofillError
from .kdtree import SpatialIndex, query_knn
from .model import LocalNeighborhood, QueryPoint, SampleSet
from .rbf import DatasetProfile, ImputeOutcome, as_query_arrays, profile_dataset

__all__ = [
    "DEFAULT_POWER_LEVELS",
    "PowerLevels",
    "adaptive_power",
    "aidw_batch",
    "aidw_estimate",
    "knn_batch",
    "knn_estimate",
]


@dataclass(frozen=True, slots=True)
class PowerLevels:
    """Five IDW distance-decay exponents, indexed by rising density membership."""

    a1: float
    a2: float
    a3: float
    a4: float
    a5: float

    def __post_init__(self) -> None:
        for name in ("a1", "a2", "a3", "a4", "a5"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"power level {name} must be positive and finite, got {value}")

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.a1, self.a2, self.a3, self.a4, self.a5)


# Brackets the classical exponent 2 on both sides, rising with density.
DEFAULT_POWER_LEVELS = PowerLevels(1.0, 1.5, 2.0, 2.5, 3.0)


def knn_estimate(nbhd: LocalNeighborhood) -> float:
    """Unweighted arithmetic mean of the neighbour values."""
    if nbhd.size == 0:
        raise EmptyInputError("cannot average an empty neighbourhood")
    return float(np.mean(nbhd.values))


def adaptive_power(mu: float, levels: PowerLevels) -> float:
    """IDW exponent from density membership, on the same five-level schedule as the shape factor."""
    return five_level_schedule(mu, levels.as_tuple())


def aidw_estimate(
    nbhd: LocalNeighborhood,
    q: QueryPoint,
    alpha: float,
    snap_distance: float = 0.0,
) -> float:
    """Inverse-distance-weighted mean with exponent ``alpha``.

    Distances were already measured from ``q`` when the neighbourhood was
    built.  A query at or below ``snap_distance`` from its nearest
    neighbour takes that neighbour's value, as does any query whose
    weights overflow (a neighbour at effectively zero distance).
    """
    if nbhd.size == 0:
        raise EmptyInputError("cannot interpolate from an empty neighbourhood")
    distances = nbhd.distances
    if distances[0] <= snap_distance:
        return float(nbhd.values[0])
    with np.errstate(divide="ignore", over="ignore"):
        weights = distances ** (-alpha)
    total = float(np.sum(weights))
    if not math.isfinite(total) or total <= 0.0:
        return float(nbhd.values[0])
    return float(np.dot(weights, nbhd.values) / total)


def _batch(
    index: SpatialIndex,
    samples: SampleSet,
    queries,
    config: Config,
    profile: DatasetProfile | None,
    per_point,
    on_error: str,
) -> ImputeOutcome:
    """Shared chunked driver for the baseline batch runs (see rbf.impute_batch)."""
    if on_error not in ("collect", "raise"):
        raise ValueError(f'on_error must be "collect" or "raise", got {on_error!r}')
    qxs, qys = as_query_arrays(queries)
    if profile is None:
        profile = profile_dataset(samples, config)
    n = qxs.shape[0]
    values = np.full(n, np.nan, dtype=np.float64)
    mus = np.full(n, np.nan, dtype=np.float64)
    params = np.full(n, np.nan, dtype=np.float64)

    def work(start: int, stop: int) -> list[tuple[int, str]]:
        chunk_failures: list[tuple[int, str]] = []
        for i in range(start, stop):
            q = QueryPoint(float(qxs[i]), float(qys[i]))
            try:
                value, mu, param = per_point(profile, q)
            except GeofillError as exc:
                if on_error == "raise":
                    raise
                chunk_failures.append((i, str(exc)))
                continue
            values[i] = value
            mus[i] = mu
            params[i] = param
        return chunk_failures

    chunk_results = run_chunked(work, n, config.resolved_workers())
    failures = tuple(f for chunk in chunk_results for f in chunk)
    return ImputeOutcome(values=values, mu=mus, parameter=params, failures=failures)


def knn_batch(
    index: SpatialIndex,
    samples: SampleSet,
    queries,
    config: Config,
    profile: DatasetProfile | None = None,
    on_error: str = "collect",
) -> ImputeOutcome:
    """kNN-mean imputation for many queries; same chunking contract as impute_batch."""

    def per_point(profile: DatasetProfile, q: QueryPoint) -> tuple[float, float, float]:
        nbhd = query_knn(index, q, profile.n_loc)
        return knn_estimate(nbhd), math.nan, math.nan

    return _batch(index, samples, queries, config, profile, per_point, on_error)


def aidw_batch(
    index: SpatialIndex,
    samples: SampleSet,
    queries,
    config: Config,
    profile: DatasetProfile | None = None,
    on_error: str = "collect",
) -> ImputeOutcome:
    """Adaptive-IDW imputation for many queries; same chunking contract as impute_batch.

    Diagnostics per point: the density membership and the exponent used.
    """
    levels = config.power_levels if config.power_levels is not None else DEFAULT_POWER_LEVELS

    def per_point(profile: DatasetProfile, q: QueryPoint) -> tuple[float, float, float]:
        nbhd = query_knn(index, q, profile.n_loc)
        if nbhd.distances[0] <= profile.snap_distance:
            return float(nbhd.values[0]), math.nan, math.nan
        stat = density_summary(nbhd, profile.expected_density, profile.bbox)
        alpha = adaptive_power(stat.mu, levels)
        value = aidw_estimate(nbhd, q, alpha, snap_distance=profile.snap_distance)
        return value, stat.mu, alpha

    return _batch(index, samples, queries, config, profile, per_point, on_error)
