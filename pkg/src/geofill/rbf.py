"""Multiquadric radial-basis-function imputation over local neighbourhoods.

The estimator for one query point: take its ``n_loc`` nearest samples, pick
a shape factor from the local point density (see :mod:`geofill.density`),
solve the small collocation system Phi a = y, and evaluate the resulting
interpolant at the query location.  Batch imputation runs the same
per-point pipeline over many queries, optionally across threads, with
bitwise-identical results for any worker count.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ._batch import run_chunked
from .config import Config
from .density import (
    ShapeFactorLevels,
    default_levels,
    density_summary,
    expected_density,
    shape_factor,
)
from .errors import DuplicatePointError, GeofillError, SingularSystemError
from .kdtree import SpatialIndex, query_knn
from .model import BoundingBox, LocalNeighborhood, QueryPoint, SampleSet

__all__ = [
    "CONDITION_WARN_THRESHOLD",
    "PIVOT_RTOL",
    "DatasetProfile",
    "ImputeOutcome",
    "RbfCoefficients",
    "RbfSystem",
    "assemble_system",
    "evaluate_interpolant",
    "impute_batch",
    "impute_point",
    "mq_kernel",
    "profile_dataset",
    "solve_system",
]

logger = logging.getLogger(__name__)

# A pivot smaller than this fraction of its row's largest original entry is
# treated as numerically zero.
PIVOT_RTOL = 1e-14

# Pivot-ratio condition estimates above this trigger a logged warning.
CONDITION_WARN_THRESHOLD = 1e12

# Neighbours closer than this fraction of the coordinate magnitude are
# considered coincident and rejected at assembly time.
COINCIDENT_RTOL = 1e-12


def mq_kernel(r: float, c: float) -> float:
    """Multiquadric kernel: sqrt(r**2 + c**2) for distance ``r`` and shape factor ``c``.

    Both arguments must be non-negative.  The result is always at least
    ``max(r, c)``.
    """
    if not r >= 0.0:
        raise ValueError(f"kernel distance must be non-negative, got {r}")
    if not c >= 0.0:
        raise ValueError(f"shape factor must be non-negative, got {c}")
    return math.sqrt(r * r + c * c)


@dataclass(frozen=True, eq=False)
class RbfSystem:
    """The collocation system Phi a = y for one neighbourhood.

    ``matrix`` is symmetric with ``mq_kernel(0, c)`` on the diagonal.  The
    neighbour coordinates ride along so the solved coefficients can be
    evaluated without going back to the neighbourhood.
    """

    matrix: np.ndarray
    rhs: np.ndarray
    shape_factor: float
    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self) -> None:
        k = self.rhs.shape[0]
        if self.matrix.shape != (k, k):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match rhs length {k}"
            )


@dataclass(frozen=True, eq=False)
class RbfCoefficients:
    """Solved interpolant: coefficients plus everything needed to evaluate it.

    ``condition_estimate`` is the ratio of the largest to smallest pivot
    magnitude from the factorization — an order-of-magnitude proxy for the
    true condition number, kept for diagnostics.
    """

    coefficients: np.ndarray
    shape_factor: float
    xs: np.ndarray
    ys: np.ndarray
    condition_estimate: float


def assemble_system(nbhd: LocalNeighborhood, c: float) -> RbfSystem:
    """Build the multiquadric collocation system for a neighbourhood.

    Each off-diagonal pair (i, j) is computed once and mirrored, so the
    matrix is symmetric by construction.  Raises
    :class:`~geofill.errors.DuplicatePointError` if any two neighbours lie
    within ``1e-12`` of each other relative to the coordinate magnitude.
    """
    if not c >= 0.0:
        raise ValueError(f"shape factor must be non-negative, got {c}")
    xs = nbhd.xs
    ys = nbhd.ys
    k = xs.shape[0]
    matrix = np.empty((k, k), dtype=np.float64)
    np.fill_diagonal(matrix, mq_kernel(0.0, c))
    if k > 1:
        iu, ju = np.triu_indices(k, 1)
        dx = xs[iu] - xs[ju]
        dy = ys[iu] - ys[ju]
        r = np.sqrt(dx * dx + dy * dy)
        scale = max(float(np.max(np.abs(xs))), float(np.max(np.abs(ys))))
        nearest = int(np.argmin(r))
        if r[nearest] < COINCIDENT_RTOL * scale:
            raise DuplicatePointError(
                f"neighbours {iu[nearest]} and {ju[nearest]} coincide "
                f"(separation {r[nearest]:.3e})"
            )
        phi = np.sqrt(r * r + c * c)
        matrix[iu, ju] = phi
        matrix[ju, iu] = phi
    rhs = nbhd.values.copy()
    rhs.setflags(write=False)
    matrix.setflags(write=False)
    return RbfSystem(matrix=matrix, rhs=rhs, shape_factor=c, xs=xs, ys=ys)


def _solve_partial_pivot(matrix: np.ndarray, rhs: np.ndarray) -> tuple[np.ndarray, float]:
    """Gaussian elimination with partial pivoting; returns (solution, pivot ratio).

    A pivot is rejected as numerically zero when it falls below
    ``PIVOT_RTOL`` times the largest original magnitude in its row.
    """
    n = rhs.shape[0]
    u = matrix.astype(np.float64, copy=True)
    x = rhs.astype(np.float64, copy=True)
    row_scale = np.abs(u).max(axis=1)
    for col in range(n):
        p = col + int(np.argmax(np.abs(u[col:, col])))
        pivot = u[p, col]
        if pivot == 0.0 or abs(pivot) < PIVOT_RTOL * row_scale[p]:
            raise SingularSystemError(
                f"singular interpolation system: pivot {pivot:.3e} at column {col} "
                f"(row magnitude {row_scale[p]:.3e})"
            )
        if p != col:
            u[[col, p]] = u[[p, col]]
            x[[col, p]] = x[[p, col]]
            row_scale[[col, p]] = row_scale[[p, col]]
        if col + 1 < n:
            mult = u[col + 1 :, col] / pivot
            u[col + 1 :, col:] -= np.outer(mult, u[col, col:])
            x[col + 1 :] -= mult * x[col]
    pivots = np.abs(np.diagonal(u))
    condition_estimate = float(pivots.max() / pivots.min())
    for row in range(n - 1, -1, -1):
        x[row] = (x[row] - np.dot(u[row, row + 1 :], x[row + 1 :])) / u[row, row]
    return x, condition_estimate


def solve_system(system: RbfSystem) -> RbfCoefficients:
    """Solve Phi a = y by dense elimination with partial pivoting.

    Raises :class:`~geofill.errors.SingularSystemError` when a pivot is
    numerically zero.  Logs a warning (but still returns the solution) when
    the pivot-ratio condition estimate exceeds ``CONDITION_WARN_THRESHOLD``.
    """
    coefficients, condition_estimate = _solve_partial_pivot(system.matrix, system.rhs)
    if condition_estimate > CONDITION_WARN_THRESHOLD:
        logger.warning(
            "ill-conditioned interpolation system: condition estimate %.3e "
            "(shape factor %.6g, %d neighbours)",
            condition_estimate,
            system.shape_factor,
            system.rhs.shape[0],
        )
    coefficients.setflags(write=False)
    return RbfCoefficients(
        coefficients=coefficients,
        shape_factor=system.shape_factor,
        xs=system.xs,
        ys=system.ys,
        condition_estimate=condition_estimate,
    )


def _evaluate(coeffs: RbfCoefficients, qx: float, qy: float) -> float:
    dx = coeffs.xs - qx
    dy = coeffs.ys - qy
    r = np.sqrt(dx * dx + dy * dy)
    c = coeffs.shape_factor
    phi = np.sqrt(r * r + c * c)
    return float(np.dot(coeffs.coefficients, phi))


def evaluate_interpolant(coeffs: RbfCoefficients, q: QueryPoint) -> float:
    """Evaluate sum_j a_j * mq_kernel(|q - x_j|, c) at the query location."""
    return _evaluate(coeffs, q.x, q.y)


@dataclass(frozen=True, eq=False)
class DatasetProfile:
    """Per-dataset quantities computed once and shared by every query.

    ``snap_distance`` is absolute: queries whose nearest sample lies at or
    below it take that sample's value directly.  ``n_loc`` is already
    clamped to the dataset size.
    """

    expected_density: float
    shape_levels: ShapeFactorLevels
    bbox: BoundingBox
    snap_distance: float
    n_loc: int


def profile_dataset(samples: SampleSet, config: Config) -> DatasetProfile:
    """Precompute the global density, shape levels and snap distance for a dataset."""
    n_loc = config.n_loc
    if n_loc > samples.count:
        logger.warning(
            "n_loc=%d exceeds dataset size %d; clamping to the dataset size",
            n_loc,
            samples.count,
        )
        n_loc = samples.count
    if config.shape_levels is not None:
        levels = config.shape_levels
    elif samples.count >= 2:
        levels = default_levels(samples)
    else:
        # A single point has no spacing scale; fall back to a unit scale.
        levels = ShapeFactorLevels(0.2, 0.6, 1.0, 1.5, 2.0)
    bbox = samples.bbox
    snap_distance = config.snap_tolerance * max(bbox.width, bbox.height)
    return DatasetProfile(
        expected_density=expected_density(samples),
        shape_levels=levels,
        bbox=bbox,
        snap_distance=snap_distance,
        n_loc=n_loc,
    )


def _impute_one(
    index: SpatialIndex,
    profile: DatasetProfile,
    q: QueryPoint,
) -> tuple[float, float, float]:
    """One query through the full pipeline; returns (value, membership, shape factor).

    Membership and shape factor are NaN when the query snapped to a data
    point and no system was solved.
    """
    nbhd = query_knn(index, q, profile.n_loc)
    if nbhd.distances[0] <= profile.snap_distance:
        return float(nbhd.values[0]), math.nan, math.nan
    stat = density_summary(nbhd, profile.expected_density, profile.bbox)
    c = shape_factor(stat.mu, profile.shape_levels)
    system = assemble_system(nbhd, c)
    coeffs = solve_system(system)
    return _evaluate(coeffs, q.x, q.y), stat.mu, c


def impute_point(
    index: SpatialIndex,
    samples: SampleSet,
    q: QueryPoint,
    config: Config,
    profile: DatasetProfile | None = None,
) -> float:
    """Impute one missing value.

    Pipeline: k-nearest neighbours; snap if the query coincides with a
    sample; otherwise derive the local density membership, pick the shape
    factor, assemble and solve the multiquadric system, and evaluate it at
    the query.  Pass a precomputed ``profile`` when imputing many points
    against the same dataset.
    """
    if profile is None:
        profile = profile_dataset(samples, config)
    value, _, _ = _impute_one(index, profile, q)
    return value


@dataclass(frozen=True, eq=False)
class ImputeOutcome(Sequence):
    """Batch results: one value per query plus per-point diagnostics.

    Iterating (or indexing) yields the imputed values, so the outcome can
    be used directly as a sequence of floats.  ``values`` holds NaN at
    failed positions; ``failures`` pairs each failed query index with the
    reason.  ``mu`` and ``parameter`` (shape factor or IDW exponent) are
    NaN where not applicable, e.g. snapped queries.
    """

    values: np.ndarray
    mu: np.ndarray
    parameter: np.ndarray
    failures: tuple[tuple[int, str], ...]

    def __len__(self) -> int:
        return int(self.values.shape[0])

    def __getitem__(self, i):  # type: ignore[override]
        return float(self.values[i])

    def __iter__(self) -> Iterator[float]:
        return iter(self.values.tolist())


def as_query_arrays(queries) -> tuple[np.ndarray, np.ndarray]:
    """Normalise a query collection to parallel coordinate arrays.

    Accepts a sequence of :class:`~geofill.model.QueryPoint` (or objects
    with ``.x``/``.y``) or an (m, 2) array of coordinates.
    """
    if isinstance(queries, np.ndarray):
        if queries.ndim != 2 or queries.shape[1] != 2:
            raise ValueError(f"query array must have shape (m, 2), got {queries.shape}")
        qxs = np.ascontiguousarray(queries[:, 0], dtype=np.float64)
        qys = np.ascontiguousarray(queries[:, 1], dtype=np.float64)
        return qxs, qys
    pts = list(queries)
    qxs = np.array([p.x for p in pts], dtype=np.float64)
    qys = np.array([p.y for p in pts], dtype=np.float64)
    return qxs, qys


def impute_batch(
    index: SpatialIndex,
    samples: SampleSet,
    queries,
    config: Config,
    profile: DatasetProfile | None = None,
    on_error: str = "collect",
) -> ImputeOutcome:
    """Impute many points; element i equals ``impute_point`` on queries[i].

    Work is split into fixed-size chunks and distributed over
    ``config.workers`` threads; every chunk writes a disjoint slice of the
    output, so results are bitwise-identical for any worker count.  With
    ``on_error="collect"`` (default) per-point failures are recorded in
    ``failures`` and the batch continues; with ``on_error="raise"`` the
    first failure propagates.
    """
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
                value, mu, c = _impute_one(index, profile, q)
            except GeofillError as exc:
                if on_error == "raise":
                    raise
                chunk_failures.append((i, str(exc)))
                continue
            values[i] = value
            mus[i] = mu
            params[i] = c
        return chunk_failures

    chunk_results = run_chunked(work, n, config.resolved_workers())
    failures = tuple(f for chunk in chunk_results for f in chunk)
    return ImputeOutcome(values=values, mu=mus, parameter=params, failures=failures)
