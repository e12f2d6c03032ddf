"""Core domain types for scattered planar samples.

A dataset is a set of (x, y, value) observations, e.g. elevations sampled
from a DEM. Everything downstream (neighbour search, density estimation,
the estimators themselves) works on these types. All of them are immutable
after construction and safe to share between threads.

Coordinates and values are stored as float64 throughout: DEM coordinates
at ~1e6 metres need double precision for stable distance arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    DuplicatePointError,
    EmptyInputError,
    NonFiniteValueError,
)

__all__ = [
    "SamplePoint",
    "QueryPoint",
    "BoundingBox",
    "SampleSet",
    "LocalNeighborhood",
    "compute_bbox",
    "euclidean_distance",
]


@dataclass(frozen=True, slots=True)
class SamplePoint:
    """One observation: a planar location and the scalar measured there."""

    x: float
    y: float
    value: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.value)):
            raise NonFiniteValueError(
                f"sample point must be finite, got ({self.x}, {self.y}, {self.value})"
            )


@dataclass(frozen=True, slots=True)
class QueryPoint:
    """A location whose value is to be imputed."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise NonFiniteValueError(f"query point must be finite, got ({self.x}, {self.y})")


@dataclass(frozen=True, slots=True)
class BoundingBox:
    """Axis-aligned rectangle, inclusive on all sides."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self) -> None:
        if not all(map(math.isfinite, (self.x_min, self.x_max, self.y_min, self.y_max))):
            raise NonFiniteValueError("bounding box corners must be finite")
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ValueError(
                f"inverted bounding box: x [{self.x_min}, {self.x_max}], y [{self.y_min}, {self.y_max}]"
            )

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    @property
    def area(self) -> float:
        return self.width * self.height

    def contains(self, x: float, y: float) -> bool:
        """Inclusive point-in-box test."""
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max


def _as_coordinate_arrays(points) -> tuple[np.ndarray, np.ndarray]:
    """Extract (xs, ys) float64 arrays from a SampleSet, an (n, 2) array, or
    an iterable of objects with .x/.y attributes."""
    if isinstance(points, SampleSet):
        return points.xs, points.ys
    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[1] < 2:
            raise ValueError(f"expected an (n, 2) coordinate array, got shape {arr.shape}")
        return arr[:, 0], arr[:, 1]
    pts = list(points)
    xs = np.array([p.x for p in pts], dtype=np.float64)
    ys = np.array([p.y for p in pts], dtype=np.float64)
    return xs, ys


def compute_bbox(points) -> BoundingBox:
    """Tight bounding box of a point collection.

    Accepts a :class:`SampleSet`, an (n, 2) ndarray, or any iterable of
    point-like objects. Raises :class:`EmptyInputError` for an empty
    collection.
    """
    xs, ys = _as_coordinate_arrays(points)
    if xs.size == 0:
        raise EmptyInputError("cannot compute the bounding box of an empty collection")
    return BoundingBox(
        x_min=float(xs.min()),
        x_max=float(xs.max()),
        y_min=float(ys.min()),
        y_max=float(ys.max()),
    )


def euclidean_distance(a, b) -> float:
    """Planar Euclidean distance between two point-like objects.

    Computed as sqrt(dx*dx + dy*dy); the same expression is used in the
    neighbour search so that distances agree bit-for-bit everywhere.
    """
    dx = a.x - b.x
    dy = a.y - b.y
    return math.sqrt(dx * dx + dy * dy)


def _check_exact_duplicates(xs: np.ndarray, ys: np.ndarray) -> None:
    """Reject pairs with identical float64 coordinates.

    Exact equality is the ingestion-level duplicate rule; near-coincident
    neighbours are additionally guarded at system-assembly time.
    """
    if xs.size < 2:
        return
    order = np.lexsort((ys, xs))
    sx, sy = xs[order], ys[order]
    same = (sx[1:] == sx[:-1]) & (sy[1:] == sy[:-1])
    if same.any():
        at = int(np.argmax(same))
        i, j = sorted((int(order[at]), int(order[at + 1])))
        raise DuplicatePointError(
            f"points {i} and {j} share coordinates ({xs[i]}, {ys[i]})",
            first_line=i,
            duplicate_line=j,
        )


class SampleSet(Sequence):
    """The known-value points, in ingestion order.

    Stores the coordinates and values as immutable float64 arrays and
    exposes them both array-wise (``xs``, ``ys``, ``values``) and
    point-wise (indexing yields :class:`SamplePoint`). The bounding box is
    always the tight box of the points; ``count`` is the number of points.

    Ingestion order is preserved and is the tie-breaking order used by the
    neighbour search, so two runs over the same input behave identically.
    """

    __slots__ = ("xs", "ys", "values", "bbox")

    def __init__(self, xs, ys, values):
        xs = np.ascontiguousarray(xs, dtype=np.float64)
        ys = np.ascontiguousarray(ys, dtype=np.float64)
        values = np.ascontiguousarray(values, dtype=np.float64)
        if not (xs.ndim == ys.ndim == values.ndim == 1):
            raise ValueError("xs, ys and values must be one-dimensional")
        if not (xs.size == ys.size == values.size):
            raise ValueError(
                f"mismatched lengths: xs={xs.size}, ys={ys.size}, values={values.size}"
            )
        if xs.size == 0:
            raise EmptyInputError("a sample set needs at least one point")
        for name, arr in (("x", xs), ("y", ys), ("value", values)):
            if not np.isfinite(arr).all():
                bad = int(np.flatnonzero(~np.isfinite(arr))[0])
                raise NonFiniteValueError(f"non-finite {name} at point {bad}: {arr[bad]}")
        _check_exact_duplicates(xs, ys)
        for arr in (xs, ys, values):
            arr.setflags(write=False)
        self.xs = xs
        self.ys = ys
        self.values = values
        self.bbox = compute_bbox(self)

    @classmethod
    def from_points(cls, points: Iterable[SamplePoint]) -> "SampleSet":
        pts = list(points)
        if not pts:
            raise EmptyInputError("a sample set needs at least one point")
        return cls(
            np.array([p.x for p in pts], dtype=np.float64),
            np.array([p.y for p in pts], dtype=np.float64),
            np.array([p.value for p in pts], dtype=np.float64),
        )

    @property
    def count(self) -> int:
        return int(self.xs.size)

    def __len__(self) -> int:
        return self.count

    def __getitem__(self, i: int) -> SamplePoint:
        if isinstance(i, slice):
            raise TypeError("sample sets do not support slicing; index points individually")
        return SamplePoint(float(self.xs[i]), float(self.ys[i]), float(self.values[i]))

    def __iter__(self) -> Iterator[SamplePoint]:
        for i in range(self.count):
            yield self[i]

    def __repr__(self) -> str:
        b = self.bbox
        return (
            f"SampleSet(count={self.count}, "
            f"x=[{b.x_min:g}, {b.x_max:g}], y=[{b.y_min:g}, {b.y_max:g}])"
        )


class LocalNeighborhood:
    """The k nearest data points to one query, sorted by distance.

    ``xs``, ``ys``, ``values``, ``distances`` are parallel arrays over the
    neighbours, ascending by distance; ``indices`` are their positions in
    the originating :class:`SampleSet` (equal distances are ordered by this
    ingestion index). ``local_bbox`` is the tight box of the neighbour
    locations.
    """

    __slots__ = ("xs", "ys", "values", "distances", "indices", "local_bbox")

    def __init__(self, xs, ys, values, distances, indices):
        xs = np.ascontiguousarray(xs, dtype=np.float64)
        ys = np.ascontiguousarray(ys, dtype=np.float64)
        values = np.ascontiguousarray(values, dtype=np.float64)
        distances = np.ascontiguousarray(distances, dtype=np.float64)
        indices = np.ascontiguousarray(indices, dtype=np.intp)
        if xs.size == 0:
            raise EmptyInputError("a neighbourhood needs at least one point")
        if not (xs.size == ys.size == values.size == distances.size == indices.size):
            raise ValueError("neighbourhood arrays must have equal lengths")
        if distances[0] < 0.0 or (distances[1:] < distances[:-1]).any():
            raise ValueError("neighbour distances must be non-negative and ascending")
        for arr in (xs, ys, values, distances, indices):
            arr.setflags(write=False)
        self.xs = xs
        self.ys = ys
        self.values = values
        self.distances = distances
        self.indices = indices
        self.local_bbox = BoundingBox(
            x_min=float(xs.min()),
            x_max=float(xs.max()),
            y_min=float(ys.min()),
            y_max=float(ys.max()),
        )

    @property
    def size(self) -> int:
        return int(self.xs.size)

    @property
    def neighbors(self) -> Iterator[tuple[SamplePoint, float]]:
        """(point, distance) pairs in ascending-distance order."""
        for i in range(self.size):
            point = SamplePoint(float(self.xs[i]), float(self.ys[i]), float(self.values[i]))
            yield point, float(self.distances[i])

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return (
            f"LocalNeighborhood(size={self.size}, "
            f"d=[{self.distances[0]:g}, {self.distances[-1]:g}])"
        )
