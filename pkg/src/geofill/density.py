"""Density-driven selection of the multiquadric shape factor.

The idea: compare how densely packed a query's neighbourhood is against
the dataset-wide average. The ratio of local to expected point density is
squashed to a membership value in [0, 1] by a cosine ramp, and that
membership picks the shape factor from five user-tunable levels through a
piecewise-linear (triangular) schedule. The same five-level schedule is
reused by the adaptive-IDW baseline for its distance-decay exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    EmptyInputError,
    MuOutOfRangeError,
    NonFiniteValueError,
    NonPositiveDensityError,
)
from .model import BoundingBox, LocalNeighborhood, SampleSet

__all__ = [
    "DensityStatistic",
    "ShapeFactorLevels",
    "expected_density",
    "local_density",
    "density_statistic",
    "fuzzy_membership",
    "shape_factor",
    "default_levels",
    "density_summary",
    "five_level_schedule",
]

# Zero-width or zero-height boxes (collinear points) get the offending
# extent floored at this fraction of the corresponding global extent, which
# drives the density ratio far above 2 and saturates the membership at 1.
DEGENERATE_EXTENT_FLOOR = 1e-12


@dataclass(frozen=True, slots=True)
class ShapeFactorLevels:
    """The five shape-factor levels the membership schedule selects from."""

    c1: float
    c2: float
    c3: float
    c4: float
    c5: float

    def __post_init__(self) -> None:
        for name, v in zip(("c1", "c2", "c3", "c4", "c5"), self.as_tuple()):
            if not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"shape-factor level {name} must be positive and finite, got {v}")

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.c1, self.c2, self.c3, self.c4, self.c5)


@dataclass(frozen=True, slots=True)
class DensityStatistic:
    """Densities and the derived membership for one query location.

    Attributes:
        d_exp: dataset-wide points per unit area (over the global box).
        d_loc: neighbourhood points per unit area (over the local box).
        d_ratio: d_loc / d_exp.
        mu: cosine-ramp membership of d_ratio, in [0, 1].
    """

    d_exp: float
    d_loc: float
    d_ratio: float
    mu: float

    def __post_init__(self) -> None:
        if self.d_exp <= 0.0 or self.d_loc <= 0.0:
            raise NonPositiveDensityError(
                f"densities must be positive, got d_exp={self.d_exp}, d_loc={self.d_loc}"
            )
        if not 0.0 <= self.mu <= 1.0:
            raise MuOutOfRangeError(f"membership must lie in [0, 1], got {self.mu}")


def _floored_extent(extent: float, reference_extent: float, fallback: float) -> float:
    """An extent for density division, floored when degenerate (zero)."""
    if extent > 0.0:
        return extent
    ref = reference_extent if reference_extent > 0.0 else fallback
    return DEGENERATE_EXTENT_FLOOR * ref


def _box_area(box: BoundingBox, reference: BoundingBox) -> float:
    fallback = max(reference.width, reference.height, 1.0)
    w = _floored_extent(box.width, reference.width, fallback)
    h = _floored_extent(box.height, reference.height, fallback)
    return w * h


def expected_density(samples: SampleSet) -> float:
    """Points per unit area over the dataset's tight bounding box."""
    if samples.count < 1:
        raise EmptyInputError("expected density needs at least one sample")
    return samples.count / _box_area(samples.bbox, samples.bbox)


def local_density(nbhd: LocalNeighborhood, reference_bbox: BoundingBox | None = None) -> float:
    """Points per unit area over the neighbourhood's tight bounding box.

    ``reference_bbox`` (normally the dataset's global box) supplies the
    scale for flooring a degenerate local extent; without it the local box
    itself is the reference.
    """
    if nbhd.size < 1:
        raise EmptyInputError("local density needs at least one neighbour")
    reference = reference_bbox if reference_bbox is not None else nbhd.local_bbox
    return nbhd.size / _box_area(nbhd.local_bbox, reference)


def density_statistic(d_loc: float, d_exp: float) -> float:
    """The dimensionless local-to-expected density ratio."""
    if not d_exp > 0.0:
        raise NonPositiveDensityError(f"expected density must be positive, got {d_exp}")
    return d_loc / d_exp


def fuzzy_membership(d_ratio: float) -> float:
    """Squash a density ratio to [0, 1] with a half-cosine ramp.

    0 at or below ratio 0, 1 at or above ratio 2, and
    0.5 − 0.5·cos(π·ratio/2) in between. Continuous and monotone
    non-decreasing.
    """
    if not math.isfinite(d_ratio):
        raise NonFiniteValueError(f"density ratio must be finite, got {d_ratio}")
    if d_ratio <= 0.0:
        return 0.0
    if d_ratio >= 2.0:
        return 1.0
    return 0.5 - 0.5 * math.cos(0.5 * math.pi * d_ratio)


def five_level_schedule(mu: float, levels: tuple[float, float, float, float, float]) -> float:
    """Piecewise-linear interpolation through five levels on [0, 1].

    Flat at the first level below membership 0.1 and at the fifth above
    0.9, with linear blends through the knots at 0.1, 0.3, 0.5, 0.7, 0.9.
    Shared by the shape-factor rule and the adaptive-IDW exponent rule.
    """
    if not 0.0 <= mu <= 1.0:
        raise MuOutOfRangeError(f"membership must lie in [0, 1], got {mu}")
    v1, v2, v3, v4, v5 = levels
    if mu < 0.1:
        return v1
    if mu < 0.3:
        t = mu - 0.1
        return v1 * (1.0 - 5.0 * t) + 5.0 * v2 * t
    if mu < 0.5:
        t = mu - 0.3
        return 5.0 * v3 * t + v2 * (1.0 - 5.0 * t)
    if mu < 0.7:
        t = mu - 0.5
        return v3 * (1.0 - 5.0 * t) + 5.0 * v4 * t
    if mu < 0.9:
        t = mu - 0.7
        return 5.0 * v5 * t + v4 * (1.0 - 5.0 * t)
    return v5


def shape_factor(mu: float, levels: ShapeFactorLevels) -> float:
    """Shape factor for a membership value, via the five-level schedule."""
    return five_level_schedule(mu, levels.as_tuple())


def default_levels(samples: SampleSet) -> ShapeFactorLevels:
    """Shape-factor levels derived from the expected point spacing.

    With h = sqrt(1 / expected density) — the mean spacing of a uniform
    scatter at that density — the levels are (0.2, 0.6, 1.0, 1.5, 2.0)·h,
    ascending so the kernel flattens where points crowd together. They are
    a documented default, not a calibrated constant; override via
    configuration when the dataset calls for it.
    """
    if samples.count < 2:
        raise EmptyInputError("default shape-factor levels need at least two samples")
    h = math.sqrt(1.0 / expected_density(samples))
    return ShapeFactorLevels(0.2 * h, 0.6 * h, 1.0 * h, 1.5 * h, 2.0 * h)


def density_summary(
    nbhd: LocalNeighborhood,
    d_exp: float,
    reference_bbox: BoundingBox | None = None,
) -> DensityStatistic:
    """Full density statistic (d_exp, d_loc, ratio, membership) for one query."""
    d_loc = local_density(nbhd, reference_bbox)
    ratio = density_statistic(d_loc, d_exp)
    return DensityStatistic(d_exp=d_exp, d_loc=d_loc, d_ratio=ratio, mu=fuzzy_membership(ratio))
