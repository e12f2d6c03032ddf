"""Run configuration shared by the estimators, the benchmark and the CLI."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .errors import FractionOutOfRangeError

if TYPE_CHECKING:  # imported for annotations only; avoids an import cycle
    from .baselines import PowerLevels
    from .density import ShapeFactorLevels

__all__ = ["Config", "DEFAULT_N_LOC"]

DEFAULT_N_LOC = 20


@dataclass(frozen=True, slots=True)
class Config:
    """Knobs for imputation and benchmarking.

    Attributes:
        n_loc: size of the local dataset (nearest neighbours per query).
            Clamped to the dataset size, with a warning, when the dataset
            is smaller.
        shape_levels: the five shape-factor levels, or None to derive them
            from the dataset's expected point spacing.
        power_levels: the five adaptive-IDW exponents, or None for the
            library defaults (1.0, 1.5, 2.0, 2.5, 3.0).
        snap_tolerance: fraction of the larger global bounding-box extent
            below which a query is snapped to its nearest data point.
        workers: parallel workers for batch imputation; "auto" uses the
            CPU count. Results are identical for any worker count.
        seed: seed for hold-out splitting and synthetic data.
        holdout_fraction: fraction of samples withheld by benchmark splits.
    """

    n_loc: int = DEFAULT_N_LOC
    shape_levels: "ShapeFactorLevels | None" = None
    power_levels: "PowerLevels | None" = None
    snap_tolerance: float = 1e-12
    workers: int | str = 1
    seed: int = 0
    holdout_fraction: float = field(default=0.1)

    def __post_init__(self) -> None:
        if self.n_loc < 1:
            raise ValueError(f"n_loc must be a positive integer, got {self.n_loc}")
        if not self.snap_tolerance >= 0.0:
            raise ValueError(f"snap_tolerance must be non-negative, got {self.snap_tolerance}")
        if isinstance(self.workers, str):
            if self.workers != "auto":
                raise ValueError(f'workers must be a positive integer or "auto", got {self.workers!r}')
        elif self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")
        if not 0.0 < self.holdout_fraction < 1.0:
            raise FractionOutOfRangeError(
                f"holdout_fraction must lie in (0, 1), got {self.holdout_fraction}"
            )

    def resolved_workers(self) -> int:
        if self.workers == "auto":
            return max(1, os.cpu_count() or 1)
        return int(self.workers)
