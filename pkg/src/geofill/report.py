"""Benchmark report rendering: human table, machine-readable JSON, figures.

The JSON document is deterministic apart from the timing fields: keys are
sorted and floats keep full precision.  Figures are rendered with the Agg
backend so they work headless; with one benchmark run they are bar charts,
with several (e.g. a fraction sweep) they become line plots against the
hold-out fraction.
"""

from __future__ import annotations

import json
from typing import Sequence

from .config import Config
from .evaluation import EvaluationReport

__all__ = [
    "config_to_dict",
    "render_figures",
    "render_rows_csv",
    "render_table",
    "report_to_document",
]


def config_to_dict(config: Config) -> dict:
    """Every configuration field, JSON-ready."""
    return {
        "n_loc": config.n_loc,
        "shape_levels": list(config.shape_levels.as_tuple()) if config.shape_levels else None,
        "power_levels": list(config.power_levels.as_tuple()) if config.power_levels else None,
        "snap_tolerance": config.snap_tolerance,
        "workers": config.workers,
        "seed": config.seed,
        "holdout_fraction": config.holdout_fraction,
    }


def _run_to_dict(report: EvaluationReport) -> dict:
    return {
        "fraction": report.fraction,
        "seed": report.seed,
        "workers": report.workers,
        "n_known": report.n_known,
        "n_missing": report.n_missing,
        "index_build_seconds": report.index_build_seconds,
        "estimators": [
            {
                "name": row.name,
                "rmse": row.rmse,
                "wall_clock_seconds": row.wall_clock_seconds,
                "n_points": row.n_points,
                "n_failed": row.n_failed,
            }
            for row in report.rows
        ],
    }


def report_to_document(runs: Sequence[EvaluationReport]) -> str:
    """Serialise benchmark runs as a JSON document (sorted keys, trailing newline)."""
    if not runs:
        raise ValueError("no benchmark runs to serialise")
    document = {
        "schema": "geofill-benchmark/1",
        "config": config_to_dict(runs[0].config),
        "runs": [_run_to_dict(r) for r in runs],
    }
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


def render_rows_csv(runs: Sequence[EvaluationReport]) -> str:
    """Per-estimator results as delimited text, one row per (fraction, estimator)."""
    lines = ["fraction,estimator,rmse,wall_clock_seconds,n_points,n_failed"]
    for report in runs:
        for row in report.rows:
            lines.append(
                f"{report.fraction!r},{row.name},{row.rmse!r},"
                f"{row.wall_clock_seconds!r},{row.n_points},{row.n_failed}"
            )
    return "\n".join(lines) + "\n"


def render_table(runs: Sequence[EvaluationReport]) -> str:
    """Human-readable summary of one or more benchmark runs."""
    out = []
    for report in runs:
        out.append(
            f"hold-out fraction {report.fraction:g}  seed {report.seed}  "
            f"known {report.n_known}  missing {report.n_missing}  workers {report.workers}"
        )
        out.append(f"index build: {report.index_build_seconds:.4f} s")
        out.append(f"{'estimator':<12}{'rmse':>14}{'wall clock [s]':>16}{'points':>10}{'failed':>8}")
        for row in report.rows:
            out.append(
                f"{row.name:<12}{row.rmse:>14.6g}{row.wall_clock_seconds:>16.4f}"
                f"{row.n_points:>10}{row.n_failed:>8}"
            )
        out.append("")
    return "\n".join(out)


def render_figures(runs: Sequence[EvaluationReport], rmse_path, timing_path) -> None:
    """Render the accuracy and timing comparisons to two image files.

    One run: bar charts over estimators.  Several runs: lines over the
    hold-out fraction, one per estimator.
    """
    import matplotlib

    matplotlib.use("Agg", force=True)
    import matplotlib.pyplot as plt

    if not runs:
        raise ValueError("no benchmark runs to plot")
    names = [row.name for row in runs[0].rows]
    if len(runs) == 1:
        report = runs[0]
        for path, attr, ylabel, title in (
            (rmse_path, "rmse", "RMSE", "Hold-out accuracy"),
            (timing_path, "wall_clock_seconds", "wall clock [s]", "Imputation time"),
        ):
            fig, ax = plt.subplots(figsize=(5, 4))
            ax.bar(names, [getattr(row, attr) for row in report.rows], color="#4878a8")
            ax.set_ylabel(ylabel)
            ax.set_title(f"{title} (fraction {report.fraction:g}, seed {report.seed})")
            fig.tight_layout()
            fig.savefig(path, format="png")
            plt.close(fig)
        return
    ordered = sorted(runs, key=lambda r: r.fraction)
    fractions = [r.fraction for r in ordered]
    for path, attr, ylabel, title in (
        (rmse_path, "rmse", "RMSE", "Accuracy vs hold-out fraction"),
        (timing_path, "wall_clock_seconds", "wall clock [s]", "Time vs hold-out fraction"),
    ):
        fig, ax = plt.subplots(figsize=(5, 4))
        for name in names:
            ax.plot(
                fractions,
                [getattr(r.row(name), attr) for r in ordered],
                marker="o",
                label=name,
            )
        ax.set_xlabel("hold-out fraction")
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="png")
        plt.close(fig)
    return
