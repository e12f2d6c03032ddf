"""Command-line interface: impute, split, benchmark and synth subcommands.

Exit codes: 0 success, 2 usage error, 3 data error (unreadable or invalid
input), 4 numerical failure.  Output files are written to temporaries and
promoted only when the whole command succeeds, so a failed run leaves no
partial outputs behind.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .baselines import PowerLevels, aidw_batch, knn_batch
from .config import Config
from .dataio import (
    parse_ascii_grid,
    parse_targets,
    parse_xyz,
    write_imputed,
    write_xyz,
    write_xyz_arrays,
)
from .density import ShapeFactorLevels
from .errors import DataError, GeofillError, NumericalError
from .evaluation import ESTIMATOR_NAMES, holdout_split, run_benchmark, synth_surface
from .kdtree import build_index
from .model import BoundingBox
from .rbf import impute_batch, profile_dataset
from .report import render_figures, render_rows_csv, render_table, report_to_document

__all__ = ["main"]

_GRID_SUFFIXES = (".asc", ".agr", ".grd")

_BATCH_FNS = {"aidw": aidw_batch, "knn": knn_batch, "rbf": impute_batch}


class _UsageError(Exception):
    """Bad argument combination that argparse alone cannot detect."""


class _OutputSet:
    """Stages output files and promotes them all at once on success."""

    def __init__(self) -> None:
        self._staged: list[tuple[str, str]] = []

    def stage(self, path: str) -> str:
        """Reserve a temporary path that will replace ``path`` on commit."""
        tmp = f"{path}.part-{os.getpid()}"
        self._staged.append((tmp, path))
        return tmp

    def open_text(self, path: str):
        return open(self.stage(path), "w", encoding="utf-8", newline="")

    def commit(self) -> None:
        """Promote every staged file; on any failure, restore the prior state."""
        committed: list[tuple[str, str | None]] = []
        try:
            for tmp, final in self._staged:
                backup = None
                if os.path.exists(final):
                    backup = f"{final}.bak-{os.getpid()}"
                    os.replace(final, backup)
                os.replace(tmp, final)
                committed.append((final, backup))
        except BaseException:
            for final, backup in reversed(committed):
                try:
                    if backup is not None:
                        os.replace(backup, final)
                    else:
                        os.unlink(final)
                except OSError:
                    pass
            raise
        for _, backup in committed:
            if backup is not None:
                try:
                    os.unlink(backup)
                except OSError:
                    pass
        self._staged.clear()

    def discard(self) -> None:
        for tmp, _ in self._staged:
            try:
                os.unlink(tmp)
            except FileNotFoundError:
                pass
        self._staged.clear()


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise ValueError(f"must be a positive integer, got {value}")
    return value


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise ValueError(f"must be non-negative, got {value}")
    return value


def _non_negative_float(text: str) -> float:
    value = float(text)
    if not value >= 0.0:
        raise ValueError(f"must be non-negative, got {value}")
    return value


def _fraction(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise ValueError(f"must lie strictly between 0 and 1, got {value}")
    return value


def _workers(text: str) -> int | str:
    if text == "auto":
        return "auto"
    return _positive_int(text)


def _shape_levels(text: str) -> ShapeFactorLevels:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 5:
        raise ValueError(f"expected 5 comma-separated values, got {len(parts)}")
    return ShapeFactorLevels(*parts)


def _power_levels(text: str) -> PowerLevels:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 5:
        raise ValueError(f"expected 5 comma-separated values, got {len(parts)}")
    return PowerLevels(*parts)


def _extent(text: str) -> BoundingBox:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError(f"expected x_min,y_min,x_max,y_max, got {len(parts)} values")
    return BoundingBox(parts[0], parts[2], parts[1], parts[3])


def _add_estimator_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--k", type=_positive_int, default=None, metavar="N",
                     help="local neighbourhood size (default 20)")
    sub.add_argument("--levels", type=_shape_levels, default=None, metavar="C1,C2,C3,C4,C5",
                     help="shape-factor levels; default derives them from point spacing")
    sub.add_argument("--power-levels", type=_power_levels, default=None, metavar="A1,A2,A3,A4,A5",
                     help="adaptive-IDW exponents (default 1.0,1.5,2.0,2.5,3.0)")
    sub.add_argument("--snap-tolerance", type=_non_negative_float, default=None, metavar="T",
                     help="snap queries this close (relative to the data extent) to a data point")
    sub.add_argument("--workers", type=_workers, default=None, metavar="W",
                     help='parallel workers, or "auto" (results do not depend on this)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geofill",
        description="Impute missing values in scattered 2-D data with adaptive "
        "multiquadric RBF interpolation, and benchmark it against kNN and "
        "adaptive-IDW baselines.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    impute = commands.add_parser("impute", help="impute values at target locations")
    impute.add_argument("--known", required=True, help="known samples (x,y,value file or ESRI ASCII grid)")
    impute.add_argument("--targets", default=None,
                        help="target locations (x,y file); defaults to a grid's NODATA cells")
    impute.add_argument("--method", required=True, choices=sorted(_BATCH_FNS))
    impute.add_argument("--dedupe", choices=("reject", "mean"), default="reject",
                        help="how to treat duplicate coordinates in the input")
    _add_estimator_args(impute)
    impute.add_argument("--out", required=True, help="output file (x,y,value,mu,param)")

    split = commands.add_parser("split", help="hold out a seeded random fraction of a dataset")
    split.add_argument("--input", required=True)
    split.add_argument("--fraction", type=_fraction, required=True)
    split.add_argument("--seed", type=_non_negative_int, required=True)
    split.add_argument("--dedupe", choices=("reject", "mean"), default="reject")
    split.add_argument("--out-known", required=True)
    split.add_argument("--out-missing", required=True)

    bench = commands.add_parser("benchmark", help="hold-out comparison of the estimators")
    bench.add_argument("--input", required=True)
    bench.add_argument("--fraction", type=_fraction, action="append", default=None,
                       help="hold-out fraction; repeat for a sweep (default 0.1)")
    bench.add_argument("--seed", type=_non_negative_int, default=0)
    bench.add_argument("--methods", nargs="+", choices=ESTIMATOR_NAMES,
                       default=list(ESTIMATOR_NAMES))
    bench.add_argument("--dedupe", choices=("reject", "mean"), default="reject")
    _add_estimator_args(bench)
    bench.add_argument("--report", required=True,
                       help="machine-readable report path; a .csv twin and figures land beside it")
    bench.add_argument("--figures", default=None, metavar="DIR",
                       help="directory for the rendered figures (default: beside the report)")
    bench.add_argument("--no-figures", action="store_true", help="skip figure rendering")

    synth = commands.add_parser("synth", help="generate a synthetic dataset")
    synth.add_argument("--kind", required=True,
                       help="constant[:level] | ramp[:sx,sy] | hills")
    synth.add_argument("--n", type=_positive_int, required=True)
    synth.add_argument("--seed", type=_non_negative_int, default=0)
    synth.add_argument("--extent", type=_extent, default="0,0,100,100",
                       help="sampling window x_min,y_min,x_max,y_max (default 0,0,100,100)")
    synth.add_argument("--out", required=True)

    return parser


def _build_config(args: argparse.Namespace, fraction: float | None = None) -> Config:
    defaults = Config()
    return Config(
        n_loc=args.k if args.k is not None else defaults.n_loc,
        shape_levels=args.levels,
        power_levels=args.power_levels,
        snap_tolerance=(args.snap_tolerance if args.snap_tolerance is not None
                        else defaults.snap_tolerance),
        workers=args.workers if args.workers is not None else defaults.workers,
        seed=getattr(args, "seed", defaults.seed),
        holdout_fraction=fraction if fraction is not None else defaults.holdout_fraction,
    )


def _load_known(path: str, dedupe: str):
    """Read a dataset; returns (samples, grid NODATA queries or None)."""
    if path.lower().endswith(_GRID_SUFFIXES):
        with open(path, "r", encoding="utf-8") as f:
            samples, queries = parse_ascii_grid(f)
        return samples, queries
    with open(path, "r", encoding="utf-8") as f:
        return parse_xyz(f, dedupe=dedupe), None


def _cmd_impute(args: argparse.Namespace, outputs: _OutputSet) -> None:
    samples, grid_queries = _load_known(args.known, args.dedupe)
    if args.targets is not None:
        with open(args.targets, "r", encoding="utf-8") as f:
            targets = parse_targets(f)
    elif grid_queries is not None and grid_queries.shape[0] > 0:
        targets = grid_queries
    else:
        raise _UsageError("--targets is required unless --known is a grid with NODATA cells")
    config = _build_config(args)
    index = build_index(samples)
    profile = profile_dataset(samples, config)
    outcome = _BATCH_FNS[args.method](
        index, samples, targets, config, profile=profile, on_error="raise"
    )
    with outputs.open_text(args.out) as f:
        write_imputed(f, targets[:, 0], targets[:, 1],
                      outcome.values, outcome.mu, outcome.parameter)


def _cmd_split(args: argparse.Namespace, outputs: _OutputSet) -> None:
    with open(args.input, "r", encoding="utf-8") as f:
        samples = parse_xyz(f, dedupe=args.dedupe)
    split = holdout_split(samples, args.fraction, args.seed)
    with outputs.open_text(args.out_known) as f:
        write_xyz(split.known, f)
    with outputs.open_text(args.out_missing) as f:
        write_xyz_arrays(f, split.missing_xs, split.missing_ys, split.missing_values)


def _cmd_benchmark(args: argparse.Namespace, outputs: _OutputSet) -> None:
    samples, _ = _load_known(args.input, args.dedupe)
    fractions = args.fraction if args.fraction else [0.1]
    config = _build_config(args, fractions[0])
    runs = [
        run_benchmark(samples, fraction, args.seed, args.methods, config)
        for fraction in fractions
    ]
    sys.stdout.write(render_table(runs))
    base, _ = os.path.splitext(args.report)
    with outputs.open_text(args.report) as f:
        f.write(report_to_document(runs))
    with outputs.open_text(base + ".csv") as f:
        f.write(render_rows_csv(runs))
    if not args.no_figures:
        if args.figures is not None:
            os.makedirs(args.figures, exist_ok=True)
            stem = os.path.join(args.figures, os.path.basename(base))
        else:
            stem = base
        render_figures(runs, outputs.stage(stem + "_rmse.png"),
                       outputs.stage(stem + "_timing.png"))


def _cmd_synth(args: argparse.Namespace, outputs: _OutputSet) -> None:
    extent = args.extent if isinstance(args.extent, BoundingBox) else _extent(args.extent)
    samples = synth_surface(args.kind, extent, args.n, args.seed)
    with outputs.open_text(args.out) as f:
        write_xyz(samples, f)


_COMMANDS = {
    "impute": _cmd_impute,
    "split": _cmd_split,
    "benchmark": _cmd_benchmark,
    "synth": _cmd_synth,
}


def _one_line(exc: BaseException) -> str:
    return " ".join(str(exc).split()) or exc.__class__.__name__


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    outputs = _OutputSet()
    try:
        _COMMANDS[args.command](args, outputs)
        outputs.commit()
        return 0
    except _UsageError as exc:
        outputs.discard()
        print(f"error: {_one_line(exc)}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        outputs.discard()
        print(f"error: {_one_line(exc)}", file=sys.stderr)
        return 4
    except (DataError, GeofillError, OSError) as exc:
        outputs.discard()
        print(f"error: {_one_line(exc)}", file=sys.stderr)
        return 3
    except BaseException:
        outputs.discard()
        raise


if __name__ == "__main__":
    sys.exit(main())
