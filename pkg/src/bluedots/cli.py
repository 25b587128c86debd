"""Command-line front end: CSV in, layout JSON + SVG + analysis reports out.

Every run is reproducible from the written layout file alone: it records the
seed, iteration count, domain and metric. Malformed cells are hard errors;
silently dropping or imputing rows would break the promise that every data
point is shown.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .core import (
    DataSet,
    DotLayout,
    MetricKind,
    MetricSpec,
    PlotDomain,
    normalize,
)
from .density import automatic_height, estimate_density, height_profile
from .solver import (
    SolverConfig,
    jitter_init,
    relax,
    relax_multiclass,
    relax_unconstrained,
)
from .analysis import (
    high_band_mean,
    low_band_mean,
    mean_power,
    overlap_metric,
    power_spectrum,
    spectrum_to_csv,
    spectrum_to_pgm,
)
from .render import RenderStyle, StrokeStyle, render_svg

LAYOUT_FILE_VERSION = 1


class CliError(Exception):
    """User-facing error; printed as a diagnostic with a nonzero exit."""


def load_csv(path, column: str, class_column: str | None = None) -> DataSet:
    """Read one numeric column (and an optional class column) from a CSV.

    Rows are numbered as in the file, the header being row 1. Blank or
    non-numeric cells abort with the offending location.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    values = []
    labels = []
    with fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        for name in [column] + ([class_column] if class_column else []):
            if name not in fields:
                raise CliError(f"{path}: column {name!r} not found (have {fields})")
        for row in reader:
            cell = row[column]
            try:
                value = float(cell) if cell is not None and cell.strip() != "" else None
            except ValueError:
                value = None
            if value is None or not np.isfinite(value):
                raise CliError(
                    f"{path}: row {reader.line_num}, column {column!r}: not a number: {cell!r}"
                )
            values.append(value)
            if class_column:
                labels.append(row[class_column])
    if not values:
        raise CliError(f"{path}: no data rows")
    return DataSet(
        values=np.array(values),
        labels=tuple(labels) if class_column else None,
        name=Path(path).stem,
    )


def _resolve_setup(data: DataSet, radius: float, height_arg: str):
    """Normalize the data and fix the plot domain (auto height if asked)."""
    xs, (x_min, x_max) = normalize(data)
    dens = estimate_density(xs)
    if height_arg == "auto":
        height = automatic_height(dens.d_max, len(data), radius)
    else:
        try:
            height = float(height_arg)
        except ValueError:
            raise CliError(f"--height must be 'auto' or a number, got {height_arg!r}")
        if height <= 0:
            raise CliError("--height must be positive")
    domain = PlotDomain(x_min=x_min, x_max=x_max, height=height, radius=radius)
    return xs, domain, dens


def _make_layout(data: DataSet, xs, domain, dens, args) -> DotLayout:
    metric = (
        MetricSpec(kind=MetricKind.DENSITY_WARPED, density=dens)
        if args.centrality
        else MetricSpec()
    )
    profile = height_profile(dens, len(data), domain.radius) if args.centrality else None
    if args.treatment == "jitter":
        layout = jitter_init(xs, domain, args.seed, profile)
        return DotLayout(
            x=layout.x, y=layout.y, domain=domain, labels=data.labels, seed=args.seed
        )
    config = SolverConfig(
        n_sites=args.sites,
        max_iterations=args.iterations,
        seed=args.seed,
        metric=metric,
    )
    if data.labels is not None and data.n_classes >= 2:
        return relax_multiclass(data, domain, config)
    return relax(data, domain, config)


def save_layout(layout: DotLayout, data: DataSet, metric_kind: MetricKind, path) -> None:
    doc = {
        "version": LAYOUT_FILE_VERSION,
        "dataset_name": data.name or "",
        "seed": layout.seed,
        "iterations_run": layout.iterations_run,
        "domain": {
            "x_min": layout.domain.x_min,
            "x_max": layout.domain.x_max,
            "height": layout.domain.height,
            "radius": layout.domain.radius,
        },
        "metric": {"kind": metric_kind.value},
        "dots": [
            {
                "x_raw": float(data.values[i]),
                "x_norm": float(layout.x[i]),
                "y": float(layout.y[i]),
                **({"class": layout.labels[i]} if layout.labels is not None else {}),
            }
            for i in range(len(layout))
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_layout(path) -> tuple[DotLayout, dict]:
    """Rebuild a DotLayout from a layout file; also returns the raw document."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    domain = PlotDomain(**doc["domain"])
    dots = doc["dots"]
    labels = tuple(d["class"] for d in dots) if dots and "class" in dots[0] else None
    layout = DotLayout(
        x=np.array([d["x_norm"] for d in dots]),
        y=np.array([d["y"] for d in dots]),
        domain=domain,
        labels=labels,
        seed=doc["seed"],
        iterations_run=doc["iterations_run"],
    )
    return layout, doc


def cmd_plot(args) -> int:
    data = load_csv(args.input, args.column, args.class_column)
    xs, domain, dens = _resolve_setup(data, args.radius, args.height)
    layout = _make_layout(data, xs, domain, dens, args)
    metric_kind = MetricKind.DENSITY_WARPED if args.centrality else MetricKind.UNIFORM

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_layout(layout, data, metric_kind, f"{out}.json")
    style = RenderStyle(
        dot_radius_px=args.radius * 800,
        canvas_width_px=800,
        envelope=StrokeStyle() if args.centrality else None,
    )
    profile = height_profile(dens, len(data), domain.radius) if args.centrality else None
    svg = render_svg(layout, style, profile)
    with open(f"{out}.svg", "w", encoding="utf-8") as fh:
        fh.write(svg)
    print(f"wrote {out}.json and {out}.svg ({layout.iterations_run} iterations)")
    return 0


def cmd_analyze_spectrum(args) -> int:
    data = load_csv(args.input, args.column, None)
    xs, domain, dens = _resolve_setup(data, args.radius, args.height)
    layouts = []
    for i in range(args.realizations):
        seed = args.seed + i
        if args.treatment == "jitter":
            layouts.append(jitter_init(xs, domain, seed))
        else:
            config = SolverConfig(
                n_sites=args.sites, max_iterations=args.iterations, seed=seed
            )
            if args.treatment == "lloyd2d":
                layouts.append(relax_unconstrained(len(data), domain, config))
            else:
                layouts.append(relax(data, domain, config))
    grid = power_spectrum(layouts, args.kmax)

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(f"{out}_spectrum.csv", "w", encoding="utf-8") as fh:
        fh.write(spectrum_to_csv(grid))
    with open(f"{out}_spectrum.pgm", "w", encoding="utf-8") as fh:
        fh.write(spectrum_to_pgm(grid))
    summary = {
        "dataset": data.name or "",
        "treatment": args.treatment,
        "n": len(data),
        "realizations": args.realizations,
        "kmax": args.kmax,
        "height": domain.height,
        "mean_nondc": mean_power(grid),
        "low_band": low_band_mean(grid),
        "high_band": high_band_mean(grid),
    }
    with open(f"{out}_summary.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(summary))
        writer.writeheader()
        writer.writerow(summary)
    print(
        f"{args.treatment}: mean_nondc={summary['mean_nondc']:.4f} "
        f"low_band={summary['low_band']:.4f} high_band={summary['high_band']:.4f}"
    )
    return 0


def cmd_analyze_overlap(args) -> int:
    data = load_csv(args.input, args.column, args.class_column)
    try:
        counts = [int(c) for c in args.counts.split(",") if c.strip()]
    except ValueError:
        raise CliError(f"--counts must be a comma-separated list of integers: {args.counts!r}")
    if not counts or any(c <= 0 for c in counts):
        raise CliError("--counts entries must be positive")
    if max(counts) > len(data):
        raise CliError(f"count {max(counts)} exceeds dataset size {len(data)}")

    rows = []
    for treatment in ("blue", "jitter"):
        for count in counts:
            subset = DataSet(
                values=data.values[:count],
                labels=data.labels[:count] if data.labels is not None else None,
                name=data.name,
            )
            xs, domain, dens = _resolve_setup(subset, args.radius, args.height)
            for seed in range(args.seeds):
                if treatment == "jitter":
                    layout = jitter_init(xs, domain, seed)
                else:
                    config = SolverConfig(
                        n_sites=args.sites, max_iterations=args.iterations, seed=seed
                    )
                    layout = relax(subset, domain, config)
                rows.append(
                    {
                        "dataset": data.name or "",
                        "treatment": treatment,
                        "seed": seed,
                        "n": count,
                        "value": overlap_metric(layout),
                    }
                )

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(f"{out}_overlap.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=["dataset", "treatment", "seed", "n", "value"])
        writer.writeheader()
        writer.writerows(rows)

    with open(f"{out}_summary.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=["dataset", "treatment", "n", "median", "iqr"])
        writer.writeheader()
        for treatment in ("blue", "jitter"):
            for count in counts:
                vals = [
                    r["value"] for r in rows if r["treatment"] == treatment and r["n"] == count
                ]
                q75, q25 = np.percentile(vals, [75, 25])
                writer.writerow(
                    {
                        "dataset": data.name or "",
                        "treatment": treatment,
                        "n": count,
                        "median": float(np.median(vals)),
                        "iqr": float(q75 - q25),
                    }
                )
    print(f"wrote {out}_overlap.csv and {out}_summary.csv ({len(rows)} rows)")
    return 0


def _add_common_input(p: argparse.ArgumentParser, with_class: bool = True) -> None:
    p.add_argument("--input", required=True, help="input CSV path")
    p.add_argument("--column", required=True, help="name of the value column")
    if with_class:
        p.add_argument("--class-column", default=None, help="optional class column")
    p.add_argument("--radius", type=float, default=0.01, help="dot radius, normalized units")
    p.add_argument("--height", default="auto", help="'auto' or a normalized height")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iterations", type=int, default=40)
    p.add_argument("--sites", type=int, default=8192)
    p.add_argument("--out", required=True, help="output path prefix")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bluedots",
        description="Dot plots with blue-noise layout instead of random jitter",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    plot = sub.add_parser("plot", help="lay out a dataset and write layout JSON + SVG")
    _add_common_input(plot)
    plot.add_argument("--treatment", choices=["blue", "jitter"], default="blue")
    plot.add_argument(
        "--centrality",
        action="store_true",
        help="density-warped metric with a centered, density-shaped band",
    )
    plot.set_defaults(func=cmd_plot)

    analyze = sub.add_parser("analyze", help="spectral and overlap quality reports")
    asub = analyze.add_subparsers(dest="analysis", required=True)

    spectrum = asub.add_parser("spectrum", help="averaged power spectrum over realizations")
    _add_common_input(spectrum, with_class=False)
    spectrum.add_argument("--realizations", type=int, default=100)
    spectrum.add_argument("--kmax", type=int, default=16)
    spectrum.add_argument(
        "--treatment", choices=["blue", "jitter", "lloyd2d"], default="blue"
    )
    spectrum.set_defaults(func=cmd_analyze_spectrum)

    overlap = asub.add_parser("overlap", help="overlap benchmark across seeds and counts")
    _add_common_input(overlap)
    overlap.add_argument("--seeds", type=int, default=20)
    overlap.add_argument("--counts", default="64,128,256")
    overlap.set_defaults(func=cmd_analyze_overlap)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
