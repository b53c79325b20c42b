"""Render image replicas of the subdom figure tables.

Pure consumers of the CSV contract documented in the main package's
docs/formats.md: nothing is recomputed here, the scripts only draw what the
tables contain.  Rendering is deterministic for a fixed matplotlib version,
so re-running a job reproduces the image bytes.

Usage: render_figure <figure_id> <input_csv> <output_image>
Exit codes mirror the data CLI: 0 success, 2 schema/validation failure,
1 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

# Required columns per figure id; a table must match its schema exactly.
SCHEMAS = {
    1: ("tau", "abs_f", "abs_sinc"),
    2: ("cos_theta", "abs_f"),
    3: ("k", "cos_theta", "abs_f", "in_bin"),
    4: ("omega", "k", "mean_magnitude", "series_mean"),
    5: ("k_out", "cos_theta", "abs_f_kout"),
}

DEFAULT_STYLE = {
    "dpi": 150,
    "figsize": (6.0, 4.0),
    # constant metadata keeps PNG bytes identical across runs
    "metadata": {"Software": "subdom-figures"},
}


class SchemaError(ValueError):
    """The input table does not match the figure's documented schema."""


@dataclass(frozen=True)
class FigureJob:
    figure_id: int
    input_csv: str
    output_image: str
    style: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RenderResult:
    output_image: str
    rows: int
    peak_label: str | None = None


def load_table(job: FigureJob) -> pd.DataFrame:
    if job.figure_id not in SCHEMAS:
        raise SchemaError(f"unknown figure id {job.figure_id}, expected 1..5")
    try:
        frame = pd.read_csv(job.input_csv, comment="#")
    except pd.errors.EmptyDataError as err:
        raise SchemaError(f"{job.input_csv}: empty table") from err
    expected = SCHEMAS[job.figure_id]
    got = tuple(frame.columns)
    if set(got) != set(expected):
        missing = sorted(set(expected) - set(got))
        surplus = sorted(set(got) - set(expected))
        raise SchemaError(
            f"{job.input_csv}: columns {got} do not match the fig{job.figure_id} "
            f"schema {expected} (missing {missing}, unexpected {surplus})")
    if frame.empty:
        raise SchemaError(f"{job.input_csv}: no data rows")
    return frame


def _new_axes(style):
    fig, ax = plt.subplots(figsize=style["figsize"])
    ax.grid(True, alpha=0.3, linestyle="--")
    return fig, ax


def _draw_fig1(ax, frame):
    ax.plot(frame["tau"], frame["abs_f"], color="tab:blue", label="|f|")
    ax.plot(frame["tau"], frame["abs_sinc"], color="tab:green",
            label="|sinc limit|")
    peak_row = frame.loc[frame["abs_f"].idxmax()]
    label = f"{peak_row['abs_f']:.1f}"
    ax.annotate(label, xy=(peak_row["tau"], peak_row["abs_f"]),
                xytext=(peak_row["tau"], peak_row["abs_f"] + 0.04),
                ha="center")
    ax.set_xlabel("tau")
    ax.set_ylabel("magnitude")
    ax.legend()
    return label


def _draw_fig2(ax, frame):
    ax.plot(frame["cos_theta"], frame["abs_f"], color="tab:blue")
    ax.set_xlabel("cos(theta)")
    ax.set_ylabel("|f(cos(theta) - cos(theta*))|")


def _draw_fig3(ax, frame):
    colors = ["tab:red", "tab:green", "tab:blue", "tab:orange", "tab:purple"]
    for index, (k, group) in enumerate(frame.groupby("k", sort=True)):
        color = colors[index % len(colors)]
        ax.plot(group["cos_theta"], group["abs_f"], color=color, label=f"b({int(k)}/l)")
        inside = group.loc[group["in_bin"] == 1, "cos_theta"]
        if not inside.empty:
            ax.axvspan(inside.min(), inside.max(), color=color, alpha=0.12,
                       hatch="//", linewidth=0)
    ax.set_xlabel("cos(theta)")
    ax.set_ylabel("|f|")
    ax.legend()


def _draw_fig4(ax, frame):
    series = sorted(frame["omega"].unique())
    colors = ["tab:red", "tab:blue", "tab:orange", "tab:purple"]
    for index, omega in enumerate(series):
        group = frame[frame["omega"] == omega].sort_values("k")
        ax.plot(group["k"], group["mean_magnitude"],
                color=colors[index % len(colors)], marker="o",
                label=f"omega = {omega:.3f}")
    collapsed = frame[frame["omega"] == series[-1]]
    ax.axhline(collapsed["series_mean"].iloc[0], color="grey",
               linestyle="--", label="average a")
    ax.set_xlabel("k")
    ax.set_ylabel("mean magnitude")
    ax.legend()


def _draw_fig5(ax, frame):
    colors = ["tab:blue", "tab:red", "tab:green", "tab:orange"]
    for index, (k_out, group) in enumerate(frame.groupby("k_out", sort=True)):
        ax.plot(group["cos_theta"], group["abs_f_kout"],
                color=colors[index % len(colors)], label=f"K_out = {int(k_out)}")
    ax.set_xlabel("cos(theta)")
    ax.set_ylabel("|f_Kout|")
    ax.legend()


def render(job: FigureJob) -> RenderResult:
    """Validate the table and write the image.

    Raises SchemaError before touching the output path when the input does
    not match the figure's schema, and OSError on write failures.
    """
    frame = load_table(job)
    style = {**DEFAULT_STYLE, **job.style}
    fig, ax = _new_axes(style)
    peak_label = None
    try:
        if job.figure_id == 1:
            peak_label = _draw_fig1(ax, frame)
        elif job.figure_id == 2:
            _draw_fig2(ax, frame)
        elif job.figure_id == 3:
            _draw_fig3(ax, frame)
        elif job.figure_id == 4:
            _draw_fig4(ax, frame)
        else:
            _draw_fig5(ax, frame)
        if "title" in style:
            ax.set_title(style["title"])
        fig.savefig(job.output_image, dpi=style["dpi"],
                    metadata=style["metadata"])
    finally:
        plt.close(fig)
    return RenderResult(job.output_image, len(frame), peak_label)


def render_cli(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_figure",
        description="Render a subdom figure table to an image file")
    parser.add_argument("figure_id", type=int, choices=sorted(SCHEMAS))
    parser.add_argument("input_csv")
    parser.add_argument("output_image")
    parser.add_argument("--title", default=None)
    parser.add_argument("--dpi", type=int, default=None)
    args = parser.parse_args(argv)

    style = {}
    if args.title is not None:
        style["title"] = args.title
    if args.dpi is not None:
        style["dpi"] = args.dpi
    job = FigureJob(args.figure_id, args.input_csv, args.output_image, style)
    try:
        result = render(job)
    except SchemaError as err:
        print(f"schema error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return 1
    print(f"fig{job.figure_id}: rendered {result.rows} rows to {result.output_image}")
    return 0


def main() -> None:
    sys.exit(render_cli())
