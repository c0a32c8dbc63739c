"""Render the initial-speed-vs-entanglement scatter with its lower bound.

One panel per input CSV (produced by `gaussthermo speed-scan`): samples
as a scatter coloured by separability classification, the extremal-state
lower-bound curve overlaid, and a vertical marker at the entanglement
boundary nu_tilde_minus = 1.
"""

from __future__ import annotations

import argparse
import math
import sys

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "gaussthermo-figures"

import matplotlib.pyplot as plt

from .panels import (
    ColumnError,
    LayoutError,
    PanelSpec,
    load_panel,
    panel_title,
    parse_layout,
)

_STYLE = {
    "entangled": dict(color="#c23b22", s=3.0, alpha=0.45),
    "separable": dict(color="#2f6fb3", s=3.0, alpha=0.45),
}


def _save(figure, out: str) -> None:
    if out.endswith(".svg"):
        figure.savefig(out, metadata={"Date": None})
    elif out.endswith(".pdf"):
        figure.savefig(out, metadata={"CreationDate": None})
    else:
        figure.savefig(out, dpi=200)


def render_speed_figure(spec: PanelSpec, out: str) -> None:
    spec.validate_layout()
    figure, axes = plt.subplots(
        spec.rows, spec.cols,
        figsize=(3.2 * spec.cols, 2.6 * spec.rows),
        squeeze=False, constrained_layout=True,
    )
    for index, path in enumerate(spec.inputs):
        axis = axes[index // spec.cols][index % spec.cols]
        panel = load_panel(path)
        panel.require("record", "nu_tilde_minus", "classification", "excluded",
                      spec.column)
        records = panel.strings("record")
        nu = panel.floats("nu_tilde_minus")
        value = panel.floats(spec.column)
        labels = panel.strings("classification")
        excluded = panel.strings("excluded")
        for kind, style in _STYLE.items():
            xs = [nu[i] for i in range(len(records))
                  if records[i] == "sample" and labels[i] == kind
                  and excluded[i] == "false"]
            ys = [value[i] for i in range(len(records))
                  if records[i] == "sample" and labels[i] == kind
                  and excluded[i] == "false"]
            axis.scatter(xs, ys, label=kind, linewidths=0, **style)
        bound = sorted(
            (nu[i], value[i])
            for i in range(len(records))
            if records[i] == "bound" and not math.isnan(value[i])
        )
        if bound:
            axis.plot([b[0] for b in bound], [b[1] for b in bound],
                      color="black", linewidth=1.4, label="lower bound")
        axis.axvline(1.0, color="gray", linewidth=0.8, linestyle="--")
        if spec.log_scale:
            axis.set_yscale("log")
        axis.set_title(spec.titles[index] if index < len(spec.titles)
                       else panel_title(panel), fontsize=9)
        if index // spec.cols == spec.rows - 1:
            axis.set_xlabel(r"$\tilde{\nu}_-$")
        if index % spec.cols == 0:
            axis.set_ylabel(r"$v_B^2(\epsilon)$")
    axes[0][0].legend(fontsize=7, loc="upper right")
    _save(figure, out)
    plt.close(figure)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render-speed-figure",
        description="Multi-panel speed-vs-entanglement figure from speed-scan CSVs.",
    )
    parser.add_argument("--input", action="append", required=True, metavar="CSV",
                        help="panel CSV, repeat once per panel (row-major order)")
    parser.add_argument("--out", required=True, metavar="PATH",
                        help="output image (.svg default, .pdf, or raster)")
    parser.add_argument("--column", default="v_b_squared",
                        help="value column to plot (default v_b_squared)")
    parser.add_argument("--layout", default=None, metavar="RxC",
                        help="panel grid, e.g. 2x3 (default 1xN)")
    parser.add_argument("--log-speed", action="store_true",
                        help="logarithmic speed axis")
    parser.add_argument("--title", action="append", default=[],
                        help="panel title, repeatable")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rows, cols = (
            parse_layout(args.layout) if args.layout else (1, len(args.input))
        )
        spec = PanelSpec(
            inputs=args.input,
            rows=rows,
            cols=cols,
            column=args.column,
            log_scale=args.log_speed,
            titles=args.title,
        )
        render_speed_figure(spec, args.out)
    except (ColumnError, LayoutError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
