"""Render Fisher-information-vs-time curves, one panel per scan CSV.

Each input comes from `gaussthermo qfi-scan`; the three initial-state
families are drawn as separate curves with a shared legend. --column
switches between the occupation (q_m) and temperature (q_t) information.
"""

from __future__ import annotations

import argparse
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

_FAMILY_COLORS = {
    "thermal": "#c23b22",
    "local-squeeze": "#2f6fb3",
    "twin-beam": "#3d8c40",
}

_AXIS_LABEL = {"q_m": r"$Q_M(t)$", "q_t": r"$Q_T(t)$"}


def _save(figure, out: str) -> None:
    if out.endswith(".svg"):
        figure.savefig(out, metadata={"Date": None})
    elif out.endswith(".pdf"):
        figure.savefig(out, metadata={"CreationDate": None})
    else:
        figure.savefig(out, dpi=200)


def render_qfi_figure(spec: PanelSpec, out: str) -> None:
    spec.validate_layout()
    figure, axes = plt.subplots(
        spec.rows, spec.cols,
        figsize=(3.2 * spec.cols, 2.6 * spec.rows),
        squeeze=False, constrained_layout=True,
    )
    for index, path in enumerate(spec.inputs):
        axis = axes[index // spec.cols][index % spec.cols]
        panel = load_panel(path)
        panel.require("family", "t", spec.column)
        families = panel.strings("family")
        times = panel.floats("t")
        values = panel.floats(spec.column)
        for family in dict.fromkeys(families):  # preserve file order
            xs = [times[i] for i in range(len(times)) if families[i] == family]
            ys = [values[i] for i in range(len(times)) if families[i] == family]
            axis.plot(xs, ys, label=family, linewidth=1.3,
                      color=_FAMILY_COLORS.get(family))
        axis.set_title(spec.titles[index] if index < len(spec.titles)
                       else panel_title(panel), fontsize=9)
        if index // spec.cols == spec.rows - 1:
            axis.set_xlabel(r"$t$")
        if index % spec.cols == 0:
            axis.set_ylabel(_AXIS_LABEL.get(spec.column, spec.column))
    axes[0][0].legend(fontsize=7, loc="lower right")
    _save(figure, out)
    plt.close(figure)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="render-qfi-figure",
        description="Multi-panel Fisher-information figure from qfi-scan CSVs.",
    )
    parser.add_argument("--input", action="append", required=True, metavar="CSV",
                        help="panel CSV, repeat once per panel (row-major order)")
    parser.add_argument("--out", required=True, metavar="PATH",
                        help="output image (.svg default, .pdf, or raster)")
    parser.add_argument("--column", default="q_m", choices=("q_m", "q_t"),
                        help="information column to plot (default q_m)")
    parser.add_argument("--layout", default=None, metavar="RxC",
                        help="panel grid, e.g. 2x3 (default 1xN)")
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
            titles=args.title,
        )
        render_qfi_figure(spec, args.out)
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
