"""CSV ingestion and panel-grid bookkeeping shared by the figure scripts."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field


class ColumnError(ValueError):
    """A referenced CSV column does not exist; the message names it."""


class LayoutError(ValueError):
    """Panel count does not match the requested grid layout."""


@dataclass
class PanelData:
    """One parsed CSV: metadata comment lines plus column-major data."""

    path: str
    meta: list[str]
    columns: dict[str, list[str]]

    def require(self, *names: str) -> None:
        for name in names:
            if name not in self.columns:
                raise ColumnError(
                    f"{self.path}: missing column {name!r} "
                    f"(available: {sorted(self.columns)})"
                )

    def floats(self, name: str) -> list[float]:
        self.require(name)
        return [float(v) if v else float("nan") for v in self.columns[name]]

    def strings(self, name: str) -> list[str]:
        self.require(name)
        return self.columns[name]


@dataclass
class PanelSpec:
    """Inputs plus grid layout and styling knobs for one figure."""

    inputs: list[str]
    rows: int
    cols: int
    column: str = "v_b_squared"
    log_scale: bool = False
    titles: list[str] = field(default_factory=list)

    def validate_layout(self) -> None:
        if len(self.inputs) != self.rows * self.cols:
            raise LayoutError(
                f"{len(self.inputs)} input files do not fill a "
                f"{self.rows}x{self.cols} grid"
            )


def parse_layout(text: str) -> tuple[int, int]:
    try:
        rows, cols = text.lower().split("x")
        rows, cols = int(rows), int(cols)
    except ValueError as exc:
        raise LayoutError(f"layout must look like '2x3', got {text!r}") from exc
    if rows < 1 or cols < 1:
        raise LayoutError(f"layout must be positive, got {text!r}")
    return rows, cols


def load_panel(path: str) -> PanelData:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    meta = [line for line in lines if line.startswith("#")]
    header: list[str] | None = None
    columns: dict[str, list[str]] = {}
    for row in csv.reader(line for line in lines if not line.startswith("#")):
        if header is None:
            header = row
            columns = {name: [] for name in header}
        else:
            for name, value in zip(header, row):
                columns[name].append(value)
    if header is None:
        raise ColumnError(f"{path}: no header row found")
    return PanelData(path=path, meta=meta, columns=columns)


def panel_title(panel: PanelData) -> str:
    """Short panel label built from the config echo, if present."""
    import json

    for line in panel.meta:
        if line.startswith("# config:"):
            try:
                cfg = json.loads(line.split(":", 1)[1])
            except json.JSONDecodeError:
                break
            gn = cfg.get("gn")
            m_a = cfg.get("m_a")
            if gn is not None and m_a is not None:
                return f"GN={gn:g}, M={m_a:g}"
    return ""
