"""Figure specs and the renderer.

A figure spec is a JSON object naming one or more harness CSVs, the figure
kind, axis cosmetics and an output basename.  Every referenced column is
validated against the CSV header before any file is written, so a bad input
fails without leaving artifacts behind.
"""

import csv
import json
import os
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

KINDS = (
    "success_vs_sweep",
    "error_vs_sweep",
    "resolution_pair",
    "coherence_profile",
    "coefficient_decay",
)

# Columns each kind draws from (beyond the grouping/x columns).
_REQUIRED = {
    "success_vs_sweep": ["sweep_value", "algorithm", "success_rate"],
    "error_vs_sweep": ["sweep_value", "algorithm"],
    "resolution_pair": [
        "sweep_value",
        "algorithm",
        "mean_bottleneck_rl",
        "mean_rel_residual",
    ],
    "coherence_profile": ["separation_rl", "mean_coherence"],
    "coefficient_decay": ["rank", "magnitude"],
}


class RenderError(ValueError):
    """Unusable spec or CSV; nothing has been written when this is raised."""


@dataclass
class FigureSpec:
    kind: str
    csv: list
    output: str
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    logx: bool = False
    logy: bool = False
    y_column: str = "mean_rel_signal_err"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise RenderError(f"unknown figure kind {self.kind!r}")
        if isinstance(self.csv, str):
            self.csv = [self.csv]
        if not self.csv:
            raise RenderError("spec names no csv input")
        if not self.output:
            raise RenderError("spec names no output basename")


def load_spec(path):
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise RenderError(f"spec file not found: {path}")
    except json.JSONDecodeError as exc:
        raise RenderError(f"spec file is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise RenderError("spec file must hold a JSON object")
    known = {f.name for f in FigureSpec.__dataclass_fields__.values()}
    unknown = sorted(set(raw) - {f for f in known})
    if unknown:
        raise RenderError(f"unknown spec field(s): {unknown}")
    try:
        return FigureSpec(**raw)
    except TypeError as exc:
        raise RenderError(str(exc))


def _read_csv(path, required):
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames
            rows = list(reader)
    except FileNotFoundError:
        raise RenderError(f"csv not found: {path}")
    except OSError as exc:
        raise RenderError(f"cannot read {path}: {exc}")
    if not header:
        raise RenderError(f"{path}: empty csv (no header)")
    missing = [c for c in required if c not in header]
    if missing:
        raise RenderError(f"{path}: missing column(s) {missing}")
    if not rows:
        raise RenderError(f"{path}: csv has no data rows")
    for i, row in enumerate(rows, start=2):
        if any(v is None for v in row.values()) or row.get(None):
            raise RenderError(f"{path}: line {i} is truncated")
        for column in required:
            if row.get(column) == "":
                raise RenderError(f"{path}: line {i} is truncated ({column})")
    return rows


def _floats(rows, column, path):
    out = []
    for row in rows:
        try:
            out.append(float(row[column]))
        except ValueError:
            raise RenderError(f"{path}: column {column} holds non-numeric data")
    return out


def _series_by_algorithm(rows, value_column, path):
    series = {}
    for row in rows:
        algorithm = row["algorithm"]
        try:
            x = float(row["sweep_value"])
            y = float(row[value_column])
        except ValueError:
            raise RenderError(
                f"{path}: column {value_column} holds non-numeric data"
            )
        series.setdefault(algorithm, []).append((x, y))
    return {alg: sorted(pts) for alg, pts in series.items()}


def _apply_axes(ax, spec):
    if spec.logx:
        ax.set_xscale("log")
    if spec.logy:
        ax.set_yscale("log")


def render(spec, data_dir=None, out_dir=None):
    """Render one spec to PNG and SVG; returns the written paths.

    ``data_dir`` overrides where csv paths are resolved; ``out_dir`` where
    images land.  All validation happens before any file is opened for
    writing.
    """
    data_dir = data_dir or "."
    out_dir = out_dir or "."
    paths = [os.path.join(data_dir, c) for c in spec.csv]
    required = _REQUIRED[spec.kind]
    if spec.kind == "error_vs_sweep":
        required = required + [spec.y_column]
    tables = [_read_csv(p, required) for p in paths]

    plt.rcParams["svg.hashsalt"] = "figs"
    if spec.kind == "resolution_pair":
        fig, axes = plt.subplots(2, 1, figsize=(6.4, 7.2), sharex=True)
    else:
        fig, ax = plt.subplots(figsize=(6.4, 4.4))

    if spec.kind in ("success_vs_sweep", "error_vs_sweep"):
        column = "success_rate" if spec.kind == "success_vs_sweep" else spec.y_column
        for path, rows in zip(paths, tables):
            for alg, pts in _series_by_algorithm(rows, column, path).items():
                ax.plot([p[0] for p in pts], [p[1] for p in pts],
                        marker="o", label=alg)
        ax.set_ylabel(spec.ylabel or column)
        ax.legend()
        _apply_axes(ax, spec)
        ax.set_xlabel(spec.xlabel or "sweep value")
    elif spec.kind == "resolution_pair":
        for path, rows in zip(paths, tables):
            top = _series_by_algorithm(rows, "mean_bottleneck_rl", path)
            bottom = _series_by_algorithm(rows, "mean_rel_residual", path)
            for alg, pts in top.items():
                axes[0].plot([p[0] for p in pts], [p[1] for p in pts],
                             marker="o", label=alg)
            for alg, pts in bottom.items():
                axes[1].plot([p[0] for p in pts], [p[1] for p in pts],
                             marker="o", label=alg)
        axes[0].set_ylabel(spec.ylabel or "mean Bottleneck distance (RL)")
        axes[1].set_ylabel("mean relative residual")
        axes[1].set_xlabel(spec.xlabel or "object separation (RL)")
        axes[0].legend()
        for ax_ in axes:
            _apply_axes(ax_, spec)
    elif spec.kind == "coherence_profile":
        for path, rows in zip(paths, tables):
            ax.plot(
                _floats(rows, "separation_rl", path),
                _floats(rows, "mean_coherence", path),
            )
        ax.set_xlabel(spec.xlabel or "column separation (RL)")
        ax.set_ylabel(spec.ylabel or "pairwise coherence")
        _apply_axes(ax, spec)
    else:  # coefficient_decay
        for path, rows in zip(paths, tables):
            ax.plot(_floats(rows, "rank", path), _floats(rows, "magnitude", path))
        ax.set_xlabel(spec.xlabel or "rank")
        ax.set_ylabel(spec.ylabel or "coefficient magnitude")
        _apply_axes(ax, spec)

    if spec.title:
        fig.suptitle(spec.title)
    fig.tight_layout()
    os.makedirs(out_dir, exist_ok=True)
    base = os.path.join(out_dir, spec.output)
    png_path, svg_path = f"{base}.png", f"{base}.svg"
    fig.savefig(png_path)
    fig.savefig(svg_path, metadata={"Date": None})
    plt.close(fig)
    return [png_path, svg_path]
