"""Render the four benchmark regret panels from summary.csv artifacts.

Input files must follow the benchmark CSV contract: a ``# schema=1`` first
line, ``# key=value`` comment headers, then columns
``algorithm,T,rho,mean_regret,ci95``.  Panel ``a`` plots mean regret against
the cube root of the rotting rate at fixed horizon; panels ``b``, ``c`` and
``d`` plot mean regret against the horizon for one rotting regime each.
One line per algorithm, error bars are the 95% CI half-widths, legend labels
are the algorithm names exactly as they appear in the CSV.

Output is static PNG plus SVG, and rendering is a pure function of the CSV:
fixed figure geometry, fonts, colors and ordering, with volatile matplotlib
metadata (dates, hash salts) pinned so re-rendering is byte-stable.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

SCHEMA_VERSION = 1
REQUIRED_COLUMNS = ("algorithm", "T", "rho", "mean_regret", "ci95")

PANELS = {
    "a": {"x": "rho", "xlabel": "rho^(1/3)", "title": "regret vs rotting rate"},
    "b": {"x": "T", "xlabel": "T", "title": "regret vs horizon (strong rotting)"},
    "c": {"x": "T", "xlabel": "T", "title": "regret vs horizon (moderate rotting)"},
    "d": {"x": "T", "xlabel": "T", "title": "regret vs horizon (near-stationary)"},
}

# Fixed styling per algorithm so identical data renders identically; other
# algorithm names fall back to a deterministic cycle in sorted order.
STYLES = {
    "ucbtp": ("tab:blue", "o"),
    "aucbtp": ("tab:orange", "s"),
    "ssucb": ("tab:green", "^"),
}
FALLBACK_COLORS = ("tab:red", "tab:purple", "tab:brown", "tab:pink", "tab:gray")


class DataError(Exception):
    """Input file violates the CSV contract."""


@dataclass(frozen=True)
class PanelSpec:
    panel: str
    inputs: tuple[Path, ...]
    output: Path
    xlabel: str | None = None
    ylabel: str = "mean pseudo-regret"

    def __post_init__(self) -> None:
        if self.panel not in PANELS:
            raise DataError(f"unknown panel {self.panel!r}; expected one of a,b,c,d")
        if not self.inputs:
            raise DataError("at least one input CSV is required")


def read_summary(path: Path) -> list[dict[str, str]]:
    """Rows of a schema=1 summary file; raises DataError on contract breaks."""
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DataError(f"{path}: {exc}") from exc
    if not lines or lines[0].strip() != f"# schema={SCHEMA_VERSION}":
        raise DataError(f"{path}: missing '# schema={SCHEMA_VERSION}' header line")
    body = [ln for ln in lines if not ln.startswith("#")]
    table = list(csv.reader(body))
    if not table:
        raise DataError(f"{path}: no header row")
    header = table[0]
    for column in REQUIRED_COLUMNS:
        if column not in header:
            raise DataError(f"{path}: missing required column '{column}'")
    rows = [dict(zip(header, row)) for row in table[1:] if row]
    if not rows:
        raise DataError(f"{path}: no data rows")
    return rows


def _series(rows: list[dict[str, str]], x_field: str, cube_root: bool):
    """Per-algorithm (x, y, err) triples, points sorted by x."""
    groups: dict[str, list[tuple[float, float, float]]] = {}
    for row in rows:
        try:
            x = float(row[x_field])
            y = float(row["mean_regret"])
            err = float(row["ci95"])
        except (KeyError, ValueError) as exc:
            raise DataError(f"bad row {row!r}: {exc}") from exc
        if cube_root:
            x = x ** (1.0 / 3.0)
        groups.setdefault(row["algorithm"], []).append((x, y, err))
    return {alg: sorted(pts) for alg, pts in groups.items()}


def build_figure(spec: PanelSpec):
    """Assemble the matplotlib figure (separated from disk I/O for tests)."""
    panel = PANELS[spec.panel]
    rows: list[dict[str, str]] = []
    for path in spec.inputs:
        rows.extend(read_summary(Path(path)))
    groups = _series(rows, panel["x"], cube_root=spec.panel == "a")

    fig, ax = plt.subplots(figsize=(6.0, 4.5), dpi=150)
    fallback = iter(FALLBACK_COLORS)
    for alg in sorted(groups, key=lambda a: (a not in STYLES, a)):
        pts = groups[alg]
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        errs = [p[2] for p in pts]
        color, marker = STYLES.get(alg, (next(fallback), "D"))
        ax.errorbar(xs, ys, yerr=errs, label=alg, color=color, marker=marker,
                    markersize=4, capsize=3, linewidth=1.5)
    ax.set_xlabel(spec.xlabel or panel["xlabel"])
    ax.set_ylabel(spec.ylabel)
    ax.set_title(panel["title"])
    ax.legend()
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    return fig


def render_panel(spec: PanelSpec) -> list[Path]:
    """Write the panel as PNG and SVG; returns the paths written.

    Nothing is written unless the inputs parse cleanly.
    """
    fig = build_figure(spec)
    out = Path(spec.output)
    stem = out.with_suffix("") if out.suffix in (".png", ".svg") else out
    stem.parent.mkdir(parents=True, exist_ok=True)
    written = []
    plt.rcParams["svg.hashsalt"] = "regret-figures"
    try:
        for suffix in (".png", ".svg"):
            target = stem.with_suffix(suffix)
            fig.savefig(target, metadata=_stable_metadata(suffix))
            written.append(target)
    finally:
        plt.close(fig)
    return written


def _stable_metadata(suffix: str) -> dict:
    # Strip the volatile creation date; pin producer strings.
    if suffix == ".svg":
        return {"Date": None, "Creator": "regret-figures"}
    return {"Software": "regret-figures"}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="regret-figures",
        description="Render a benchmark regret panel from summary.csv files.",
    )
    parser.add_argument("--panel", required=True, choices=sorted(PANELS),
                        help="a: regret vs rho^(1/3); b/c/d: regret vs T")
    parser.add_argument("--in", dest="inputs", action="append", required=True,
                        help="summary.csv path (repeatable)")
    parser.add_argument("--out", required=True,
                        help="output image path; .png and .svg are both written")
    parser.add_argument("--xlabel", default=None)
    args = parser.parse_args(argv)
    try:
        spec = PanelSpec(
            panel=args.panel,
            inputs=tuple(Path(p) for p in args.inputs),
            output=Path(args.out),
            xlabel=args.xlabel,
        )
        written = render_panel(spec)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
