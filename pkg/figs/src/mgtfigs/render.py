"""Render the three scan figures: thresholds, their ratio, and decay rates.

Strictly presentational: every number shown (including the argmax markers
on the decay figure) is recomputed from the CSV data, never hard-coded.
Single-threaded script, invoked as `render --kind decay --in decay.csv
--out decay.png`.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

EXIT_OK = 0
EXIT_BAD_ARGS = 1

# Expected column schema per figure kind; thresholds and ratio both read
# the threshold-scan CSV, decay reads the decay-scan CSV.
THRESHOLD_COLUMNS = ("kappa", "tau_theoretical", "tau_theoretical_1d", "tau_star", "ratio")
DECAY_COLUMNS = ("eta", "omega_star", "omega_b", "cert_valid")
SCHEMAS = {
    "thresholds": THRESHOLD_COLUMNS,
    "ratio": THRESHOLD_COLUMNS,
    "decay": DECAY_COLUMNS,
}


class SchemaError(ValueError):
    """CSV columns do not match the producing command's documented schema."""


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: input CSV, figure kind, output image, optional ranges."""

    input_path: str
    kind: str
    output_path: str
    xlim: tuple | None = None
    ylim: tuple | None = None

    def __post_init__(self):
        if self.kind not in SCHEMAS:
            raise ValueError(f"unknown figure kind: {self.kind!r}")


def read_scan(path: str, kind: str) -> dict:
    """Load a scan CSV into column arrays, validating the schema.

    Comment lines start with '#'.  A mismatched header raises SchemaError
    carrying the column diff (missing / unexpected names).
    """
    expected = SCHEMAS[kind]
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and not row[0].startswith("#")]
    if not rows:
        raise SchemaError(f"{path}: no header row found")
    header = tuple(rows[0])
    if header != expected:
        missing = [c for c in expected if c not in header]
        unexpected = [c for c in header if c not in expected]
        raise SchemaError(
            f"{path}: column schema mismatch for kind {kind!r}: "
            f"missing {missing}, unexpected {unexpected}, "
            f"expected order {list(expected)}"
        )
    data = np.array([[float(v) for v in row] for row in rows[1:]])
    if data.size == 0:
        raise SchemaError(f"{path}: no data rows")
    return {name: data[:, i] for i, name in enumerate(expected)}


def _parabolic_argmax(x: np.ndarray, y: np.ndarray) -> float:
    """Argmax refined by the parabola through the three best grid points.

    Grid-resolution independent; falls back to the best point at the grid
    edge or when the three values are collinear.
    """
    finite = np.isfinite(y)
    xs, ys = x[finite], y[finite]
    i = int(np.argmax(ys))
    if i == 0 or i == len(ys) - 1:
        return float(xs[i])
    x0, x1, x2 = xs[i - 1], xs[i], xs[i + 1]
    y0, y1, y2 = ys[i - 1], ys[i], ys[i + 1]
    denom = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0)
    if denom == 0:
        return float(x1)
    num = (x1 - x0) ** 2 * (y1 - y2) - (x1 - x2) ** 2 * (y1 - y0)
    return float(x1 - 0.5 * num / denom)


def decay_markers(columns: dict) -> tuple:
    """(eta_b, eta_star): couplings maximizing the certified and true rates."""
    eta = columns["eta"]
    eta_b = _parabolic_argmax(eta, columns["omega_b"])
    eta_star = _parabolic_argmax(eta, columns["omega_star"])
    return eta_b, eta_star


def _apply_ranges(ax, spec: FigureSpec):
    if spec.xlim is not None:
        ax.set_xlim(*spec.xlim)
    if spec.ylim is not None:
        ax.set_ylim(*spec.ylim)


def _render_thresholds(columns: dict, spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.loglog(columns["kappa"], columns["tau_theoretical"], label=r"$\tau(\kappa)$")
    ax.loglog(columns["kappa"], columns["tau_star"], "--", label=r"$\tau_\star(\kappa)$")
    ax.set_xlabel(r"$\kappa$")
    ax.set_ylabel("threshold")
    ax.legend()
    ax.set_title("Sufficient vs exact stability threshold")
    _apply_ranges(ax, spec)
    return fig


def _render_ratio(columns: dict, spec: FigureSpec):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.semilogx(columns["kappa"], columns["ratio"])
    ax.set_xlabel(r"$\kappa$")
    ax.set_ylabel(r"$\tau(\kappa)/\tau_\star(\kappa)$")
    ax.set_title("Threshold overestimation factor")
    _apply_ranges(ax, spec)
    return fig


def _render_decay(columns: dict, spec: FigureSpec):
    eta = columns["eta"]
    eta_b, eta_star = decay_markers(columns)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    ax.plot(eta, columns["omega_star"], label=r"$\omega_\star(\eta)$")
    ax.plot(eta, columns["omega_b"], "--", label=r"$\omega_b(\eta)$")
    for x, label in ((eta_b, r"$\eta_b$"), (eta_star, r"$\eta_\star$")):
        ax.axvline(x, color="gray", linewidth=0.8)
        ax.annotate(f"{label} = {x:.3f}", xy=(x, ax.get_ylim()[1]),
                    xytext=(3, -12), textcoords="offset points", fontsize=9)
    ax.set_xlabel(r"$\eta$")
    ax.set_ylabel("decay rate")
    ax.legend()
    ax.set_title("True vs certified decay rate")
    _apply_ranges(ax, spec)
    return fig


_RENDERERS = {
    "thresholds": _render_thresholds,
    "ratio": _render_ratio,
    "decay": _render_decay,
}


def render(spec: FigureSpec) -> None:
    """Read, validate, draw, and write the figure for `spec`."""
    columns = read_scan(spec.input_path, spec.kind)
    fig = _RENDERERS[spec.kind](columns, spec)
    fig.tight_layout()
    fig.savefig(spec.output_path, dpi=150)
    plt.close(fig)


def _range(text: str) -> tuple:
    lo, hi = (float(v) for v in text.split(":"))
    return (lo, hi)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render", description="Render mgtfourier scan CSVs as figures."
    )
    parser.add_argument("--kind", choices=sorted(SCHEMAS), required=True)
    parser.add_argument("--in", dest="input_path", required=True, metavar="CSV")
    parser.add_argument("--out", dest="output_path", required=True, metavar="IMAGE")
    parser.add_argument("--xlim", type=_range, default=None, metavar="LO:HI")
    parser.add_argument("--ylim", type=_range, default=None, metavar="LO:HI")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_ARGS if exc.code else EXIT_OK
    spec = FigureSpec(
        input_path=args.input_path,
        kind=args.kind,
        output_path=args.output_path,
        xlim=args.xlim,
        ylim=args.ylim,
    )
    try:
        render(spec)
    except (SchemaError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BAD_ARGS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
