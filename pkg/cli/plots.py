"""Gnuplot scripts for the three figure styles; the scripts read the sweep CSV directly."""

import logging
from pathlib import Path
from typing import List

import pandas as pd

from backend.errors import SweepSpecError
from backend.models import SWEEP_COLUMNS

logger = logging.getLogger(__name__)

PLOT_STYLES = ("fig1", "fig2", "fig3")

# gnuplot columns are 1-based
_COL = {name: k for k, name in enumerate(SWEEP_COLUMNS, start=1)}

_HEADER = """\
set datafile separator ","
set terminal %(terminal)s
set output "%(image)s"
set title "%(title)s"
set xlabel "%(xlabel)s"
set ylabel "%(ylabel)s"
set key top right
"""


def _series(csv: str, x_col: int, y_expr: str, title: str) -> str:
    return f'"{csv}" every ::1 using {x_col}:({y_expr}) with lines title "{title}"'


def _fig1(csv: str, frame: pd.DataFrame) -> List[str]:
    lines = []
    for two_m in sorted(int(v) for v in frame["two_m"].unique()):
        y = f"${_COL['two_m']} == {two_m} ? ${_COL['e_param']} : 1/0"
        lines.append(_series(csv, _COL["xi"], y, f"m = {two_m / 2:g}"))
    return lines


def _fig2(csv: str, frame: pd.DataFrame) -> List[str]:
    lines = []
    for xi in sorted(float(v) for v in frame["xi"].unique()):
        y = f"abs(${_COL['xi']} - {xi:.17g}) < 1e-12 ? ${_COL['e_param']} : 1/0"
        lines.append(_series(csv, _COL["n_atoms"], y, f"xi = {xi:g}"))
    return lines


def _fig3(csv: str, frame: pd.DataFrame) -> List[str]:
    rows = frame[frame["two_m"] == 80]
    if rows.empty:
        raise SweepSpecError("fig3 needs rows with m = 40")
    where = f"${_COL['two_m']} == 80"
    quarter = float(rows["n_atoms"].iloc[0]) / 4
    return [
        _series(csv, _COL["xi"], f"{where} ? ${_COL['var_xp']} : 1/0", "Var-Jx"),
        _series(csv, _COL["xi"], f"{where} ? ${_COL['var_yp']} : 1/0", "Var-Jy"),
        f'{quarter:g} with dashtype 2 title "N/4"',
    ]


_STYLES = {
    "fig1": (_fig1, "E versus xi for each m", "xi", "E"),
    "fig2": (_fig2, "E versus N for each xi", "N", "E"),
    "fig3": (_fig3, "Rotated-frame variances for m = 40", "xi", "variance"),
}


def build_plot_script(csv_path: str, style: str, image: str = "", terminal: str = "pngcairo") -> str:
    """Plot script for one figure style. Raises FileNotFoundError if the CSV is missing."""
    if style not in _STYLES:
        raise SweepSpecError(f"Unknown plot style {style!r}; choose one of {', '.join(PLOT_STYLES)}")
    path = Path(csv_path)
    if not path.is_file():
        raise FileNotFoundError(f"CSV not found: {csv_path}")

    try:
        frame = pd.read_csv(path)
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
        raise SweepSpecError(f"{csv_path} is not a readable CSV: {e}") from e
    missing = [c for c in SWEEP_COLUMNS if c not in frame.columns]
    if missing:
        raise SweepSpecError(f"{csv_path} is not a sweep CSV; missing columns {missing}")

    builder, title, xlabel, ylabel = _STYLES[style]
    config = {
        "terminal": terminal,
        "image": image or f"{path.stem}_{style}.png",
        "title": title,
        "xlabel": xlabel,
        "ylabel": ylabel,
    }
    series = builder(str(path), frame)
    logger.debug(f"Plot script {style} with {len(series)} series from {csv_path}")
    return _HEADER % config + "plot " + ", \\\n     ".join(series) + "\n"
