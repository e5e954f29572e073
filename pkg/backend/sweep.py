"""Parameter sweeps over (N, m, xi): spec parsing, grid expansion, ordered evaluation, CSV output."""

import io
import logging
from fractions import Fraction
from typing import List, Optional, Sequence, TextIO, Union

import pandas as pd
from joblib import Parallel, delayed
from pydantic import ValidationError

from config.settings import settings

from .errors import DegenerateFrameError, QuantumNumberError, SweepSpecError
from .models import (
    SWEEP_COLUMNS,
    EntanglementReport,
    PointResult,
    SqueezedVacuumParams,
    SweepMode,
    SweepRow,
    SweepSpec,
)
from .squeezed_vacuum import closed_form_report, oracle_report, report_discrepancy

logger = logging.getLogger(__name__)

# grid values are rounded so that e.g. 0 + 10 * 0.01 lands exactly on 0.1
_GRID_DECIMALS = 12


def _number(text: str, what: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise SweepSpecError(f"Cannot parse {what} value {text!r}") from e


def parse_xi_grid(text: str) -> List[float]:
    """'start:stop:step' (stop inclusive), a comma list, or a single value."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise SweepSpecError(f"xi grid must be start:stop:step, got {text!r}")
        start, stop, step = (_number(p, "xi") for p in parts)
        if step <= 0:
            raise SweepSpecError(f"xi step must be positive, got {float(step)}")
        if stop < start:
            raise SweepSpecError(f"xi grid is empty: stop {float(stop)} < start {float(start)}")
        count = int((stop - start) / step) + 1
        values = [round(float(start + k * step), _GRID_DECIMALS) for k in range(count)]
    else:
        values = [float(_number(p, "xi")) for p in text.split(",") if p.strip()]
    if not values:
        raise SweepSpecError(f"xi grid has no points: {text!r}")
    if any(v < 0 for v in values):
        raise SweepSpecError(f"xi values must be nonnegative: {text!r}")
    return values


def parse_n_range(text: str) -> List[int]:
    """'lo:hi' or 'lo:hi:step' (hi inclusive), a comma list, or a single N."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) not in (2, 3):
                raise SweepSpecError(f"N range must be lo:hi[:step], got {text!r}")
            lo, hi = parts[0], parts[1]
            step = parts[2] if len(parts) == 3 else 1
            if step <= 0:
                raise SweepSpecError(f"N step must be positive, got {step}")
            values = list(range(lo, hi + 1, step))
        else:
            values = [int(p) for p in text.split(",") if p.strip()]
    except ValueError as e:
        raise SweepSpecError(f"Cannot parse N range {text!r}") from e
    if not values:
        raise SweepSpecError(f"N range has no points: {text!r}")
    if any(n < 1 for n in values):
        raise SweepSpecError(f"N must be at least 1: {text!r}")
    return values


def parse_m_values(text: Optional[str]) -> Optional[List[int]]:
    """Comma list of m (integers, halves as 0.5 or 1/2) as doubled integers; 'all' gives None."""
    if text is None or text.strip().lower() == "all":
        return None
    two_m_values = []
    for part in text.split(","):
        if not part.strip():
            continue
        doubled = 2 * _number(part, "m")
        if doubled.denominator != 1:
            raise SweepSpecError(f"m must be an integer or half-integer, got {part.strip()!r}")
        two_m_values.append(int(doubled))
    if not two_m_values:
        raise SweepSpecError(f"m list has no values: {text!r}")
    return two_m_values


def expand_grid(spec: SweepSpec) -> List[SqueezedVacuumParams]:
    """Grid points in (N, m, xi) order; incompatible (N, m) pairs are dropped with a warning."""
    points = []
    for n_atoms in spec.n_values:
        two_m_values = spec.two_m_values
        if two_m_values is None:
            two_m_values = list(range(-n_atoms, n_atoms + 1, 2))
        for two_m in two_m_values:
            try:
                pair_points = [
                    SqueezedVacuumParams(n_atoms=n_atoms, two_m=two_m, xi=xi)
                    for xi in spec.xi_values
                ]
            except (QuantumNumberError, ValidationError) as e:
                logger.warning(f"Skipping N={n_atoms}, m={two_m / 2:g}: {e}")
                continue
            points.extend(pair_points)
    logger.info(f"Expanded sweep grid to {len(points)} points")
    return points


def row_from_report(params: SqueezedVacuumParams, report: EntanglementReport) -> SweepRow:
    return SweepRow(
        n_atoms=params.n_atoms,
        two_m=params.two_m,
        xi=params.xi,
        var_xp=report.var_xp,
        var_yp=report.var_yp,
        corr_x=report.corr_x,
        corr_y=report.corr_y,
        e_param=report.e_param,
        xi_rx=report.xi_rx,
        xi_ry=report.xi_ry,
        mean_spin_mag=report.mean_spin_mag,
    )


def evaluate_point(params: SqueezedVacuumParams, mode: SweepMode = "closed-form") -> PointResult:
    try:
        if mode == "oracle":
            return PointResult(params=params, row=row_from_report(params, oracle_report(params)))

        report = closed_form_report(params)
        discrepancy = None
        if mode == "both":
            discrepancy = report_discrepancy(report, oracle_report(params))
            if discrepancy > settings.oracle_rel_tol:
                logger.warning(
                    f"Dual-path discrepancy {discrepancy:.3e} at N={params.n_atoms}, "
                    f"m={params.m:g}, xi={params.xi}"
                )
        return PointResult(
            params=params, row=row_from_report(params, report), discrepancy=discrepancy
        )
    except DegenerateFrameError as e:
        logger.debug(f"Degenerate point N={params.n_atoms}, m={params.m:g}, xi={params.xi}: {e}")
        return PointResult(params=params, degenerate=True)


def run_sweep(spec: SweepSpec) -> List[PointResult]:
    """Evaluate every grid point; results always follow grid order."""
    points = expand_grid(spec)
    logger.info(f"Running sweep: {len(points)} points, mode={spec.mode}, jobs={spec.jobs}")
    if spec.jobs > 1:
        results = Parallel(n_jobs=spec.jobs)(
            delayed(evaluate_point)(point, spec.mode) for point in points
        )
    else:
        results = [evaluate_point(point, spec.mode) for point in points]
    degenerate = sum(1 for r in results if r.degenerate)
    logger.info(f"Sweep finished: {len(results) - degenerate} rows, {degenerate} degenerate")
    return list(results)


def rows_frame(rows: Sequence[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([row.model_dump() for row in rows], columns=SWEEP_COLUMNS)


def write_csv(rows: Sequence[SweepRow], target: Union[str, TextIO, None] = None) -> str:
    """Write rows with a header; floats carry settings.csv_digits significant digits."""
    buffer = io.StringIO()
    rows_frame(rows).to_csv(
        buffer,
        index=False,
        float_format=f"%.{settings.csv_digits}g",
        lineterminator="\n",
    )
    text = buffer.getvalue()
    if isinstance(target, str):
        with open(target, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    elif target is not None:
        target.write(text)
    return text
