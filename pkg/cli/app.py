"""Command-line front end: sweeps, the published E table, single-point reports, oracle checks, plot scripts.

Exit codes: 0 ok, 1 check failure, 2 usage or parse error, 3 degenerate physics point.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from dotenv import dotenv_values
from pydantic import ValidationError

from backend.errors import (
    DegenerateFrameError,
    ProductSpaceLimitError,
    QuantumNumberError,
    SweepSpecError,
)
from backend.models import EntanglementReport, SqueezedVacuumParams, SweepSpec
from backend.oracle_suite import run_oracle_suite
from backend.squeezed_vacuum import closed_form_report, oracle_report, report_discrepancy
from backend.sweep import (
    parse_m_values,
    parse_n_range,
    parse_xi_grid,
    row_from_report,
    run_sweep,
    write_csv,
)
from config.settings import settings
from data.published_e import PUBLISHED_E, PUBLISHED_M, PUBLISHED_N, PUBLISHED_XI, published_frame

from .plots import PLOT_STYLES, build_plot_script

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_DEGENERATE = 3

_TRUE_WORDS = {"1", "true", "yes", "on"}


def load_config_file(path: Optional[str]) -> Dict[str, str]:
    """key = value lines; keys mirror the long flag names (dashes or underscores)."""
    if not path:
        return {}
    if not Path(path).is_file():
        raise FileNotFoundError(f"Config file not found: {path}")
    raw = dotenv_values(path)
    return {
        key.strip().lstrip("-").replace("-", "_").lower(): value
        for key, value in raw.items()
        if value is not None
    }


def _option(args: argparse.Namespace, config: Dict[str, str], name: str, default=None):
    # flag > config file > default
    value = getattr(args, name, None)
    if value is not None:
        return value
    if name in config:
        return config[name]
    return default


def _flag(args: argparse.Namespace, config: Dict[str, str], name: str) -> bool:
    value = _option(args, config, name, False)
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() in _TRUE_WORDS


def _int_option(args: argparse.Namespace, config: Dict[str, str], name: str, default: int) -> int:
    value = _option(args, config, name, default)
    try:
        return int(value)
    except (TypeError, ValueError) as e:
        raise SweepSpecError(f"--{name.replace('_', '-')} expects an integer, got {value!r}") from e


def _default_xi_grid() -> str:
    return f"{settings.xi_start}:{settings.xi_stop}:{settings.xi_step}"


def _sweep_spec(args, config, n_default: str, m_default: str, xi_default: str) -> SweepSpec:
    try:
        return SweepSpec(
            n_values=parse_n_range(str(_option(args, config, "n", n_default))),
            two_m_values=parse_m_values(str(_option(args, config, "m", m_default))),
            xi_values=parse_xi_grid(str(_option(args, config, "xi", xi_default))),
            mode=_option(args, config, "mode", "closed-form"),
            output=_option(args, config, "out"),
            jobs=_int_option(args, config, "jobs", settings.sweep_jobs),
            skip_degenerate=_flag(args, config, "skip_degenerate"),
        )
    except ValidationError as e:
        raise SweepSpecError(f"Invalid sweep specification: {e}") from e


def _run_and_write(spec: SweepSpec) -> int:
    results = run_sweep(spec)

    degenerate = [r.params for r in results if r.degenerate]
    if degenerate and not spec.skip_degenerate:
        first = degenerate[0]
        logger.error(
            f"Degenerate mean spin at N={first.n_atoms}, m={first.m:g}, xi={first.xi} "
            f"({len(degenerate)} points); use --skip-degenerate to drop them"
        )
        return EXIT_DEGENERATE
    for params in degenerate:
        logger.warning(f"Skipped degenerate point N={params.n_atoms}, m={params.m:g}, xi={params.xi}")

    rows = [r.row for r in results if r.row is not None]
    write_csv(rows, spec.output if spec.output else sys.stdout)
    if spec.output:
        logger.info(f"Wrote {len(rows)} rows to {spec.output}")

    worst = max((r.discrepancy for r in results if r.discrepancy is not None), default=None)
    if worst is not None:
        logger.info(f"Largest dual-path discrepancy: {worst:.3e}")
        if worst > settings.oracle_rel_tol:
            return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_sweep_xi(args: argparse.Namespace, config: Dict[str, str]) -> int:
    """E against xi for fixed N and each m (the first figure)."""
    spec = _sweep_spec(args, config, "100", "10,20,30,40,50", _default_xi_grid())
    return _run_and_write(spec)


def cmd_sweep_n(args: argparse.Namespace, config: Dict[str, str]) -> int:
    """E against N for fixed m at a few xi values (the second figure)."""
    spec = _sweep_spec(args, config, "2:100", "1", "0.8,1.0")
    return _run_and_write(spec)


def _format_e(value: float) -> str:
    return f"{value:.2f}" if abs(value) >= 1 else f"{value:.4g}"


def published_table_values() -> Dict[tuple, float]:
    values = {}
    for m in PUBLISHED_M:
        for xi in PUBLISHED_XI:
            params = SqueezedVacuumParams(n_atoms=PUBLISHED_N, two_m=2 * m, xi=xi)
            values[(m, xi)] = closed_form_report(params).e_param
    return values


def cmd_table1(args: argparse.Namespace, config: Dict[str, str]) -> int:
    values = published_table_values()

    print(f"E for N = {PUBLISHED_N}")
    formatters = {}
    for k in range(1, len(PUBLISHED_XI) + 1):
        formatters[f"xi{k}"] = "{:g}".format
        formatters[f"E{k}"] = _format_e
    print(published_frame(values).to_string(index=False, formatters=formatters))

    if not _flag(args, config, "check"):
        return EXIT_OK

    failures = 0
    for key, published in PUBLISHED_E.items():
        computed = values[key]
        allowed = max(settings.table_rel_tol * abs(published), settings.table_abs_tol)
        if not abs(computed - published) <= allowed:
            failures += 1
            print(f"MISMATCH m={key[0]} xi={key[1]:g}: computed {computed!r}, published {published!r}")
    if failures:
        logger.error(f"Published E table check failed at {failures} of {len(PUBLISHED_E)} entries")
        return EXIT_CHECK_FAILED
    print(f"Published E table check passed ({len(PUBLISHED_E)} entries)")
    return EXIT_OK


def _print_report(label: str, report: EntanglementReport) -> None:
    print(f"[{label}]")
    print(f"  <J> magnitude      : {report.mean_spin_mag:.12g}")
    print(f"  frame theta, phi   : {report.angles.theta:.12g}, {report.angles.phi:.12g}")
    print(f"  Var Jx', Var Jy'   : {report.var_xp:.12g}, {report.var_yp:.12g}")
    print(f"  CORRX, CORRY       : {report.corr_x:.12g}, {report.corr_y:.12g}")
    print(f"  E                  : {report.e_param:.12g}")
    print(f"  Ramsey xi_Rx, xi_Ry: {report.xi_rx:.12g}, {report.xi_ry:.12g}")
    print(f"  squeezing          : {report.squeezing}")
    if report.entangled_without_squeezing:
        print("  entangled without spin squeezing")


def _single(text: str, parser: Callable[[str], list], what: str):
    values = parser(text)
    if values is None or len(values) != 1:
        raise SweepSpecError(f"report needs exactly one {what}, got {text!r}")
    return values[0]


def cmd_report(args: argparse.Namespace, config: Dict[str, str]) -> int:
    n_text, m_text, xi_text = (_option(args, config, k) for k in ("n", "m", "xi"))
    if n_text is None or m_text is None or xi_text is None:
        raise SweepSpecError("report needs --n, --m and --xi")
    params = SqueezedVacuumParams(
        n_atoms=_single(str(n_text), parse_n_range, "N"),
        two_m=_single(str(m_text), parse_m_values, "m"),
        xi=_single(str(xi_text), parse_xi_grid, "xi"),
    )

    closed = closed_form_report(params)
    print(f"N = {params.n_atoms}, m = {params.m:g}, xi = {params.xi:g}")
    _print_report("closed form", closed)

    status = EXIT_OK
    if _flag(args, config, "oracle"):
        dense = oracle_report(params)
        _print_report("dense oracle", dense)
        discrepancy = report_discrepancy(closed, dense)
        print(f"max relative discrepancy: {discrepancy:.3e}")
        if not discrepancy <= settings.oracle_rel_tol:
            status = EXIT_CHECK_FAILED

    print(row_from_report(params, closed).model_dump_json())
    return status


def cmd_oracle_check(args: argparse.Namespace, config: Dict[str, str]) -> int:
    max_n = _int_option(args, config, "max_n", settings.product_max_atoms)
    results = run_oracle_suite(max_n_product=max_n)
    for result in results:
        mark = "PASS" if result.passed else "FAIL"
        print(f"{mark}  {result.name}: residual {result.residual:.3e} (tolerance {result.tolerance:.0e})")
    failed = sum(1 for r in results if not r.passed)
    if failed:
        print(f"{failed} of {len(results)} checks failed")
        return EXIT_CHECK_FAILED
    print(f"all {len(results)} checks passed")
    return EXIT_OK


def cmd_plot(args: argparse.Namespace, config: Dict[str, str]) -> int:
    csv_path = _option(args, config, "csv")
    if not csv_path:
        raise SweepSpecError("plot needs --csv")
    style = _option(args, config, "style", "fig1")
    out = _option(args, config, "out")
    image = str(Path(out).with_suffix(".png")) if out else ""
    script = build_plot_script(str(csv_path), style, image=image)
    if out:
        Path(out).write_text(script, encoding="utf-8")
        logger.info(f"Wrote {style} plot script to {out}")
    else:
        sys.stdout.write(script)
    return EXIT_OK


def _add_sweep_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", help="N, a range lo:hi[:step] or a comma list")
    parser.add_argument("--m", help="comma list of m values, or 'all'")
    parser.add_argument("--xi", help="xi grid start:stop:step or a comma list")
    parser.add_argument("--mode", choices=["closed-form", "oracle", "both"])
    parser.add_argument("--skip-degenerate", action="store_true", default=None)
    parser.add_argument("--jobs", type=int, help="worker processes (rows stay in grid order)")
    parser.add_argument("--out", help="CSV path (default: standard output)")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file mirroring the long flags")

    parser = argparse.ArgumentParser(
        prog="entangle",
        description="Entanglement parameter E of atoms driven by squeezed vacuum radiation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep_xi = sub.add_parser("sweep-xi", parents=[common], help="E versus xi for each m")
    _add_sweep_options(sweep_xi)
    sweep_xi.set_defaults(handler=cmd_sweep_xi)

    sweep_n = sub.add_parser("sweep-n", parents=[common], help="E versus N for each xi")
    _add_sweep_options(sweep_n)
    sweep_n.set_defaults(handler=cmd_sweep_n)

    table1 = sub.add_parser("table1", parents=[common], help="reproduce the N = 100 table of E")
    table1.add_argument("--check", action="store_true", default=None)
    table1.set_defaults(handler=cmd_table1)

    report = sub.add_parser("report", parents=[common], help="full report for one (N, m, xi)")
    report.add_argument("--n")
    report.add_argument("--m")
    report.add_argument("--xi")
    report.add_argument("--oracle", action="store_true", default=None)
    report.set_defaults(handler=cmd_report)

    oracle = sub.add_parser("oracle-check", parents=[common], help="run the self-check suite")
    oracle.add_argument("--max-n", type=int, dest="max_n")
    oracle.set_defaults(handler=cmd_oracle_check)

    plot = sub.add_parser("plot", parents=[common], help="emit a gnuplot script for a sweep CSV")
    plot.add_argument("--style", choices=PLOT_STYLES)
    plot.add_argument("--csv")
    plot.add_argument("--out")
    plot.set_defaults(handler=cmd_plot)

    return parser


def configure_logging() -> None:
    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.INFO),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    try:
        config = load_config_file(args.config)
        return args.handler(args, config)
    except DegenerateFrameError as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_DEGENERATE
    except (
        SweepSpecError,
        ProductSpaceLimitError,
        QuantumNumberError,
        ValidationError,
        OSError,
    ) as e:
        logger.error(f"{args.command}: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
