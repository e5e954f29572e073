"""The squeezed-vacuum driven state |Psi_m> = A_m exp(xi J_z) exp(-i pi/2 J_y) |j,m>.

Two computation paths live here. The closed forms (series Delta, Gamma and their
derivatives) are the production path and cost O(j) per point; build_state plus
entangle_core.analyze is the dense oracle path used to cross-check them.
"""

import logging
import math

import numpy as np
from scipy.special import logsumexp

from config.settings import settings

from .entangle_core import build_report, analyze
from .errors import DegenerateFrameError
from .models import (
    CollectiveState,
    EntanglementReport,
    FrameAngles,
    LogScaled,
    MomentTable,
    SqueezedVacuumParams,
)
from .spin_algebra import build_jx, build_jy, from_amplitudes, make_sector
from .wigner import log_wigner_column, series_bundle

logger = logging.getLogger(__name__)

_HALF_PI = math.pi / 2


def _log_amplitudes(params: SqueezedVacuumParams):
    signs, logs = log_wigner_column(params.two_j, params.two_m, _HALF_PI)
    two_mp = np.arange(-params.two_j, params.two_j + 1, 2)
    live = signs != 0
    log_amps = np.full(params.two_j + 1, -np.inf)
    log_amps[live] = 0.5 * params.xi * two_mp[live] + logs[live]
    return signs, log_amps, live


def inverse_norm_squared(params: SqueezedVacuumParams) -> LogScaled:
    """A_m^-2 = sum_m' exp(2 xi m') d_{m'm}(pi/2)^2, summed from the amplitudes."""
    _, log_amps, live = _log_amplitudes(params)
    return LogScaled.from_log(float(logsumexp(2.0 * log_amps[live])))


def build_state(params: SqueezedVacuumParams) -> CollectiveState:
    signs, log_amps, live = _log_amplitudes(params)
    log_norm = 0.5 * inverse_norm_squared(params).log_mag
    amplitudes = np.zeros(params.two_j + 1)
    amplitudes[live] = signs[live] * np.exp(log_amps[live] - log_norm)
    return from_amplitudes(make_sector(params.n_atoms), amplitudes, normalize=True)


def closed_form_moments(params: SqueezedVacuumParams) -> MomentTable:
    bundle = series_bundle(params.two_j, params.two_m, params.xi)
    ratio = bundle.gamma_over_delta
    m = params.m
    j = params.j
    cosh = math.cosh(params.xi)
    tanh = math.tanh(params.xi)
    sech2 = 1.0 / (cosh * cosh)
    jx = m / cosh

    return MomentTable(
        jx=jx,
        jy=0.0,
        jz=0.5 * tanh * ratio,
        jx2=m * m * sech2 + 0.25 * tanh * tanh * ratio,
        jy2=0.25 * ratio,
        jz2=j * (j + 1) - m * m * sech2 - 0.25 * ratio * (1.0 + tanh * tanh),
        xy_sym=0.0,
        xz_sym=jx * tanh * (ratio - 1.0),
        yz_sym=0.0,
    )


def tilt_angle(params: SqueezedVacuumParams) -> float:
    """Angle between the mean spin (in the z-x plane) and the z axis."""
    mom = closed_form_moments(params)
    return math.atan2(mom.jx, mom.jz)


def closed_form_report(params: SqueezedVacuumParams) -> EntanglementReport:
    bundle = series_bundle(params.two_j, params.two_m, params.xi)
    ratio = bundle.gamma_over_delta
    m2 = params.m ** 2
    casimir = params.j * (params.j + 1)
    tanh2 = math.tanh(params.xi) ** 2
    sech2 = 1.0 / math.cosh(params.xi) ** 2

    along_x2 = m2 * sech2
    mag2 = along_x2 + 0.25 * tanh2 * ratio * ratio
    mag = math.sqrt(mag2)
    if mag <= settings.frame_epsilon:
        raise DegenerateFrameError(mag, settings.frame_epsilon)

    if params.xi == 0.0:
        var_xp = casimir - 0.25 * ratio - m2
    else:
        numerator = (
            (0.25 * tanh2) ** 2 * ratio ** 3
            + casimir * along_x2
            - 0.25 * along_x2 * sech2 * ratio
        )
        var_xp = numerator / mag2 - along_x2
    var_yp = 0.25 * ratio

    theta = abs(tilt_angle(params))
    flipped = params.two_m < 0 and along_x2 >= settings.frame_epsilon ** 2
    angles = FrameAngles(theta=theta, phi=math.pi if flipped else 0.0)
    return build_report(var_xp, var_yp, mag, angles, params.n_atoms)


def oracle_report(params: SqueezedVacuumParams) -> EntanglementReport:
    return analyze(build_state(params))


def report_discrepancy(a: EntanglementReport, b: EntanglementReport, floor: float = 1e-10) -> float:
    """Largest relative gap over var_xp, var_yp, |<J>| and E (absolute below floor)."""
    worst = 0.0
    for field in ("var_xp", "var_yp", "mean_spin_mag", "e_param"):
        x, y = getattr(a, field), getattr(b, field)
        worst = max(worst, abs(x - y) / max(abs(x), abs(y), floor))
    return worst


def lambda_residual(params: SqueezedVacuumParams) -> float:
    """|| (Jx cosh xi + i Jy sinh xi) Psi - m Psi || with dense operators."""
    state = build_state(params)
    sector = state.sector
    lam = build_jx(sector).matrix * math.cosh(params.xi) + 1j * math.sinh(params.xi) * build_jy(
        sector
    ).matrix
    psi = state.amplitudes
    residual = float(np.linalg.norm(lam @ psi - params.m * psi))
    logger.debug(f"Lambda residual {residual:.3e} at N={params.n_atoms}, 2m={params.two_m}")
    return residual


def analytic_e_at_zero(n_atoms: int, two_m: int) -> float:
    """((j(j+1) - m^2)/2 - N/4)^2, free of any series evaluation."""
    variance = (n_atoms * (n_atoms + 2) - two_m * two_m) / 8
    return (variance - n_atoms / 4) ** 2
