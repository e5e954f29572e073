import logging
import math
from typing import Optional, Tuple

import numpy as np

from config.settings import settings

from .errors import DegenerateFrameError
from .models import CollectiveState, EntanglementReport, FrameAngles, MomentTable, SqueezingStatus
from .spin_algebra import moments

logger = logging.getLogger(__name__)

# below this |CORR| a quadrature counts as unsqueezed / uncorrelated
_CORRELATION_FLOOR = 1e-9


def mean_spin(mom: MomentTable) -> np.ndarray:
    return np.array([mom.jx, mom.jy, mom.jz])


def frame_angles(mean: np.ndarray, epsilon: Optional[float] = None) -> FrameAngles:
    """Angles (theta, phi) that carry the mean spin onto the z' axis."""
    eps = settings.frame_epsilon if epsilon is None else epsilon
    jx, jy, jz = (float(c) for c in mean)
    magnitude = math.sqrt(jx * jx + jy * jy + jz * jz)
    if magnitude <= eps:
        raise DegenerateFrameError(magnitude, eps)

    theta = math.atan2(math.hypot(jx, jy), jz)
    phi = 0.0 if jx * jx + jy * jy < eps * eps else math.atan2(jy, jx)
    return FrameAngles(theta=theta, phi=phi)


def frame_components(mean: np.ndarray, angles: FrameAngles) -> Tuple[float, float, float]:
    """(<Jx'>, <Jy'>, <Jz'>) of a mean spin vector in the rotated frame."""
    jx, jy, jz = (float(c) for c in mean)
    st, ct = math.sin(angles.theta), math.cos(angles.theta)
    sp, cp = math.sin(angles.phi), math.cos(angles.phi)
    return (
        jx * ct * cp + jy * ct * sp - jz * st,
        -jx * sp + jy * cp,
        jx * st * cp + jy * st * sp + jz * ct,
    )


def rotated_variances(mom: MomentTable, angles: FrameAngles) -> Tuple[float, float]:
    st, ct = math.sin(angles.theta), math.cos(angles.theta)
    sp, cp = math.sin(angles.phi), math.cos(angles.phi)

    var_x = mom.jx2 - mom.jx ** 2
    var_y = mom.jy2 - mom.jy ** 2
    var_z = mom.jz2 - mom.jz ** 2
    cov_xy = mom.xy_sym - 2 * mom.jx * mom.jy
    cov_xz = mom.xz_sym - 2 * mom.jx * mom.jz
    cov_yz = mom.yz_sym - 2 * mom.jy * mom.jz

    var_xp = (
        var_x * ct * ct * cp * cp
        + var_y * ct * ct * sp * sp
        + var_z * st * st
        + cov_xy * ct * ct * sp * cp
        - cov_xz * st * ct * cp
        - cov_yz * st * ct * sp
    )
    var_yp = var_x * sp * sp + var_y * cp * cp - cov_xy * sp * cp
    return var_xp, var_yp


def corr_terms(var_xp: float, var_yp: float, n_atoms: int) -> Tuple[float, float]:
    """Deviation of each transverse fluctuation from the unentangled level N/4."""
    return var_xp - n_atoms / 4, var_yp - n_atoms / 4


def entanglement_e(corr_x: float, corr_y: float) -> float:
    return (corr_x * corr_x + corr_y * corr_y) / 2


def entanglement_e_from_variances(var_xp: float, var_yp: float, n_atoms: int) -> float:
    half_n = n_atoms / 2
    return (var_xp * (var_xp - half_n) + var_yp * (var_yp - half_n) + n_atoms ** 2 / 8) / 2


def ramsey_parameters(
    var_xp: float, var_yp: float, mean_spin_mag: float, two_j: int
) -> Tuple[float, float]:
    if mean_spin_mag <= 0:
        raise ValueError(f"Ramsey parameters need a nonzero mean spin, got {mean_spin_mag}")
    scale = math.sqrt(two_j) / mean_spin_mag
    return scale * math.sqrt(max(var_xp, 0.0)), scale * math.sqrt(max(var_yp, 0.0))


def e_from_ramsey(
    xi_rx: float, xi_ry: float, mean_spin_mag: float, two_j: int, n_atoms: int
) -> float:
    """E recovered from the measurable spectroscopic squeezing parameters."""
    spin_sq = mean_spin_mag ** 2 / two_j
    var_xp = xi_rx ** 2 * spin_sq
    var_yp = xi_ry ** 2 * spin_sq
    return entanglement_e_from_variances(var_xp, var_yp, n_atoms)


def squeezing_status(corr_x: float, corr_y: float) -> SqueezingStatus:
    if min(corr_x, corr_y) >= -_CORRELATION_FLOOR:
        return "none"
    return "x" if corr_x < corr_y else "y"


def build_report(
    var_xp: float,
    var_yp: float,
    mean_spin_mag: float,
    angles: FrameAngles,
    n_atoms: int,
) -> EntanglementReport:
    """Assemble the report from rotated-frame variances; shared by both computation paths."""
    corr_x, corr_y = corr_terms(var_xp, var_yp, n_atoms)
    e_param = entanglement_e(corr_x, corr_y)
    xi_rx, xi_ry = ramsey_parameters(var_xp, var_yp, mean_spin_mag, n_atoms)

    e_alt = entanglement_e_from_variances(var_xp, var_yp, n_atoms)
    if abs(e_alt - e_param) > 1e-9 * max(1.0, e_param):
        logger.warning(f"E forms disagree: {e_param!r} vs {e_alt!r}")

    robertson = math.sqrt(max(var_xp, 0.0) * max(var_yp, 0.0))
    if robertson < mean_spin_mag / 2 - 1e-9:
        logger.warning(f"Robertson bound violated: {robertson!r} < {mean_spin_mag / 2!r}")
    logger.debug(f"N/4 uncertainty form holds: {robertson >= n_atoms / 4}")

    squeezing = squeezing_status(corr_x, corr_y)
    return EntanglementReport(
        var_xp=var_xp,
        var_yp=var_yp,
        corr_x=corr_x,
        corr_y=corr_y,
        e_param=e_param,
        xi_rx=xi_rx,
        xi_ry=xi_ry,
        mean_spin_mag=mean_spin_mag,
        angles=angles,
        n_atoms=n_atoms,
        squeezing=squeezing,
        entangled_without_squeezing=squeezing == "none" and e_param > _CORRELATION_FLOOR,
    )


def analyze(state: CollectiveState) -> EntanglementReport:
    """moments -> mean spin -> frame -> rotated variances -> CORRX/CORRY -> E -> Ramsey."""
    mom = moments(state)
    mean = mean_spin(mom)
    angles = frame_angles(mean)

    x_prime, y_prime, _ = frame_components(mean, angles)
    if max(abs(x_prime), abs(y_prime)) >= 1e-9:
        logger.warning(f"Frame leaves transverse mean spin ({x_prime:.3e}, {y_prime:.3e})")

    var_xp, var_yp = rotated_variances(mom, angles)
    return build_report(
        var_xp,
        var_yp,
        float(np.linalg.norm(mean)),
        angles,
        state.sector.n_atoms,
    )
