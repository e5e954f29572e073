"""Reduced Wigner d-matrix elements and the imaginary-angle series Delta, eta, Gamma.

Everything that can overflow a double (factorials up to 100!, cosh(xi)^(2j)) is
carried as a LogScaled value. The d-matrix k-sum alternates in sign and cancels
badly at large j, so it is accumulated exactly in integer arithmetic from the
integer ratios of cos(beta/2) and sin(beta/2); the squared element is rounded
to floating point once.
"""

import logging
import math
from functools import lru_cache
from typing import List, Tuple

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import QuantumNumberError, check_quantum_numbers
from .models import LogScaled, SeriesBundle

logger = logging.getLogger(__name__)

_LN2 = math.log(2.0)
_EXACT_LOG_FACTORIALS = tuple(math.log(math.factorial(n)) for n in range(21))


def log_factorial(n: int) -> float:
    """ln(n!) from an exact table for n <= 20, log-gamma above that."""
    if n < 0:
        raise QuantumNumberError(f"factorial of negative integer {n}")
    if n < len(_EXACT_LOG_FACTORIALS):
        return _EXACT_LOG_FACTORIALS[n]
    return float(gammaln(n + 1))


def _log_factorials(n: np.ndarray) -> np.ndarray:
    return gammaln(np.asarray(n, dtype=float) + 1.0)


@lru_cache(maxsize=32)
def _trig_power_table(two_j: int, beta: float) -> Tuple[List[int], List[int], int]:
    # cos^a * sin^g with a + g = 2j over the common denominator (c_den * s_den)^(2j)
    c_num, c_den = math.cos(beta / 2).as_integer_ratio()
    s_num, s_den = math.sin(beta / 2).as_integer_ratio()
    cos_pows = [c_num ** a * c_den ** (two_j - a) for a in range(two_j + 1)]
    sin_pows = [s_num ** g * s_den ** (two_j - g) for g in range(two_j + 1)]
    return cos_pows, sin_pows, (c_den * s_den) ** two_j


def log_wigner_d(two_j: int, two_mp: int, two_m: int, beta: float) -> LogScaled:
    """d^j_{m'm}(beta) = <j,m'|exp(-i beta J_y)|j,m> as a LogScaled value.

    The square of the element is an exact rational, so it is built in integers
    and rounded to floating point once.
    """
    check_quantum_numbers(two_j, two_mp)
    check_quantum_numbers(two_j, two_m)
    beta = float(beta)

    j_plus_m = (two_j + two_m) // 2
    j_minus_m = (two_j - two_m) // 2
    j_plus_mp = (two_j + two_mp) // 2
    j_minus_mp = (two_j - two_mp) // 2
    shift = (two_mp - two_m) // 2  # m' - m

    cos_pows, sin_pows, denominator = _trig_power_table(two_j, beta)

    total = 0
    for k in range(max(0, -shift), min(j_minus_mp, j_plus_m) + 1):
        weight = math.comb(j_plus_m, k) * math.comb(j_minus_m, j_minus_mp - k)
        term = weight * cos_pows[two_j - 2 * k - shift] * sin_pows[2 * k + shift]
        total += -term if k % 2 else term

    if total == 0:
        return LogScaled.zero()

    sign = (1 if total > 0 else -1) * (-1 if shift % 2 else 1)
    squared = LogScaled.from_int_ratio(
        math.factorial(j_plus_mp) * math.factorial(j_minus_mp) * total * total,
        math.factorial(j_plus_m) * math.factorial(j_minus_m) * denominator * denominator,
    )
    return _signed_sqrt(squared, sign)


def _signed_sqrt(value: LogScaled, sign: int) -> LogScaled:
    half_exp, odd = divmod(value.exp2, 2)
    return LogScaled(sign=sign, log_mant=0.5 * (value.log_mant + odd * _LN2), exp2=half_exp)


def wigner_d(two_j: int, two_mp: int, two_m: int, beta: float) -> float:
    return log_wigner_d(two_j, two_mp, two_m, beta).to_real()


@lru_cache(maxsize=256)
def log_wigner_column(two_j: int, two_m: int, beta: float) -> Tuple[np.ndarray, np.ndarray]:
    """Signs and log magnitudes of d^j_{m'm}(beta) for every m' (ascending)."""
    entries = [log_wigner_d(two_j, two_mp, two_m, beta) for two_mp in range(-two_j, two_j + 1, 2)]
    signs = np.array([e.sign for e in entries], dtype=float)
    logs = np.array([e.log_mag for e in entries], dtype=float)
    signs.setflags(write=False)
    logs.setflags(write=False)
    return signs, logs


@lru_cache(maxsize=16)
def wigner_d_matrix(two_j: int, beta: float) -> np.ndarray:
    """Full real d^j(beta); rows m', columns m, both ordered -j ... +j."""
    if two_j < 0:
        raise QuantumNumberError(f"2j must be nonnegative, got {two_j}")
    dim = two_j + 1
    matrix = np.zeros((dim, dim))
    for col, two_m in enumerate(range(-two_j, two_j + 1, 2)):
        signs, logs = log_wigner_column(two_j, two_m, float(beta))
        with np.errstate(under="ignore"):
            matrix[:, col] = signs * np.exp(np.where(signs != 0, logs, 0.0))
    matrix.setflags(write=False)
    return matrix


def _log_cosh(xi: float) -> float:
    return xi + math.log1p(math.exp(-2.0 * xi)) - math.log(2.0)


def series_bundle(two_j: int, two_m: int, xi: float) -> SeriesBundle:
    """Delta, eta, Gamma, dDelta/dxi and d2Delta/dxi2 for the state |Psi_m>."""
    check_quantum_numbers(two_j, two_m)
    xi = float(xi)
    if xi < 0:
        # Delta, eta, Gamma and the second derivative are even in xi; the first is odd
        mirrored = series_bundle(two_j, two_m, -xi)
        return mirrored.model_copy(update={"d_delta": -mirrored.d_delta})

    j_plus_m = (two_j + two_m) // 2
    j_minus_m = (two_j - two_m) // 2
    casimir4 = two_j * (two_j + 2)  # 4 j (j + 1)

    if xi == 0.0:
        ratio = float(two_j + 2 * j_plus_m * j_minus_m)  # 2j + 2 (j^2 - m^2)
        return SeriesBundle(
            delta=LogScaled.from_real(1.0),
            eta=LogScaled.from_real(float(j_plus_m * j_minus_m)),
            gamma=LogScaled.from_real(ratio),
            d_delta=LogScaled.zero(),
            d2_delta=LogScaled.from_real(float(casimir4 - two_m * two_m) - ratio),
            gamma_over_delta=ratio,
        )

    log_cosh = _log_cosh(xi)
    log_tanh = math.log(math.tanh(xi))
    sech2 = math.exp(-2.0 * log_cosh)
    tanh2 = math.tanh(xi) ** 2
    prefactor = two_j * log_cosh + log_factorial(j_plus_m) + log_factorial(j_minus_m)

    k = np.arange(min(j_plus_m, j_minus_m) + 1)
    delta_terms = (
        2 * k * log_tanh
        - 2 * _log_factorials(k)
        - _log_factorials(j_minus_m - k)
        - _log_factorials(j_plus_m - k)
    )
    log_delta = prefactor + float(logsumexp(delta_terms))

    k_eta = np.arange(min(j_plus_m, j_minus_m))
    if k_eta.size:
        eta_terms = (
            2 * k_eta * log_tanh
            - _log_factorials(k_eta)
            - _log_factorials(k_eta + 1)
            - _log_factorials(j_plus_m - 1 - k_eta)
            - _log_factorials(j_minus_m - 1 - k_eta)
        )
        eta = LogScaled.from_log(prefactor + float(logsumexp(eta_terms)))
        eta_over_delta = math.exp(eta.log_mag - log_delta)
    else:
        eta = LogScaled.zero()
        eta_over_delta = 0.0

    ratio = two_j + 2.0 * eta_over_delta * sech2
    delta = LogScaled.from_log(log_delta)
    gamma = LogScaled.from_log(log_delta + math.log(ratio))
    d_delta = LogScaled.from_log(log_tanh + gamma.log_mag)
    second = casimir4 - two_m * two_m * sech2 - ratio * (1.0 + tanh2)
    d2_delta = LogScaled.from_real(second) * delta

    return SeriesBundle(
        delta=delta,
        eta=eta,
        gamma=gamma,
        d_delta=d_delta,
        d2_delta=d2_delta,
        gamma_over_delta=ratio,
    )


def delta_consistency(two_j: int, two_m: int, xi: float) -> float:
    """Relative gap between sum_m' e^(2 xi m') d_{m'm}(pi/2)^2 and the Delta series."""
    signs, logs = log_wigner_column(two_j, two_m, math.pi / 2)
    live = signs != 0
    two_mp = np.arange(-two_j, two_j + 1, 2)
    log_sum = float(logsumexp(xi * two_mp[live] + 2.0 * logs[live]))
    log_delta = series_bundle(two_j, two_m, xi).delta.log_mag
    discrepancy = abs(math.expm1(log_sum - log_delta))
    if discrepancy > 1e-10:
        logger.warning(
            f"Delta consistency {discrepancy:.3e} above 1e-10 at 2j={two_j}, 2m={two_m}, xi={xi}"
        )
    return discrepancy
