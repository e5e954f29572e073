import math

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st
from scipy.linalg import expm
from scipy.special import gammaln, logsumexp

from backend.errors import QuantumNumberError
from backend.models import LogScaled
from backend.spin_algebra import build_jy, make_sector
from backend.wigner import (
    delta_consistency,
    log_factorial,
    log_wigner_column,
    log_wigner_d,
    series_bundle,
    wigner_d,
    wigner_d_matrix,
)


def test_log_factorial():
    assert log_factorial(0) == 0.0
    assert log_factorial(5) == pytest.approx(math.log(120), rel=1e-15)
    assert log_factorial(100) == pytest.approx(gammaln(101), rel=1e-14)
    with pytest.raises(QuantumNumberError):
        log_factorial(-1)


@pytest.mark.parametrize("beta", [0.0, 0.3, math.pi / 2, 2.0, math.pi])
def test_spin_half_entries(beta):
    c, s = math.cos(beta / 2), math.sin(beta / 2)
    assert wigner_d(1, 1, 1, beta) == pytest.approx(c, abs=1e-15)
    assert wigner_d(1, -1, -1, beta) == pytest.approx(c, abs=1e-15)
    assert wigner_d(1, -1, 1, beta) == pytest.approx(s, abs=1e-15)
    assert wigner_d(1, 1, -1, beta) == pytest.approx(-s, abs=1e-15)


def test_spin_one_half_pi():
    d = wigner_d_matrix(2, math.pi / 2)
    expected = np.array(
        [
            [0.5, math.sqrt(0.5), 0.5],
            [-math.sqrt(0.5), 0.0, math.sqrt(0.5)],
            [0.5, -math.sqrt(0.5), 0.5],
        ]
    )
    # rows m' = -1, 0, 1; columns m = -1, 0, 1
    assert np.allclose(d, expected, atol=1e-15)


def test_invalid_quantum_numbers():
    with pytest.raises(QuantumNumberError):
        log_wigner_d(2, 1, 0, 0.5)
    with pytest.raises(QuantumNumberError):
        log_wigner_d(2, 4, 0, 0.5)


@pytest.mark.parametrize("two_j", [1, 2, 5, 10])
@pytest.mark.parametrize("beta", [0.4, math.pi / 2, 2.5])
def test_matches_matrix_exponential(two_j, beta):
    jy = build_jy(make_sector(two_j)).matrix
    rotation = expm(-1j * beta * jy)
    assert np.max(np.abs(rotation.imag)) < 1e-12
    assert np.allclose(wigner_d_matrix(two_j, beta), rotation.real, atol=1e-12)


@hyp_settings(max_examples=40, deadline=None)
@given(two_j=st.integers(min_value=0, max_value=16), beta=st.floats(min_value=-6.0, max_value=6.0))
def test_orthogonality(two_j, beta):
    d = wigner_d_matrix(two_j, beta)
    assert np.max(np.abs(d @ d.T - np.eye(two_j + 1))) < 1e-12


@pytest.mark.parametrize("two_j", [1, 2, 10, 100])
@pytest.mark.parametrize("beta", [0.3, 1.1, math.pi / 2, 2.7])
def test_orthogonality_up_to_j_fifty(two_j, beta):
    d = wigner_d_matrix(two_j, beta)
    assert np.max(np.abs(d @ d.T - np.eye(two_j + 1))) < 1e-12


def test_orthogonality_j_fifty_random_angles(rng):
    for beta in rng.uniform(-math.pi, math.pi, size=3):
        d = wigner_d_matrix(100, float(beta))
        assert np.max(np.abs(d @ d.T - np.eye(101))) < 1e-12


def test_spin_half_entries_are_correctly_rounded():
    for beta in (0.3, 1.1, 2.0, 2.9):
        c, s = math.cos(beta / 2), math.sin(beta / 2)
        assert abs(wigner_d(1, 1, 1, beta) - c) <= 4 * math.ulp(c)
        assert abs(wigner_d(1, -1, 1, beta) - s) <= 4 * math.ulp(s)


@pytest.mark.parametrize("two_m", [-100, -20, 0, 20, 80, 100])
def test_large_j_column_is_unit(two_m):
    signs, logs = log_wigner_column(100, two_m, math.pi / 2)
    live = signs != 0
    assert abs(math.expm1(float(logsumexp(2 * logs[live])))) < 1e-12


def test_large_j_symmetry():
    # d_{m'm}(beta) = (-1)^(m-m') d_{mm'}(beta)
    for two_mp, two_m in [(20, 40), (60, -40), (-100, 100), (2, 0)]:
        a = log_wigner_d(100, two_mp, two_m, math.pi / 2)
        b = log_wigner_d(100, two_m, two_mp, math.pi / 2)
        parity = -1 if ((two_m - two_mp) // 2) % 2 else 1
        assert a.sign == parity * b.sign
        assert a.log_mag == pytest.approx(b.log_mag, rel=1e-13, abs=1e-13)


@pytest.mark.parametrize("two_m", [20, 40, 60, 80, 100, 0, -40])
@pytest.mark.parametrize("xi", [0.01, 0.1, 1.0, 3.0])
def test_delta_consistency(two_m, xi):
    assert delta_consistency(100, two_m, xi) < 1e-10


def _log_delta(two_j, two_m, xi):
    return series_bundle(two_j, two_m, xi).delta.log_mag


@pytest.mark.parametrize("two_j,two_m", [(100, 20), (100, 80), (51, 1), (10, 0)])
@pytest.mark.parametrize("xi", [0.1, 0.5, 1.0, 2.0])
def test_first_derivative_against_finite_difference(two_j, two_m, xi):
    h = 1e-5
    bundle = series_bundle(two_j, two_m, xi)
    analytic = (bundle.d_delta / bundle.delta).to_real()
    numeric = (_log_delta(two_j, two_m, xi + h) - _log_delta(two_j, two_m, xi - h)) / (2 * h)
    assert analytic == pytest.approx(numeric, rel=1e-6)


@pytest.mark.parametrize("two_j,two_m", [(100, 20), (100, 80), (10, 2)])
@pytest.mark.parametrize("xi", [0.1, 0.5, 1.0, 2.0])
def test_second_derivative_against_finite_difference(two_j, two_m, xi):
    h = 1e-5
    bundle = series_bundle(two_j, two_m, xi)
    analytic = (bundle.d2_delta / bundle.delta).to_real()
    center = _log_delta(two_j, two_m, xi)
    numeric = (
        math.expm1(_log_delta(two_j, two_m, xi + h) - center)
        + math.expm1(_log_delta(two_j, two_m, xi - h) - center)
    ) / (h * h)
    assert analytic == pytest.approx(numeric, rel=1e-5)


def test_gamma_relation():
    bundle = series_bundle(100, 20, 0.7)
    sech2 = 1 / math.cosh(0.7) ** 2
    gamma = 100 * bundle.delta.to_real() + 2 * bundle.eta.to_real() * sech2
    assert bundle.gamma.to_real() == pytest.approx(gamma, rel=1e-12)
    assert bundle.gamma_over_delta == pytest.approx(gamma / bundle.delta.to_real(), rel=1e-12)


def test_zero_xi_limit():
    bundle = series_bundle(100, 20, 0.0)
    assert bundle.delta.to_real() == 1.0
    assert bundle.d_delta.sign == 0
    assert bundle.gamma_over_delta == 100 + 2 * 60 * 40
    near = series_bundle(100, 20, 1e-7)
    assert near.gamma_over_delta == pytest.approx(bundle.gamma_over_delta, rel=1e-9)


def test_eta_vanishes_at_extreme_m():
    for two_m in (-10, 10):
        bundle = series_bundle(10, two_m, 1.3)
        assert bundle.eta.sign == 0
        assert bundle.gamma_over_delta == 10.0


def test_negative_xi_parity():
    plus = series_bundle(40, 6, 0.8)
    minus = series_bundle(40, 6, -0.8)
    assert minus.delta == plus.delta
    assert minus.gamma == plus.gamma
    assert minus.d2_delta == plus.d2_delta
    assert minus.d_delta == -plus.d_delta


@hyp_settings(max_examples=60)
@given(
    st.floats(min_value=-1e300, max_value=1e300, allow_nan=False).filter(
        lambda v: v == 0 or abs(v) > 1e-300
    )
)
def test_log_scaled_round_trip(value):
    assert LogScaled.from_real(value).to_real() == pytest.approx(value, rel=1e-14, abs=0.0)


_moderate = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False).filter(
    lambda v: v == 0 or abs(v) > 1e-100
)


@hyp_settings(max_examples=60)
@given(_moderate, _moderate)
def test_log_scaled_arithmetic(a, b):
    la, lb = LogScaled.from_real(a), LogScaled.from_real(b)
    assert (la * lb).to_real() == pytest.approx(a * b, rel=1e-12, abs=1e-300)
    assert (la + lb).to_real() == pytest.approx(a + b, rel=1e-9, abs=1e-9 * (abs(a) + abs(b)))
    if b != 0:
        assert (la / lb).to_real() == pytest.approx(a / b, rel=1e-12)


def test_log_scaled_cancellation_and_zero():
    three = LogScaled.from_real(3.0)
    assert (three + (-three)).sign == 0
    assert LogScaled.sum([]).sign == 0
    with pytest.raises(ZeroDivisionError):
        three / LogScaled.zero()
    huge = LogScaled.from_log(2000.0)
    assert (huge / huge).to_real() == pytest.approx(1.0)


@pytest.mark.parametrize("value", [1e300, 3.7e250, 1e-300, 123456.789, 7e100, -2.5e-200])
def test_log_scaled_round_trip_at_extremes(value):
    assert LogScaled.from_real(value).to_real() == pytest.approx(value, rel=1e-14, abs=0.0)


def test_log_scaled_from_int_ratio():
    big = math.factorial(170)
    assert LogScaled.from_int_ratio(big, big).to_real() == 1.0
    assert LogScaled.from_int_ratio(1, 3).to_real() == pytest.approx(1 / 3, rel=1e-15)
    ratio = LogScaled.from_int_ratio(math.factorial(400), math.factorial(398))
    assert ratio.to_real() == pytest.approx(400 * 399, rel=1e-15)
    assert LogScaled.from_int_ratio(0, 7).sign == 0
