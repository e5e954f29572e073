import math

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st

from backend.entangle_core import (
    analyze,
    corr_terms,
    e_from_ramsey,
    entanglement_e,
    entanglement_e_from_variances,
    frame_angles,
    frame_components,
    mean_spin,
    ramsey_parameters,
    rotated_variances,
    squeezing_status,
)
from backend.errors import DegenerateFrameError
from backend.models import FrameAngles
from backend.spin_algebra import coherent_state, dicke_state, make_sector, moments


def test_frame_angles_axes():
    up = frame_angles(np.array([0.0, 0.0, 3.0]))
    assert (up.theta, up.phi) == (0.0, 0.0)
    down = frame_angles(np.array([0.0, 0.0, -3.0]))
    assert down.theta == pytest.approx(math.pi)
    along_y = frame_angles(np.array([0.0, 2.0, 0.0]))
    assert along_y.theta == pytest.approx(math.pi / 2)
    assert along_y.phi == pytest.approx(math.pi / 2)


def test_degenerate_frame():
    with pytest.raises(DegenerateFrameError) as info:
        frame_angles(np.array([1e-12, 0.0, 0.0]))
    assert info.value.magnitude == pytest.approx(1e-12)
    with pytest.raises(DegenerateFrameError):
        analyze(dicke_state(make_sector(4), 0))


@hyp_settings(max_examples=50)
@given(
    st.floats(min_value=-10, max_value=10),
    st.floats(min_value=-10, max_value=10),
    st.floats(min_value=-10, max_value=10),
)
def test_frame_puts_mean_on_z_prime(x, y, z):
    mean = np.array([x, y, z])
    magnitude = float(np.linalg.norm(mean))
    if magnitude < 1e-6:
        return
    x_p, y_p, z_p = frame_components(mean, frame_angles(mean))
    assert abs(x_p) < 1e-9 * max(1.0, magnitude)
    assert abs(y_p) < 1e-9 * max(1.0, magnitude)
    assert z_p == pytest.approx(magnitude, rel=1e-12)


@hyp_settings(max_examples=30, deadline=None)
@given(
    n_atoms=st.integers(min_value=1, max_value=20),
    theta=st.floats(min_value=0.0, max_value=math.pi),
    phi=st.floats(min_value=0.0, max_value=2 * math.pi),
)
def test_coherent_state_is_unentangled(n_atoms, theta, phi):
    report = analyze(coherent_state(make_sector(n_atoms), theta, phi))
    assert report.var_xp == pytest.approx(n_atoms / 4, abs=1e-9)
    assert report.var_yp == pytest.approx(n_atoms / 4, abs=1e-9)
    assert report.e_param < 1e-10
    assert report.mean_spin_mag == pytest.approx(n_atoms / 2, rel=1e-12)
    assert report.xi_rx == pytest.approx(1.0, rel=1e-8)
    assert report.squeezing == "none"
    assert not report.entangled_without_squeezing


@pytest.mark.parametrize("n_atoms,two_m", [(4, 2), (10, 4), (10, -6), (7, 3), (100, 20)])
def test_dicke_state_report(n_atoms, two_m):
    report = analyze(dicke_state(make_sector(n_atoms), two_m))
    j, m = n_atoms / 2, two_m / 2
    transverse = (j * (j + 1) - m * m) / 2
    assert report.angles.theta == pytest.approx(0.0 if m > 0 else math.pi)
    assert report.var_xp == pytest.approx(transverse, rel=1e-12)
    assert report.var_yp == pytest.approx(transverse, rel=1e-12)
    assert report.e_param == pytest.approx((transverse - n_atoms / 4) ** 2, rel=1e-10)


def test_e_forms_agree(random_symmetric_state):
    for n_atoms in (2, 5, 9):
        report = analyze(random_symmetric_state(n_atoms))
        alt = entanglement_e_from_variances(report.var_xp, report.var_yp, n_atoms)
        assert alt == pytest.approx(report.e_param, rel=1e-9, abs=1e-12)
        ramsey = e_from_ramsey(report.xi_rx, report.xi_ry, report.mean_spin_mag, n_atoms, n_atoms)
        assert ramsey == pytest.approx(report.e_param, rel=1e-9, abs=1e-12)
        assert report.e_param >= 0


def test_rotated_variances_matches_brute_force(random_symmetric_state):
    state = random_symmetric_state(6)
    mom = moments(state)
    angles = FrameAngles(theta=0.7, phi=2.1)
    st_, ct = math.sin(angles.theta), math.cos(angles.theta)
    sp, cp = math.sin(angles.phi), math.cos(angles.phi)
    ux = np.array([ct * cp, ct * sp, -st_])
    uy = np.array([-sp, cp, 0.0])
    mean = mean_spin(mom)
    second = np.array(
        [
            [mom.jx2, mom.xy_sym / 2, mom.xz_sym / 2],
            [mom.xy_sym / 2, mom.jy2, mom.yz_sym / 2],
            [mom.xz_sym / 2, mom.yz_sym / 2, mom.jz2],
        ]
    )
    cov = second - np.outer(mean, mean)
    var_xp, var_yp = rotated_variances(mom, angles)
    assert var_xp == pytest.approx(ux @ cov @ ux, rel=1e-12)
    assert var_yp == pytest.approx(uy @ cov @ uy, rel=1e-12)


def test_corr_and_e_helpers():
    assert corr_terms(3.0, 1.0, 8) == (1.0, -1.0)
    assert entanglement_e(1.0, -1.0) == 1.0
    assert squeezing_status(0.0, 0.0) == "none"
    assert squeezing_status(-0.5, 0.1) == "x"
    assert squeezing_status(0.1, -0.5) == "y"


def test_ramsey_requires_mean_spin():
    with pytest.raises(ValueError):
        ramsey_parameters(1.0, 1.0, 0.0, 4)
    xi_x, xi_y = ramsey_parameters(1.0, 4.0, 2.0, 4)
    assert (xi_x, xi_y) == pytest.approx((1.0, 2.0))
