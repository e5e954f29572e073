import math

import numpy as np
import pytest

from backend.entangle_core import analyze, entanglement_e, rotated_variances
from backend.errors import DegenerateFrameError, ProductSpaceLimitError
from backend.models import FrameAngles, ProductSpaceState, SqueezedVacuumParams
from backend.product_oracle import (
    atom_operators,
    collective_rotated_variances,
    embed_symmetric,
    individual_rotated_variances,
    pairwise_corr,
    product_coherent_state,
    separability_residual,
    swap_residual,
)
from backend.spin_algebra import dicke_state, make_sector, moments
from backend.squeezed_vacuum import build_state

TRIPLET = np.array([0.0, 1.0, 1.0, 0.0]) / math.sqrt(2)


def test_embed_triplet():
    embedded = embed_symmetric(dicke_state(make_sector(2), 0))
    assert np.allclose(embedded.amplitudes, TRIPLET, atol=1e-15)


@pytest.mark.parametrize("n_atoms", [1, 2, 3, 4])
def test_embed_top_state(n_atoms):
    embedded = embed_symmetric(dicke_state(make_sector(n_atoms), n_atoms))
    expected = np.zeros(2 ** n_atoms)
    expected[0] = 1.0
    assert np.allclose(embedded.amplitudes, expected)
    assert separability_residual(embedded) < 1e-12


@pytest.mark.parametrize("n_atoms", [2, 3, 4])
def test_embedding_preserves_norm_and_symmetry(n_atoms, random_symmetric_state):
    for _ in range(10):
        embedded = embed_symmetric(random_symmetric_state(n_atoms))
        assert abs(np.vdot(embedded.amplitudes, embedded.amplitudes).real - 1.0) < 1e-12
        assert swap_residual(embedded) < 1e-12


def test_cap_on_atoms():
    with pytest.raises(ProductSpaceLimitError):
        embed_symmetric(dicke_state(make_sector(5), 5))
    with pytest.raises(ProductSpaceLimitError):
        product_coherent_state(5, 0.3, 0.1)
    with pytest.raises(ProductSpaceLimitError):
        atom_operators(6)


def test_swap_detects_asymmetry():
    state = ProductSpaceState(n_atoms=2, amplitudes=[0.0, 1.0, 0.0, 0.0])
    assert swap_residual(state) == pytest.approx(math.sqrt(2))


@pytest.mark.parametrize("n_atoms", [1, 2, 3, 4])
def test_product_coherent_state_is_uncorrelated(n_atoms):
    theta, phi = 1.1, 0.4
    product = product_coherent_state(n_atoms, theta, phi)
    assert swap_residual(product) < 1e-12
    assert separability_residual(product) < 1e-12
    corr_x, corr_y = pairwise_corr(product, FrameAngles(theta=theta, phi=phi))
    assert abs(corr_x) < 1e-12 and abs(corr_y) < 1e-12
    for var_x, var_y in individual_rotated_variances(product, FrameAngles(theta=theta, phi=phi)):
        assert var_x == pytest.approx(0.25, abs=1e-12)
        assert var_y == pytest.approx(0.25, abs=1e-12)


def test_triplet_correlations():
    state = dicke_state(make_sector(2), 0)
    embedded = embed_symmetric(state)
    assert separability_residual(embedded) > 0.2

    # the collective mean spin vanishes, so the frame is supplied explicitly
    angles = FrameAngles(theta=math.pi / 2, phi=0.0)
    var_xp, var_yp = rotated_variances(moments(state), angles)
    corr_x, corr_y = pairwise_corr(embedded, angles)
    assert corr_x == pytest.approx(var_xp - 0.5, abs=1e-12)
    assert corr_y == pytest.approx(var_yp - 0.5, abs=1e-12)
    with pytest.raises(DegenerateFrameError):
        individual_rotated_variances(embedded, angles)


@pytest.mark.parametrize("two_m", [0, 2, 4])
def test_embedded_squeezed_vacuum_matches_collective(two_m):
    state = build_state(SqueezedVacuumParams(n_atoms=4, two_m=two_m, xi=0.7))
    report = analyze(state)
    corr_x, corr_y = pairwise_corr(embed_symmetric(state), report.angles)
    assert corr_x == pytest.approx(report.corr_x, abs=1e-10)
    assert corr_y == pytest.approx(report.corr_y, abs=1e-10)
    assert entanglement_e(corr_x, corr_y) == pytest.approx(report.e_param, abs=1e-10)


@pytest.mark.parametrize("n_atoms", [2, 3, 4])
def test_decomposition_identity(n_atoms, random_symmetric_state):
    states = [random_symmetric_state(n_atoms) for _ in range(50)]
    states += [
        build_state(SqueezedVacuumParams(n_atoms=n_atoms, two_m=two_m, xi=xi))
        for two_m in range(-n_atoms, n_atoms + 1, 2)
        for xi in (0.3, 1.2)
    ]
    for state in states:
        report = analyze(state)
        embedded = embed_symmetric(state)
        individual = individual_rotated_variances(embedded, report.angles)
        corr_x, corr_y = pairwise_corr(embedded, report.angles)
        total_x, total_y = collective_rotated_variances(embedded, report.angles)

        assert all(abs(v - 0.25) < 1e-10 for pair in individual for v in pair)
        assert total_x == pytest.approx(sum(v[0] for v in individual) + corr_x, abs=1e-10)
        assert total_y == pytest.approx(sum(v[1] for v in individual) + corr_y, abs=1e-10)
        assert total_x == pytest.approx(report.var_xp, abs=1e-10)
        assert total_y == pytest.approx(report.var_yp, abs=1e-10)
        assert entanglement_e(corr_x, corr_y) == pytest.approx(report.e_param, abs=1e-10)


def test_separable_states_have_zero_e(rng):
    for _ in range(100):
        n_atoms = int(rng.integers(1, 5))
        theta = math.acos(rng.uniform(-1.0, 1.0))
        phi = rng.uniform(0.0, 2 * math.pi)
        product = product_coherent_state(n_atoms, theta, phi)
        corr_x, corr_y = pairwise_corr(product, FrameAngles(theta=theta, phi=phi))
        assert entanglement_e(corr_x, corr_y) < 1e-10
