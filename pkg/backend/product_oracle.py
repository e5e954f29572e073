"""Tensor-product representation of N <= 4 distinguishable two-level atoms.

Basis states are bitstrings; bit i (most significant first) belongs to atom i,
with 0 for m_i = +1/2 and 1 for m_i = -1/2. Per-atom operators are the one-half
spin matrices placed on slot i by Kronecker products. Rotated-frame angles are
always supplied by the caller so both representations share one frame.
"""

import logging
import math
from functools import lru_cache
from itertools import combinations, permutations
from typing import List, Tuple

import numpy as np

from config.settings import settings

from .errors import DegenerateFrameError, ProductSpaceLimitError
from .models import CollectiveState, FrameAngles, ProductSpaceState

logger = logging.getLogger(__name__)

_HALF_SIGMA = (
    np.array([[0.0, 0.5], [0.5, 0.0]], dtype=np.complex128),
    np.array([[0.0, -0.5j], [0.5j, 0.0]], dtype=np.complex128),
    np.array([[0.5, 0.0], [0.0, -0.5]], dtype=np.complex128),
)


def _check_cap(n_atoms: int) -> None:
    if n_atoms > settings.product_max_atoms:
        raise ProductSpaceLimitError(
            f"product representation is capped at {settings.product_max_atoms} atoms, got {n_atoms}"
        )


@lru_cache(maxsize=8)
def atom_operators(n_atoms: int) -> Tuple[Tuple[np.ndarray, np.ndarray, np.ndarray], ...]:
    """(J_ix, J_iy, J_iz) for every atom i as 2^N x 2^N matrices."""
    _check_cap(n_atoms)
    eye = np.eye(2, dtype=np.complex128)
    ops = []
    for slot in range(n_atoms):
        per_axis = []
        for single in _HALF_SIGMA:
            factors = [single if k == slot else eye for k in range(n_atoms)]
            full = factors[0]
            for factor in factors[1:]:
                full = np.kron(full, factor)
            full.setflags(write=False)
            per_axis.append(full)
        ops.append(tuple(per_axis))
    return tuple(ops)


def _frame_weights(angles: FrameAngles) -> Tuple[np.ndarray, np.ndarray]:
    st, ct = math.sin(angles.theta), math.cos(angles.theta)
    sp, cp = math.sin(angles.phi), math.cos(angles.phi)
    return np.array([ct * cp, ct * sp, -st]), np.array([-sp, cp, 0.0])


def _mean(psi: np.ndarray, op: np.ndarray) -> float:
    return float(np.vdot(psi, op @ psi).real)


def _pair_covariance(psi: np.ndarray, ops, i: int, l: int) -> np.ndarray:
    # C[a, b] = <J_ia J_lb> - <J_ia><J_lb>; real because the factors act on different atoms
    cov = np.empty((3, 3))
    means_i = [_mean(psi, op) for op in ops[i]]
    means_l = [_mean(psi, op) for op in ops[l]]
    for a in range(3):
        for b in range(3):
            cov[a, b] = _mean(psi, ops[i][a] @ ops[l][b]) - means_i[a] * means_l[b]
    return cov


def embed_symmetric(state: CollectiveState) -> ProductSpaceState:
    """Spread each Dicke amplitude c_m evenly over the bitstrings with j - m down spins."""
    n_atoms = state.sector.n_atoms
    _check_cap(n_atoms)
    amplitudes = np.zeros(2 ** n_atoms, dtype=np.complex128)
    for index in range(2 ** n_atoms):
        downs = bin(index).count("1")
        # two_m = N - 2r sits at collective index N - r
        amplitudes[index] = state.amplitudes[n_atoms - downs] / math.sqrt(math.comb(n_atoms, downs))
    return ProductSpaceState(n_atoms=n_atoms, amplitudes=amplitudes)


def product_coherent_state(n_atoms: int, theta: float, phi: float) -> ProductSpaceState:
    """N identical atoms, each pointing along (theta, phi)."""
    _check_cap(n_atoms)
    single = np.array(
        [math.cos(theta / 2) * np.exp(-0.5j * phi), math.sin(theta / 2) * np.exp(0.5j * phi)]
    )
    full = single
    for _ in range(n_atoms - 1):
        full = np.kron(full, single)
    return ProductSpaceState(n_atoms=n_atoms, amplitudes=full)


def swap_residual(state: ProductSpaceState) -> float:
    """max over atom transpositions (i, l) of ||P_il psi - psi||."""
    n = state.n_atoms
    tensor = state.amplitudes.reshape((2,) * n)
    worst = 0.0
    for i, l in combinations(range(n), 2):
        swapped = np.swapaxes(tensor, i, l).reshape(-1)
        worst = max(worst, float(np.linalg.norm(swapped - state.amplitudes)))
    return worst


def pairwise_corr(state: ProductSpaceState, angles: FrameAngles) -> Tuple[float, float]:
    """Sum over ordered atom pairs i != l of the rotated-frame covariances (CORRX, CORRY)."""
    ops = atom_operators(state.n_atoms)
    psi = state.amplitudes
    wx, wy = _frame_weights(angles)
    corr_x = corr_y = 0.0
    for i, l in permutations(range(state.n_atoms), 2):
        cov = _pair_covariance(psi, ops, i, l)
        corr_x += float(wx @ cov @ wx)
        corr_y += float(wy @ cov @ wy)
    return corr_x, corr_y


def _summed_mean_magnitude(state: ProductSpaceState) -> float:
    ops = atom_operators(state.n_atoms)
    mean = [sum(_mean(state.amplitudes, atom[a]) for atom in ops) for a in range(3)]
    return math.sqrt(sum(c * c for c in mean))


def individual_rotated_variances(
    state: ProductSpaceState, angles: FrameAngles
) -> List[Tuple[float, float]]:
    """Per-atom (Delta J_ix'^2, Delta J_iy'^2) in the shared rotated frame."""
    magnitude = _summed_mean_magnitude(state)
    if magnitude <= settings.frame_epsilon:
        raise DegenerateFrameError(magnitude, settings.frame_epsilon)

    psi = state.amplitudes
    wx, wy = _frame_weights(angles)
    result = []
    for atom in atom_operators(state.n_atoms):
        x_op = sum(w * op for w, op in zip(wx, atom))
        y_op = sum(w * op for w, op in zip(wy, atom))
        result.append(
            (
                _mean(psi, x_op @ x_op) - _mean(psi, x_op) ** 2,
                _mean(psi, y_op @ y_op) - _mean(psi, y_op) ** 2,
            )
        )
    return result


def collective_rotated_variances(
    state: ProductSpaceState, angles: FrameAngles
) -> Tuple[float, float]:
    """Variances of the summed rotated operators Jx' = sum_i J_ix', Jy' = sum_i J_iy'."""
    psi = state.amplitudes
    wx, wy = _frame_weights(angles)
    ops = atom_operators(state.n_atoms)
    x_op = sum(w * atom[a] for atom in ops for a, w in enumerate(wx))
    y_op = sum(w * atom[a] for atom in ops for a, w in enumerate(wy))
    return (
        _mean(psi, x_op @ x_op) - _mean(psi, x_op) ** 2,
        _mean(psi, y_op @ y_op) - _mean(psi, y_op) ** 2,
    )


def separability_residual(state: ProductSpaceState) -> float:
    """Largest |<J_ia J_lb> - <J_ia><J_lb>| over all axis pairs and atom pairs."""
    ops = atom_operators(state.n_atoms)
    worst = 0.0
    for i, l in combinations(range(state.n_atoms), 2):
        worst = max(worst, float(np.max(np.abs(_pair_covariance(state.amplitudes, ops, i, l)))))
    logger.debug(f"Separability residual {worst:.3e} for N={state.n_atoms}")
    return worst
