"""Dense collective-spin operators and states in the Dicke basis |j,m>, m = -j ... +j."""

import logging
from functools import lru_cache

import numpy as np

from .errors import QuantumNumberError, SectorMismatchError
from .models import CollectiveState, MomentTable, SpinOperator, SpinSector
from .wigner import wigner_d_matrix

logger = logging.getLogger(__name__)


def make_sector(n_atoms: int) -> SpinSector:
    if n_atoms < 1:
        raise QuantumNumberError(f"need at least one atom, got {n_atoms}")
    return SpinSector(two_j=n_atoms)


@lru_cache(maxsize=64)
def _ladder_elements(two_j: int) -> np.ndarray:
    # <m+1|J+|m> = sqrt(j(j+1) - m(m+1)) for m = -j ... j-1
    j = two_j / 2
    m = np.arange(-two_j, two_j, 2) / 2
    return np.sqrt(j * (j + 1) - m * (m + 1))


def build_jz(sector: SpinSector) -> SpinOperator:
    return SpinOperator(sector=sector, matrix=np.diag(sector.m_values))


def build_jplus(sector: SpinSector) -> SpinOperator:
    return SpinOperator(sector=sector, matrix=np.diag(_ladder_elements(sector.two_j), k=-1))


def build_jminus(sector: SpinSector) -> SpinOperator:
    return SpinOperator(sector=sector, matrix=np.diag(_ladder_elements(sector.two_j), k=1))


def build_jx(sector: SpinSector) -> SpinOperator:
    plus = build_jplus(sector).matrix
    return SpinOperator(sector=sector, matrix=(plus + plus.T) / 2)


def build_jy(sector: SpinSector) -> SpinOperator:
    plus = build_jplus(sector).matrix
    return SpinOperator(sector=sector, matrix=(plus - plus.T) / 2j)


def build_jsq(sector: SpinSector) -> SpinOperator:
    jx, jy, jz = (build_jx(sector).matrix, build_jy(sector).matrix, build_jz(sector).matrix)
    return SpinOperator(sector=sector, matrix=jx @ jx + jy @ jy + jz @ jz)


def commutator(a: SpinOperator, b: SpinOperator) -> SpinOperator:
    if a.sector != b.sector:
        raise SectorMismatchError(f"2j={a.sector.two_j} vs 2j={b.sector.two_j}")
    return SpinOperator(sector=a.sector, matrix=a.matrix @ b.matrix - b.matrix @ a.matrix)


def from_amplitudes(sector: SpinSector, amplitudes, normalize: bool = False) -> CollectiveState:
    amplitudes = np.asarray(amplitudes, dtype=np.complex128)
    if normalize:
        norm = np.linalg.norm(amplitudes)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        amplitudes = amplitudes / norm
    return CollectiveState(sector=sector, amplitudes=amplitudes)


def dicke_state(sector: SpinSector, two_m: int) -> CollectiveState:
    amplitudes = np.zeros(sector.dim, dtype=np.complex128)
    amplitudes[sector.index_of(two_m)] = 1.0
    return CollectiveState(sector=sector, amplitudes=amplitudes)


def coherent_state(sector: SpinSector, theta: float, phi: float) -> CollectiveState:
    """Coherent spin state with mean spin j (sin t cos p, sin t sin p, cos t)."""
    tilted = rotate_y(dicke_state(sector, sector.two_j), theta)
    phases = np.exp(-1j * sector.m_values * phi)
    return from_amplitudes(sector, tilted.amplitudes * phases, normalize=True)


def expectation(state: CollectiveState, op: SpinOperator) -> complex:
    if state.sector != op.sector:
        raise SectorMismatchError(
            f"state in 2j={state.sector.two_j}, operator in 2j={op.sector.two_j}"
        )
    return complex(np.vdot(state.amplitudes, op.matrix @ state.amplitudes))


def moments(state: CollectiveState) -> MomentTable:
    sector = state.sector
    psi = state.amplitudes
    x_psi = build_jx(sector).matrix @ psi
    y_psi = build_jy(sector).matrix @ psi
    z_psi = build_jz(sector).matrix @ psi

    def _mean(v: np.ndarray) -> float:
        return float(np.vdot(psi, v).real)

    def _sym(u: np.ndarray, v: np.ndarray) -> float:
        # <AB + BA> = 2 Re <A psi | B psi> for Hermitian A, B
        return float(2.0 * np.vdot(u, v).real)

    return MomentTable(
        jx=_mean(x_psi),
        jy=_mean(y_psi),
        jz=_mean(z_psi),
        jx2=float(np.vdot(x_psi, x_psi).real),
        jy2=float(np.vdot(y_psi, y_psi).real),
        jz2=float(np.vdot(z_psi, z_psi).real),
        xy_sym=_sym(x_psi, y_psi),
        xz_sym=_sym(x_psi, z_psi),
        yz_sym=_sym(y_psi, z_psi),
    )


def rotate_y(state: CollectiveState, beta: float) -> CollectiveState:
    """Apply exp(-i beta J_y) through the Wigner d-matrix."""
    d = wigner_d_matrix(state.sector.two_j, float(beta))
    rotated = d @ state.amplitudes
    # renormalize away the last ulp so the result passes the norm check
    return from_amplitudes(state.sector, rotated, normalize=True)
