import sys
from pathlib import Path

import numpy as np
import pytest

# Add the project root to the Python path
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from backend.spin_algebra import from_amplitudes, make_sector  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def random_symmetric_state(rng):
    """Factory for random normalized states of the symmetric sector j = N/2."""

    def _make(n_atoms: int):
        sector = make_sector(n_atoms)
        amplitudes = rng.normal(size=sector.dim) + 1j * rng.normal(size=sector.dim)
        return from_amplitudes(sector, amplitudes, normalize=True)

    return _make
