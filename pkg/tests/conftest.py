import numpy as np
import pytest

from lwpint import SpectralGrid, SpectrumState


def random_band_state(grid: SpectralGrid, rng: np.random.Generator,
                      cutoff: int | None = None, mean: float = 0.3) -> SpectrumState:
    """Random conjugate-symmetric state supported on |k| <= cutoff."""
    cutoff = grid.dealias_cutoff if cutoff is None else cutoff
    coeffs = np.zeros(grid.n_modes, dtype=complex)
    coeffs[0] = mean
    for k in range(1, cutoff + 1):
        value = (rng.normal() + 1j * rng.normal()) * 0.3 / (1 + k)
        coeffs[k] = value
        coeffs[-k] = np.conj(value)
    return SpectrumState(coeffs, grid)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(2024)


@pytest.fixture
def grid32() -> SpectralGrid:
    return SpectralGrid(32)


@pytest.fixture
def grid64() -> SpectralGrid:
    return SpectralGrid(64)
