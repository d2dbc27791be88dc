"""Brute-force reference computations used by the validation suite and tests.

Nothing here shares an algorithm with the fast paths it checks: transforms
are naive O(N^2) summations, the squared product is an explicit coefficient
convolution, and the twisted integral is integrated numerically with
composite Gauss-Legendre panels sized to resolve the fastest resonant phase.
"""

from __future__ import annotations

import numpy as np

from .models import DispersiveModel
from .spectral import SpectralGrid, SpectrumState, _wrap, dealiased_square


def dft_forward_naive(samples: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    """Direct summation u_hat_k = (1/N) sum_j u_j exp(-i k x_j)."""
    x = grid.points
    k = grid.k_float
    kernel = np.exp(-1j * np.outer(k, x))
    return kernel @ np.asarray(samples, dtype=float) / grid.n_modes


def dft_inverse_naive(coeffs: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    """Direct summation u_j = sum_k u_hat_k exp(i k x_j)."""
    x = grid.points
    k = grid.k_float
    kernel = np.exp(1j * np.outer(x, k))
    return kernel @ np.asarray(coeffs, dtype=complex)


def convolution_square_naive(state: SpectrumState) -> np.ndarray:
    """Exact coefficient convolution sum_{l+m=k} u_hat_l u_hat_m.

    Returned without any truncation; callers apply whatever band policy the
    path under test uses.
    """
    grid = state.grid
    n = grid.n_modes
    k = grid.wavenumbers
    out = np.zeros(n, dtype=complex)
    index = {int(kk): i for i, kk in enumerate(k)}
    for i, ki in enumerate(k):
        acc = 0.0 + 0.0j
        for j, lj in enumerate(k):
            m = int(ki) - int(lj)
            jm = index.get(m)
            if jm is not None:
                acc += state.coeffs[j] * state.coeffs[jm]
        out[i] = acc
    return out


def twisted_integral_quadrature(v: SpectrumState, tau: float, model: DispersiveModel,
                                nodes_per_panel: int = 16,
                                panels: int | None = None) -> SpectrumState:
    """Composite Gauss-Legendre quadrature of the twisted Duhamel integral.

        eps dx  int_0^tau exp(s alpha eps dx^3) [exp(-s alpha eps dx^3) v]^2 ds

    The integrand oscillates no faster than 3|alpha| eps c^3/4 with c the
    dealias cutoff, so the panel count scales with tau * eps * c^3 and each
    16-node panel resolves its <= 8 radians of phase to far below 1e-12.
    """
    grid = v.grid
    eps = model.epsilon
    alpha = model.alpha
    c = grid.dealias_cutoff
    if panels is None:
        rate = 3.0 * abs(alpha) * eps * c ** 3 / 4.0
        panels = max(2, int(np.ceil(tau * rate / 8.0)))

    nodes, weights = np.polynomial.legendre.leggauss(nodes_per_panel)
    k = grid.k_float
    ik = 1j * k
    k3 = k ** 3
    total = np.zeros(grid.n_modes, dtype=complex)
    edges = np.linspace(0.0, tau, panels + 1)
    for a, b in zip(edges[:-1], edges[1:]):
        jac = 0.5 * (b - a)
        s_nodes = jac * nodes + 0.5 * (a + b)
        for s, wgt in zip(s_nodes, weights):
            back = np.exp(1j * s * alpha * eps * k3)   # exp(-s alpha eps dx^3)
            sq = dealiased_square(_wrap(back * v.coeffs, grid))
            integrand = eps * (ik * (np.conj(back) * sq.coeffs))
            total += (wgt * jac) * integrand
    return _wrap(total, grid)
