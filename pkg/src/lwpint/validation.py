"""Fast oracle/invariant suite behind the `validate` CLI subcommand."""

from __future__ import annotations

import numpy as np

from .integrators import evolve, make_context, make_filters, twisted_integral
from .models import builtin_model, derive_symbols
from .oracles import dft_forward_naive, twisted_integral_quadrature
from .spectral import (
    SpectralGrid,
    SpectrumState,
    _wrap,
    forward_transform,
    inverse_transform,
    sobolev_norm,
)
from .experiments import default_initial_condition


def _random_band_state(grid: SpectralGrid, rng: np.random.Generator,
                       cutoff: int | None = None, mean: float = 0.3) -> SpectrumState:
    cutoff = grid.dealias_cutoff if cutoff is None else cutoff
    coeffs = np.zeros(grid.n_modes, dtype=complex)
    coeffs[0] = mean
    for k in range(1, cutoff + 1):
        value = (rng.normal() + 1j * rng.normal()) * 0.3 / (1 + k)
        coeffs[k] = value
        coeffs[-k] = np.conj(value)
    return SpectrumState(coeffs, grid)


def _check_round_trip() -> tuple[bool, str]:
    grid = SpectralGrid(16)
    rng = np.random.default_rng(7)
    samples = rng.normal(size=16)
    state = forward_transform(samples, grid)
    gap_f = np.max(np.abs(state.coeffs - _zero_nyquist(dft_forward_naive(samples, grid), grid)))
    gap_b = np.max(np.abs(inverse_transform(state) - samples_without_nyquist(samples, grid)))
    ok = gap_f <= 1e-13 and gap_b <= 1e-13
    return ok, f"forward gap {gap_f:.2e}, round-trip gap {gap_b:.2e}"


def _zero_nyquist(coeffs: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    out = np.array(coeffs)
    out[grid.n_modes // 2] = 0.0
    return out


def samples_without_nyquist(samples: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    """Project samples onto the representable band (Nyquist mode pinned)."""
    return inverse_transform(forward_transform(samples, grid))


def _check_twisted_oracle() -> tuple[bool, str]:
    grid = SpectralGrid(32)
    rng = np.random.default_rng(11)
    worst = 0.0
    for eps in (1.0, 0.5):
        model = builtin_model("bbm", eps)
        for _ in range(3):
            v = _random_band_state(grid, rng)
            fast = twisted_integral(v, 0.1, model)
            slow = twisted_integral_quadrature(v, 0.1, model)
            rel = (np.linalg.norm(fast.coeffs - slow.coeffs)
                   / max(np.linalg.norm(slow.coeffs), 1e-300))
            worst = max(worst, rel)
    return worst <= 1e-9, f"worst relative gap {worst:.2e}"


def _check_single_mode() -> tuple[bool, str]:
    grid = SpectralGrid(32)
    x = grid.points
    worst = 0.0
    for alpha, eps, tau in ((1.0, 0.5, 0.1), (1.0 / 6.0, 1.0, 0.2), (-0.7, 0.3, 0.05)):
        model = builtin_model("bbm", eps)
        model = type(model)(name="custom", g_l=model.g_l, g_q=model.g_q,
                            alpha=alpha, beta_l=2.0, beta_q=2.0, epsilon=eps)
        out = inverse_transform(twisted_integral(forward_transform(np.cos(x), grid),
                                                 tau, model))
        expected = (np.cos(2 * x) - np.cos(2 * x - 6 * alpha * tau * eps)) / (6 * alpha)
        worst = max(worst, float(np.max(np.abs(out - expected))))
    return worst <= 1e-12, f"worst closed-form gap {worst:.2e}"


def _check_filter_bounds() -> tuple[bool, str]:
    grid = SpectralGrid(256)
    ok = True
    for name in ("bbm", "kdv"):
        for eps in (1.0, 0.01):
            model = builtin_model(name, eps)
            k = grid.k_float
            gq = np.asarray(model.g_q(np.sqrt(eps) * k), float)
            d_l = derive_symbols(model, grid).d_l(k)
            for tau in (1.0, 0.01):
                psi_mq, psi_dl = make_filters(model, grid, tau)
                sym_q = np.abs(k * gq)
                sym_d = np.abs(k * gq * d_l)
                ok &= bool(np.all(tau * sym_q * psi_mq <= 1.0))
                ok &= bool(np.all(np.abs(psi_mq - 1.0) <= tau * sym_q))
                ok &= bool(np.all(tau * sym_d * psi_dl <= 1.0))
                ok &= bool(np.all(np.abs(psi_dl - 1.0) <= tau * sym_d))
    return ok, "mode-wise bounds hold exactly" if ok else "a bound is violated"


def _check_kdv_degeneracy() -> tuple[bool, str]:
    grid = SpectralGrid(256)
    worst = 0.0
    for eps in (1.0, 0.5, 0.1):
        model = builtin_model("kdv", eps)
        d_l = derive_symbols(model, grid).d_l(grid.k_float)
        worst = max(worst, float(np.max(np.abs(d_l))))
        _, psi_dl = make_filters(model, grid, 0.1)
        if not np.all(psi_dl == 1.0):
            return False, "psi filter for the defect is not identically 1"
    return worst <= 1e-14, f"max |d_l| = {worst:.2e}"


def _check_conservation() -> tuple[bool, str]:
    grid = SpectralGrid(64)
    model = builtin_model("bbm", 0.1)
    ctx = make_context(model, grid, 0.01)
    u0 = default_initial_condition(grid)
    u = evolve("lwp1", u0, 500, ctx)
    drift = abs(u.coeffs[0] - u0.coeffs[0])
    inverse_transform(u)  # raises on realness loss
    return drift <= 1e-13, f"zero-mode drift {drift:.2e} after 500 steps"


def _check_linear_exactness() -> tuple[bool, str]:
    grid = SpectralGrid(64)
    base = builtin_model("bbm", 0.1)
    model = type(base)(name="bbm-linear", g_l=base.g_l,
                       g_q=lambda xi: np.zeros_like(np.asarray(xi, float)),
                       alpha=base.alpha, beta_l=2.0, beta_q=0.0, epsilon=0.1)
    ctx = make_context(model, grid, 0.05)
    u0 = default_initial_condition(grid)
    n = 200
    u = evolve("lwp2", u0, n, ctx)
    phase = derive_symbols(model, grid).linear_phase(grid.k_float, n * 0.05)
    exact = _wrap(phase * u0.coeffs, grid)
    gap = sobolev_norm(_wrap(u.coeffs - exact.coeffs, grid), 0.0)
    return gap <= 1e-12, f"terminal gap vs exact propagator {gap:.2e}"


CHECKS = (
    ("transform round trip vs direct summation", _check_round_trip),
    ("twisted integral vs quadrature", _check_twisted_oracle),
    ("twisted integral single-mode closed form", _check_single_mode),
    ("filter bounds", _check_filter_bounds),
    ("kdv defect degeneracy", _check_kdv_degeneracy),
    ("zero-mode conservation and realness", _check_conservation),
    ("linear exactness", _check_linear_exactness),
)


def run_validation(printer=print) -> bool:
    """Run every check, print one pass/fail line each, return overall result."""
    all_ok = True
    for name, check in CHECKS:
        ok, detail = check()
        all_ok &= ok
        printer(f"{'PASS' if ok else 'FAIL'} - {name} ({detail})")
    return all_ok
