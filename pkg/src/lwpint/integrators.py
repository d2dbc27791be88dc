"""Long-wave-preserving (LWP) time steps.

Both schemes advance the equation in its mild form with the quadratic
Duhamel term evaluated in closed form.  Writing P_t for the exact linear
propagator exp(-t dx g_l(sqrt(eps) dx)) and I(tau, eps, v) for the twisted
integral

    I = eps dx  int_0^tau exp(s alpha eps dx^3) [exp(-s alpha eps dx^3) v]^2 ds
      = 1/(3 alpha) * [ exp(tau alpha eps dx^3) (exp(-tau alpha eps dx^3) V)^2
                        - V^2 ]  +  2 eps tau v_hat_0 dx v,     V = dx^{-1} v,

the first-order step is

    u+ = P_tau [ u - g_q(sqrt(eps) dx) I(tau, eps, u) ].

The second-order step adds three filtered tau^2 corrections built from the
defect multiplier D_L = i d_l(k); see lwp2_step.  The closed form above is
an identity, not an expansion: the k = 0 output mode cancels exactly and the
zero mode of the solution is conserved to the last bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import DispersiveModel, derive_symbols
from .spectral import (
    SpectralGrid,
    SpectrumState,
    _banded_samples,
    _fft_banded,
    _square_kernel,
    _wrap,
)

# |alpha| below this switches the twisted integral to its analytic
# alpha -> 0 limit, eps*tau*dx(v^2).
ALPHA_DEGENERATE = 1e-12

_MEAN_MODE_GUARD = 1e-9


def _hermitian(values: np.ndarray) -> np.ndarray:
    """Force multiplier(-k) = conj(multiplier(k)) bit-exactly."""
    n = values.shape[0]
    out = np.array(values, dtype=np.complex128)
    pos = np.arange(1, n // 2)
    out[-pos] = np.conj(out[pos])
    return out


@dataclass(frozen=True, eq=False)
class StepContext:
    """Immutable per-(model, grid, tau) bundle of precomputed multipliers.

    Shareable across threads/processes; steps are pure functions of
    (state, context).
    """

    model: DispersiveModel
    grid: SpectralGrid
    tau: float
    prop: np.ndarray        # exp(-i tau k g_l(xi)), the linear propagator
    airy_fwd: np.ndarray    # symbol of exp(+tau alpha eps dx^3)
    airy_bwd: np.ndarray    # symbol of exp(-tau alpha eps dx^3)
    mq: np.ndarray          # g_q(xi)
    dx_mq: np.ndarray       # i k g_q(xi)
    dl: np.ndarray          # i d_l(k)
    psi_mq: np.ndarray
    psi_dl: np.ndarray


def make_filters(model: DispersiveModel, grid: SpectralGrid,
                 tau: float) -> tuple[np.ndarray, np.ndarray]:
    """Stabilising filters 1/(1 + tau|symbol|) for the tau^2 corrections.

    Mode by mode both requirements hold exactly: tau*|symbol|*psi <= 1 and
    |psi - 1| <= tau*|symbol|, where the symbol is k*g_q(xi) for the first
    filter and k*g_q(xi)*d_l(k) for the second.
    """
    k = grid.k_float
    xi = np.sqrt(model.epsilon) * k
    gq = np.asarray(model.g_q(xi), dtype=float)
    d_l = derive_symbols(model, grid).d_l(k)
    psi_mq = 1.0 / (1.0 + tau * np.abs(k * gq))
    psi_dl = 1.0 / (1.0 + tau * np.abs(k * gq * d_l))
    return psi_mq, psi_dl


def make_context(model: DispersiveModel, grid: SpectralGrid, tau: float) -> StepContext:
    """Precompute every multiplier a step needs at step size tau."""
    if tau <= 0:
        raise ValueError(f"tau must be positive, got {tau}")
    k = grid.k_float
    eps = model.epsilon
    xi = np.sqrt(eps) * k
    gq = np.asarray(model.g_q(xi), dtype=float)
    symbols = derive_symbols(model, grid)

    prop = _hermitian(symbols.linear_phase(k, tau))
    airy_fwd = _hermitian(np.exp(-1j * tau * model.alpha * eps * k ** 3))
    psi_mq, psi_dl = make_filters(model, grid, tau)
    return StepContext(
        model=model,
        grid=grid,
        tau=float(tau),
        prop=prop,
        airy_fwd=airy_fwd,
        airy_bwd=np.conj(airy_fwd),
        mq=gq,
        dx_mq=1j * (k * gq),
        dl=1j * symbols.d_l(k),
        psi_mq=psi_mq,
        psi_dl=psi_dl,
    )


def _antiderivative_arr(coeffs: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    ik = 1j * grid.k_float
    ik[0] = 1.0
    out = coeffs / ik
    out[0] = 0.0
    return out


def _twisted_core(v: np.ndarray, grid: SpectralGrid, tau: float, eps: float,
                  alpha: float, airy_fwd: np.ndarray,
                  airy_bwd: np.ndarray) -> np.ndarray:
    ik = 1j * grid.k_float

    if abs(alpha) < ALPHA_DEGENERATE:
        return (eps * tau) * (ik * _square_kernel(v, grid))

    w = _antiderivative_arr(v, grid)
    s0 = _square_kernel(w, grid)
    s1 = _square_kernel(airy_bwd * w, grid)
    coeffs = (airy_fwd * s1 - s0) / (3.0 * alpha)
    coeffs += (2.0 * eps * tau * v[0]) * (grid.dealias_mask * (ik * v))

    # The two squared terms cancel mode 0 of the closed form analytically;
    # anything left is rounding, measured against the size of the squares.
    scale = max(1.0, abs(s0[0]) / abs(3.0 * alpha))
    assert abs(coeffs[0]) <= _MEAN_MODE_GUARD * scale, (
        f"twisted-integral zero mode {coeffs[0]!r} fails cancellation"
    )
    coeffs[0] = 0.0
    return coeffs


def twisted_integral(v: SpectrumState, tau: float, model: DispersiveModel) -> SpectrumState:
    """Closed-form twisted Duhamel integral I(tau, eps, v).

    Exact (not asymptotic) identity for the dealiased discretisation; for
    |alpha| < 1e-12 the analytic limit eps*tau*dx(v^2) is returned instead.
    The k = 0 output mode is exactly zero.
    """
    grid = v.grid
    airy_fwd = _hermitian(
        np.exp(-1j * tau * model.alpha * model.epsilon * grid.k_float ** 3)
    )
    coeffs = _twisted_core(v.coeffs, grid, tau, model.epsilon, model.alpha,
                           airy_fwd, np.conj(airy_fwd))
    return _wrap(coeffs, grid)


def _lwp1_arr(u: np.ndarray, ctx: StepContext) -> np.ndarray:
    tw = _twisted_core(u, ctx.grid, ctx.tau, ctx.model.epsilon, ctx.model.alpha,
                       ctx.airy_fwd, ctx.airy_bwd)
    return ctx.prop * (u - ctx.mq * tw)


def lwp1_step(u: SpectrumState, ctx: StepContext) -> SpectrumState:
    """One first-order LWP step: u+ = P_tau [u - g_q(sqrt(eps) dx) I(tau, eps, u)]."""
    return _wrap(_lwp1_arr(u.coeffs, ctx), u.grid)


def _lwp2_arr(u: np.ndarray, ctx: StepContext) -> np.ndarray:
    grid = ctx.grid
    tau = ctx.tau
    eps = ctx.model.epsilon
    base = _lwp1_arr(u, ctx)

    u_phys = _banded_samples(u, grid)
    sq = _fft_banded(u_phys * u_phys, grid)

    inner = ctx.psi_mq * (ctx.dx_mq * sq)
    cross1 = _fft_banded(u_phys * _banded_samples(inner, grid), grid)
    t1 = (tau * tau * eps * eps) * (ctx.dx_mq * (ctx.psi_mq * cross1))

    t2 = (-0.5 * tau * tau * eps) * (ctx.dx_mq * (ctx.psi_dl * (ctx.dl * sq)))

    cross2 = _fft_banded(u_phys * _banded_samples(ctx.dl * u, grid), grid)
    t3 = (tau * tau * eps) * (ctx.dx_mq * (ctx.psi_dl * cross2))

    return base + t1 + t2 + t3


def lwp2_step(u: SpectrumState, ctx: StepContext) -> SpectrumState:
    """One second-order LWP step.

    Adds to lwp1_step the filtered corrections

        + tau^2 eps^2 dx g_q psi_mq ( u * psi_mq dx g_q (u*u) )
        - tau^2/2 eps  dx g_q psi_dl D_L (u*u)
        + tau^2   eps  dx g_q psi_dl ( u * D_L u ),

    with every product dealiased in physical space and every named operator
    a Fourier multiplier.  All three corrections vanish on constants and at
    k = 0, so zero-mode conservation carries over from the first-order step.
    """
    return _wrap(_lwp2_arr(u.coeffs, ctx), u.grid)


def step(method: str, u: SpectrumState, ctx: StepContext) -> SpectrumState:
    """Dispatch one step of the named method."""
    try:
        fn = _step_functions()[method]
    except KeyError:
        known = ", ".join(sorted(_step_functions()))
        raise ValueError(f"unknown method {method!r}; known methods: {known}") from None
    return fn(u, ctx)


def evolve(method: str, u0: SpectrumState, n_steps: int, ctx: StepContext) -> SpectrumState:
    """Advance n_steps steps of the named method; n_steps = 0 returns u0."""
    if n_steps < 0:
        raise ValueError("n_steps must be nonnegative")
    fn = _array_steppers().get(method)
    if fn is None:
        known = ", ".join(sorted(_array_steppers()))
        raise ValueError(f"unknown method {method!r}; known methods: {known}")
    u = u0.coeffs
    for _ in range(n_steps):
        u = fn(u, ctx)
    return _wrap(u, u0.grid)


def _step_functions():
    from .baselines import lawson_euler_step, lawson_rk4_step

    return {
        "lwp1": lwp1_step,
        "lwp2": lwp2_step,
        "lawson_euler": lawson_euler_step,
        "lawson_rk4": lawson_rk4_step,
    }


def _array_steppers():
    from .baselines import _lawson_euler_arr, _lawson_rk4_arr

    return {
        "lwp1": _lwp1_arr,
        "lwp2": _lwp2_arr,
        "lawson_euler": _lawson_euler_arr,
        "lawson_rk4": _lawson_rk4_arr,
    }
