"""Classical Lawson (integrating-factor) baselines.

lawson_euler_step is the standard first-order exponential integrator used
for comparison; lawson_rk4_step is the fourth-order reference-solution
generator.  Both apply the linear flow exactly as a multiplier, conserve the
zero mode, and share the 2/3-rule dealiasing policy with the LWP steps.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .integrators import StepContext
from .spectral import SpectrumState, _square_kernel, _wrap


def _lawson_euler_arr(u: np.ndarray, ctx: StepContext) -> np.ndarray:
    sq = _square_kernel(u, ctx.grid)
    return ctx.prop * (u - (ctx.tau * ctx.model.epsilon) * (ctx.dx_mq * sq))


def lawson_euler_step(u: SpectrumState, ctx: StepContext) -> SpectrumState:
    """u+ = P_tau [u - tau eps dx g_q(sqrt(eps) dx) (u*u)], square dealiased."""
    return _wrap(_lawson_euler_arr(u.coeffs, ctx), u.grid)


@lru_cache(maxsize=64)
def _half_step_phase(ctx: StepContext) -> np.ndarray:
    # E(tau/2) = symbol of exp((tau/2) dx g_l(sqrt(eps) dx))
    k = ctx.grid.k_float
    g_l = np.asarray(ctx.model.g_l(np.sqrt(ctx.model.epsilon) * k), dtype=float)
    return np.exp(0.5j * ctx.tau * k * g_l)


def _lawson_rk4_arr(w0: np.ndarray, ctx: StepContext) -> np.ndarray:
    grid = ctx.grid
    tau = ctx.tau
    eps = ctx.model.epsilon
    e_half = _half_step_phase(ctx)
    e_half_inv = np.conj(e_half)
    e_full_inv = ctx.prop          # E(-tau)
    e_full = np.conj(ctx.prop)

    def rhs(w, e_s, e_s_inv):
        sq = _square_kernel(e_s_inv * w, grid)
        return -eps * (e_s * (ctx.dx_mq * sq))

    k1 = -eps * (ctx.dx_mq * _square_kernel(w0, grid))
    k2 = rhs(w0 + (0.5 * tau) * k1, e_half, e_half_inv)
    k3 = rhs(w0 + (0.5 * tau) * k2, e_half, e_half_inv)
    k4 = rhs(w0 + tau * k3, e_full, e_full_inv)
    w1 = w0 + (tau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return e_full_inv * w1


def lawson_rk4_step(u: SpectrumState, ctx: StepContext) -> SpectrumState:
    """Classical four-stage Runge-Kutta on the twisted variable.

    With w(s) = exp(s dx g_l(sqrt(eps) dx)) u(t_n + s) the equation becomes

        w'(s) = -eps exp(s dx g_l) dx g_q [exp(-s dx g_l) w]^2,

    which is non-stiff; the stages evaluate the propagators exactly and the
    result is untwisted at s = tau.
    """
    return _wrap(_lawson_rk4_arr(u.coeffs, ctx), u.grid)
