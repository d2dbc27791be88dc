"""Convergence sweeps, reference solutions and CSV persistence.

A sweep evolves one smooth initial state to the horizon T (fixed, or 1/eps)
for every (method, eps, tau) grid point, measures errors against a
cross-validated Lawson-RK4 reference, and emits rows in a deterministic
order.  Failed grid points degrade to rows with nan error fields; resolution
warnings go to a sidecar log, never into the CSV.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .integrators import evolve, make_context
from .models import DispersiveModel, builtin_model
from .spectral import (
    SpectralGrid,
    SpectrumState,
    _wrap,
    forward_transform,
    sobolev_norm,
)

log = logging.getLogger(__name__)

CSV_HEADER = "method,model,epsilon,tau,n_modes,t_final,l2_error,h1_error,mass_drift,wall_time_s"

# Relative slack when checking that a step count reproduces the horizon.
_DIVISIBILITY_RTOL = 1e-9

# L2 disagreement between the two reference integrators above which the
# reference solution is rejected.
_CROSS_CHECK_TOL = 1e-6

# Spectral-tail level of the reference above which a grid point is flagged
# as under-resolved.
_TAIL_GUARD = 1e-9

_MIN_REF_DIVISOR = 50


class PlanError(ValueError):
    """An experiment plan violates one of its invariants."""


class ReferenceMismatchError(RuntimeError):
    """The two structurally different reference integrators disagree."""


class InsufficientDataError(ValueError):
    """Not enough usable records for the requested fit."""


@dataclass(frozen=True)
class ExperimentPlan:
    """One error-vs-(eps, tau, method) study."""

    model: str
    epsilons: tuple[float, ...]
    taus: tuple[float, ...]
    methods: tuple[str, ...]
    n_modes: int = 128
    t_final_rule: str = "inverse-epsilon"   # or "fixed"
    t_final: float | None = None
    initial_condition: str = "default"
    ref_divisor: int = 50
    output: str | None = None

    def __post_init__(self) -> None:
        if not self.epsilons or not self.taus or not self.methods:
            raise PlanError("epsilons, taus and methods must all be nonempty")
        if self.t_final_rule not in ("inverse-epsilon", "fixed"):
            raise PlanError(f"unknown t_final rule {self.t_final_rule!r}")
        if self.t_final_rule == "fixed" and self.t_final is None:
            raise PlanError("fixed t_final rule requires a t_final value")
        if self.ref_divisor < _MIN_REF_DIVISOR:
            raise PlanError(
                f"ref_divisor must be >= {_MIN_REF_DIVISOR}, got {self.ref_divisor}"
            )
        for eps in self.epsilons:
            if not (0.0 < eps <= 1.0):
                raise PlanError(f"epsilon must lie in (0, 1], got {eps}")
            horizon = self.horizon(eps)
            for tau in list(self.taus) + [self.ref_tau]:
                n = round(horizon / tau)
                if n < 1 or abs(n * tau - horizon) > _DIVISIBILITY_RTOL * horizon:
                    raise PlanError(
                        f"tau = {tau!r} does not divide t_final = {horizon!r} "
                        f"(epsilon = {eps!r})"
                    )

    def horizon(self, epsilon: float) -> float:
        if self.t_final_rule == "fixed":
            return float(self.t_final)
        return 1.0 / epsilon

    @property
    def ref_tau(self) -> float:
        return min(self.taus) / self.ref_divisor


@dataclass(frozen=True)
class ConvergenceRecord:
    """One row of a sweep; `flag` is sidecar metadata, never serialized."""

    method: str
    model: str
    epsilon: float
    tau: float
    n_modes: int
    t_final: float
    l2_error: float
    h1_error: float
    mass_drift: float
    wall_time_s: float
    flag: str | None = None

    def key(self) -> str:
        return (f"method={self.method} model={self.model} "
                f"epsilon={self.epsilon:g} tau={self.tau:g}")

    def csv_row(self) -> str:
        fields = [self.method, self.model]
        for value in (self.epsilon, self.tau):
            fields.append(f"{value:.17g}")
        fields.append(str(self.n_modes))
        for value in (self.t_final, self.l2_error, self.h1_error,
                      self.mass_drift, self.wall_time_s):
            fields.append(f"{value:.17g}")
        return ",".join(fields)


@dataclass(frozen=True)
class ReferenceSolution:
    """Cross-validated terminal state plus its diagnostics."""

    state: SpectrumState
    cross_l2: float      # L2 gap between Lawson-RK4 and the LWP2 partner
    tail: float          # max |u_hat_k| beyond the dealias cutoff


def default_initial_condition(grid: SpectralGrid) -> SpectrumState:
    """Smooth data u0(x) = 1/2 + sin(x)/(2 + cos(x)).

    Nonzero mean (u_hat_0 = 1/2) so the mean-coupling term of the twisted
    integral is exercised; spectral tail below 1e-12 for N >= 64.
    """
    x = grid.points
    return forward_transform(0.5 + np.sin(x) / (2.0 + np.cos(x)), grid)


def _n_steps(horizon: float, tau: float) -> int:
    n = round(horizon / tau)
    if n < 1 or abs(n * tau - horizon) > _DIVISIBILITY_RTOL * horizon:
        raise PlanError(f"tau = {tau!r} does not divide t_final = {horizon!r}")
    return int(n)


def spectral_tail(state: SpectrumState) -> float:
    """Largest coefficient magnitude beyond the dealias cutoff."""
    outside = np.abs(state.grid.wavenumbers) > state.grid.dealias_cutoff
    return float(np.max(np.abs(state.coeffs[outside])))


def _initial_state(plan: ExperimentPlan, grid: SpectralGrid) -> SpectrumState:
    if plan.initial_condition != "default":
        raise PlanError(f"unknown initial condition {plan.initial_condition!r}")
    return default_initial_condition(grid)


def reference_solution(plan: ExperimentPlan, epsilon: float,
                       model_factory: Callable[[str, float], DispersiveModel] = builtin_model,
                       ) -> ReferenceSolution:
    """Lawson-RK4 terminal state at T, cross-checked against LWP2.

    Two structurally different integrators run at the same fine step; if
    they disagree by more than 1e-6 in L2 the reference is rejected.
    """
    grid = SpectralGrid(plan.n_modes)
    model = model_factory(plan.model, epsilon)
    horizon = plan.horizon(epsilon)
    tau_ref = plan.ref_tau
    n = _n_steps(horizon, tau_ref)
    ctx = make_context(model, grid, tau_ref)
    u0 = _initial_state(plan, grid)

    u_rk4 = evolve("lawson_rk4", u0, n, ctx)
    u_lwp2 = evolve("lwp2", u0, n, ctx)
    gap = _l2_gap(u_rk4, u_lwp2)
    if not np.isfinite(gap) or gap > _CROSS_CHECK_TOL:
        raise ReferenceMismatchError(
            f"reference integrators disagree by {gap:.3e} in L2 at "
            f"epsilon = {epsilon!r}, tau_ref = {tau_ref!r}"
        )
    return ReferenceSolution(state=u_rk4, cross_l2=gap, tail=spectral_tail(u_rk4))


def _l2_gap(a: SpectrumState, b: SpectrumState) -> float:
    return sobolev_norm(_wrap(a.coeffs - b.coeffs, a.grid), 0.0)


def _nan_record(method: str, plan: ExperimentPlan, epsilon: float, tau: float,
                horizon: float, wall: float, message: str) -> ConvergenceRecord:
    return ConvergenceRecord(
        method=method, model=plan.model, epsilon=epsilon, tau=tau,
        n_modes=plan.n_modes, t_final=horizon,
        l2_error=float("nan"), h1_error=float("nan"), mass_drift=float("nan"),
        wall_time_s=wall, flag=f"failed: {message}",
    )


def _run_point(plan: ExperimentPlan, method: str, epsilon: float, tau: float,
               reference: ReferenceSolution | None, ref_error: str | None,
               model_factory: Callable[[str, float], DispersiveModel] = builtin_model,
               ) -> ConvergenceRecord:
    horizon = plan.horizon(epsilon)
    started = time.perf_counter()
    if reference is None:
        return _nan_record(method, plan, epsilon, tau, horizon, 0.0,
                           ref_error or "reference unavailable")
    try:
        grid = SpectralGrid(plan.n_modes)
        model = model_factory(plan.model, epsilon)
        n = _n_steps(horizon, tau)
        ctx = make_context(model, grid, tau)
        u0 = _initial_state(plan, grid)
        u = evolve(method, u0, n, ctx)
        diff = _wrap(u.coeffs - reference.state.coeffs, grid)
        l2 = sobolev_norm(diff, 0.0)
        h1 = sobolev_norm(diff, 1.0)
        drift = abs(u.coeffs[0] - u0.coeffs[0])
        wall = time.perf_counter() - started
        if not (np.isfinite(l2) and np.isfinite(h1)):
            return _nan_record(method, plan, epsilon, tau, horizon, wall,
                               "non-finite terminal state")
        flag = None
        if reference.tail > _TAIL_GUARD:
            flag = f"under-resolved: tail {reference.tail:.3e}"
        return ConvergenceRecord(
            method=method, model=plan.model, epsilon=epsilon, tau=tau,
            n_modes=plan.n_modes, t_final=horizon,
            l2_error=l2, h1_error=h1, mass_drift=float(drift),
            wall_time_s=wall, flag=flag,
        )
    except Exception as exc:  # degrade gracefully; one blow-up must not void the sweep
        wall = time.perf_counter() - started
        return _nan_record(method, plan, epsilon, tau, horizon, wall, str(exc))


def _point_worker(args) -> ConvergenceRecord:
    return _run_point(*args)


def run_sweep(plan: ExperimentPlan, jobs: int = 1,
              model_factory: Callable[[str, float], DispersiveModel] = builtin_model,
              ) -> list[ConvergenceRecord]:
    """Run every (method, eps, tau) grid point of the plan.

    Records come back sorted by (method order, eps descending, tau
    descending) and are bit-identical across repeated runs and worker
    counts (wall_time_s excepted).
    """
    references: dict[float, ReferenceSolution | None] = {}
    ref_errors: dict[float, str | None] = {}
    for eps in sorted(set(plan.epsilons), reverse=True):
        try:
            references[eps] = reference_solution(plan, eps, model_factory)
            ref_errors[eps] = None
            log.info("reference ready: epsilon=%g cross_l2=%.3e tail=%.3e",
                     eps, references[eps].cross_l2, references[eps].tail)
        except Exception as exc:
            references[eps] = None
            ref_errors[eps] = str(exc)
            log.error("reference failed for epsilon=%g: %s", eps, exc)

    points = [
        (plan, method, eps, tau, references[eps], ref_errors[eps], model_factory)
        for method in plan.methods
        for eps in sorted(set(plan.epsilons), reverse=True)
        for tau in sorted(set(plan.taus), reverse=True)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_point_worker, points))
    else:
        records = [_point_worker(p) for p in points]
    for record in records:
        if record.flag:
            log.warning("%s: %s", record.key(), record.flag)
    return records


def write_records(records: Sequence[ConvergenceRecord], path: str) -> None:
    """Write the CSV (exact header, 17 significant digits) plus sidecar log.

    Flags (failures, under-resolution) go to `<path>.log`, one line per
    flagged record; the CSV itself carries only the declared columns.
    """
    lines = [CSV_HEADER] + [r.csv_row() for r in records]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    flagged = [r for r in records if r.flag]
    if flagged:
        with open(path + ".log", "w", encoding="utf-8") as fh:
            for r in flagged:
                fh.write(f"# {r.flag.split(':', 1)[0]}: {r.key()}: {r.flag}\n")


def fit_order(records: Sequence[ConvergenceRecord]) -> float:
    """Least-squares slope of log(l2_error) vs log(tau), smallest four taus.

    Callers pass records of a single (method, epsilon) pair.
    """
    usable = {}
    for r in records:
        if np.isfinite(r.l2_error) and r.l2_error > 0:
            usable[r.tau] = r.l2_error
    if len(usable) < 3:
        raise InsufficientDataError(
            f"need >= 3 distinct taus with positive errors, have {len(usable)}"
        )
    taus = sorted(usable)[:4]
    errs = [usable[t] for t in taus]
    slope = np.polyfit(np.log(taus), np.log(errs), 1)[0]
    return float(slope)


def epsilon_scaling(records: Sequence[ConvergenceRecord]) -> list[float]:
    """Consecutive error ratios across an eps-descending ladder at fixed tau."""
    usable = {}
    for r in records:
        if np.isfinite(r.l2_error):
            usable[r.epsilon] = r.l2_error
    if len(usable) < 2:
        raise InsufficientDataError(
            f"need >= 2 distinct epsilons, have {len(usable)}"
        )
    eps_desc = sorted(usable, reverse=True)
    return [usable[b] / usable[a] for a, b in zip(eps_desc[:-1], eps_desc[1:])]
