import math

import numpy as np
import pytest

from lwpint import (
    CSV_HEADER,
    ConvergenceRecord,
    ExperimentPlan,
    InsufficientDataError,
    PlanError,
    SpectralGrid,
    builtin_model,
    default_initial_condition,
    derive_symbols,
    epsilon_scaling,
    fit_order,
    forward_transform,
    reference_solution,
    run_sweep,
    sobolev_norm,
    spectral_tail,
    write_records,
)
from lwpint.models import DispersiveModel
from lwpint.spectral import SpectrumState


def _record(method="lwp1", model="bbm", epsilon=0.1, tau=0.1, l2=1.0,
            t_final=10.0):
    return ConvergenceRecord(method=method, model=model, epsilon=epsilon, tau=tau,
                             n_modes=128, t_final=t_final, l2_error=l2,
                             h1_error=l2, mass_drift=0.0, wall_time_s=0.0)


def _linear_factory(name, epsilon):
    base = builtin_model(name, epsilon)
    zero = lambda xi: np.zeros(np.shape(xi), dtype=float)
    return DispersiveModel(name=name, g_l=base.g_l, g_q=zero, alpha=base.alpha,
                           beta_l=base.beta_l, beta_q=0.0, epsilon=epsilon)


class TestInitialCondition:
    def test_mean_is_one_half(self):
        u0 = default_initial_condition(SpectralGrid(128))
        assert abs(u0.coeffs[0] - 0.5) < 1e-14

    def test_conjugate_symmetry(self):
        u0 = default_initial_condition(SpectralGrid(128))
        c = u0.coeffs
        pos = np.arange(1, 64)
        assert np.array_equal(c[pos], np.conj(c[-pos]))

    def test_norm_independent_of_resolution(self):
        norms = [sobolev_norm(default_initial_condition(SpectralGrid(n)), 0.0)
                 for n in (64, 128, 256)]
        assert abs(norms[0] - norms[1]) < 1e-12
        assert abs(norms[1] - norms[2]) < 1e-12

    def test_spectral_tail_negligible(self):
        u0 = default_initial_condition(SpectralGrid(128))
        assert spectral_tail(u0) < 1e-12


class TestPlanValidation:
    def test_accepts_clean_configuration(self):
        plan = ExperimentPlan(model="bbm", epsilons=(0.2, 0.1), taus=(0.1, 0.05),
                              methods=("lwp1",))
        assert plan.ref_tau == pytest.approx(0.001)
        assert plan.horizon(0.2) == pytest.approx(5.0)

    def test_non_dividing_tau_named_in_error(self):
        with pytest.raises(PlanError, match="0.3"):
            ExperimentPlan(model="bbm", epsilons=(0.1,), taus=(0.3,),
                           methods=("lwp1",))

    def test_reference_divisor_floor(self):
        with pytest.raises(PlanError, match="ref_divisor"):
            ExperimentPlan(model="bbm", epsilons=(0.1,), taus=(0.1,),
                           methods=("lwp1",), ref_divisor=10)

    def test_fixed_rule_requires_value(self):
        with pytest.raises(PlanError, match="t_final"):
            ExperimentPlan(model="bbm", epsilons=(0.1,), taus=(0.1,),
                           methods=("lwp1",), t_final_rule="fixed")

    def test_epsilon_domain(self):
        with pytest.raises(PlanError, match="epsilon"):
            ExperimentPlan(model="bbm", epsilons=(1.5,), taus=(0.1,),
                           methods=("lwp1",))


class TestReferenceSolution:
    def test_linear_variant_matches_exact_multiplier(self):
        plan = ExperimentPlan(model="bbm", epsilons=(0.5,), taus=(0.1,),
                              methods=("lwp1",), n_modes=64,
                              t_final_rule="fixed", t_final=2.0)
        ref = reference_solution(plan, 0.5, model_factory=_linear_factory)
        grid = SpectralGrid(64)
        model = _linear_factory("bbm", 0.5)
        phase = derive_symbols(model, grid).linear_phase(grid.k_float, 2.0)
        exact = phase * default_initial_condition(grid).coeffs
        assert np.max(np.abs(ref.state.coeffs - exact)) < 1e-12

    def test_cross_check_recorded(self):
        plan = ExperimentPlan(model="bbm", epsilons=(0.5,), taus=(0.025,),
                              methods=("lwp2",), n_modes=64,
                              t_final_rule="fixed", t_final=1.0)
        ref = reference_solution(plan, 0.5)
        assert ref.cross_l2 <= 1e-6

    def test_semigroup_consistency(self):
        # evolving to T/2 twice equals evolving to T once
        from lwpint import evolve, make_context

        grid = SpectralGrid(64)
        model = builtin_model("bbm", 0.5)
        tau_ref = 0.002
        ctx = make_context(model, grid, tau_ref)
        u0 = default_initial_condition(grid)
        u_half = evolve("lawson_rk4", u0, 500, ctx)
        u_twice = evolve("lawson_rk4", u_half, 500, ctx)
        u_once = evolve("lawson_rk4", u0, 1000, ctx)
        gap = sobolev_norm(SpectrumState(u_twice.coeffs - u_once.coeffs, grid), 0.0)
        assert gap < 1e-10


@pytest.fixture(scope="module")
def small_plan():
    return ExperimentPlan(model="bbm", epsilons=(0.5,), taus=(0.1, 0.05, 0.025),
                          methods=("lwp1", "lwp2"), n_modes=64,
                          t_final_rule="fixed", t_final=2.0)


@pytest.fixture(scope="module")
def records(small_plan):
    return run_sweep(small_plan)


class TestRunSweep:
    def test_emission_order(self, records):
        observed = [(r.method, r.tau) for r in records]
        assert observed == [
            ("lwp1", 0.1), ("lwp1", 0.05), ("lwp1", 0.025),
            ("lwp2", 0.1), ("lwp2", 0.05), ("lwp2", 0.025),
        ]

    def test_errors_monotone_in_tau(self, records):
        lwp1 = [r for r in records if r.method == "lwp1"]
        errs = [r.l2_error for r in sorted(lwp1, key=lambda r: -r.tau)]
        assert errs[0] > errs[1] > errs[2]

    def test_mass_drift_exactly_zero(self, records):
        for r in records:
            assert r.mass_drift == 0.0

    def test_determinism(self, small_plan, records):
        again = run_sweep(small_plan)
        for a, b in zip(records, again):
            assert a.l2_error == b.l2_error
            assert a.h1_error == b.h1_error
            assert a.mass_drift == b.mass_drift

    def test_parallel_matches_serial(self, small_plan, records):
        parallel = run_sweep(small_plan, jobs=2)
        for a, b in zip(records, parallel):
            assert a.l2_error == b.l2_error

    def test_linear_plan_errors_vanish(self):
        plan = ExperimentPlan(model="bbm", epsilons=(0.5,), taus=(0.2, 0.1),
                              methods=("lwp1", "lwp2"), n_modes=64,
                              t_final_rule="fixed", t_final=2.0)
        records = run_sweep(plan, model_factory=_linear_factory)
        for r in records:
            assert r.l2_error <= 1e-12

    def test_under_resolved_flagging(self):
        # N = 32 cannot hold the initial profile below the tail guard
        plan = ExperimentPlan(model="bbm", epsilons=(0.5,), taus=(0.025,),
                              methods=("lwp1",), n_modes=32,
                              t_final_rule="fixed", t_final=1.0)
        records = run_sweep(plan)
        assert records[0].flag is not None
        assert records[0].flag.startswith("under-resolved")
        assert math.isfinite(records[0].l2_error)


class TestCsv:
    def test_header_and_roundtrip(self, tmp_path):
        path = tmp_path / "out.csv"
        rec = _record(l2=1.2345678901234567e-5)
        write_records([rec], str(path))
        lines = path.read_text().strip().split("\n")
        assert lines[0] == CSV_HEADER
        fields = lines[1].split(",")
        assert fields[0] == "lwp1"
        assert float(fields[6]) == rec.l2_error  # 17 significant digits survive

    def test_nan_serialization(self, tmp_path):
        path = tmp_path / "out.csv"
        rec = ConvergenceRecord(method="lwp1", model="bbm", epsilon=0.1, tau=0.1,
                                n_modes=128, t_final=10.0, l2_error=float("nan"),
                                h1_error=float("nan"), mass_drift=float("nan"),
                                wall_time_s=0.1, flag="failed: blow-up")
        write_records([rec], str(path))
        lines = path.read_text().strip().split("\n")
        assert "nan" in lines[1]
        assert "#" not in path.read_text()
        sidecar = (path.parent / "out.csv.log").read_text()
        assert "failed" in sidecar

    def test_no_sidecar_without_flags(self, tmp_path):
        path = tmp_path / "clean.csv"
        write_records([_record()], str(path))
        assert not (path.parent / "clean.csv.log").exists()


class TestFits:
    def test_synthetic_slope_one(self):
        records = [_record(tau=t, l2=t) for t in (0.1, 0.05, 0.025, 0.0125)]
        assert fit_order(records) == pytest.approx(1.0, abs=1e-12)

    def test_synthetic_slope_two(self):
        records = [_record(tau=t, l2=3 * t * t) for t in (0.2, 0.1, 0.05, 0.025)]
        assert fit_order(records) == pytest.approx(2.0, abs=1e-12)

    def test_uses_smallest_four_taus(self):
        taus = [0.4, 0.2, 0.1, 0.05, 0.025]
        records = [_record(tau=t, l2=(t if t < 0.3 else 50.0)) for t in taus]
        assert fit_order(records) == pytest.approx(1.0, abs=1e-12)

    def test_insufficient_data(self):
        with pytest.raises(InsufficientDataError):
            fit_order([_record(tau=0.1), _record(tau=0.05)])

    def test_epsilon_scaling_synthetic(self):
        tau = 0.05
        records = [_record(epsilon=e, tau=tau, l2=tau * e, t_final=1 / e)
                   for e in (0.2, 0.1, 0.05)]
        ratios = epsilon_scaling(records)
        assert ratios == pytest.approx([0.5, 0.5])

    def test_epsilon_scaling_flat(self):
        records = [_record(epsilon=e, l2=1.0) for e in (0.2, 0.1)]
        assert epsilon_scaling(records) == pytest.approx([1.0])

    def test_epsilon_scaling_insufficient(self):
        with pytest.raises(InsufficientDataError):
            epsilon_scaling([_record(epsilon=0.1)])
