"""Long-wave-preserving pseudo-spectral integrators on the torus."""

from .spectral import (
    IMAG_RESIDUE_TOL,
    RealnessError,
    SpectralGrid,
    SpectrumState,
    SymbolError,
    antiderivative,
    apply_multiplier,
    dealiased_product,
    dealiased_square,
    forward_transform,
    inverse_transform,
    sobolev_norm,
)
from .models import (
    DifferentiationError,
    DispersiveModel,
    OperatorSymbols,
    ValidationReport,
    builtin_model,
    derive_symbols,
    long_wave_alpha,
    validate_assumptions,
)
from .integrators import (
    StepContext,
    evolve,
    lwp1_step,
    lwp2_step,
    make_context,
    make_filters,
    step,
    twisted_integral,
)
from .baselines import lawson_euler_step, lawson_rk4_step
from .experiments import (
    CSV_HEADER,
    ConvergenceRecord,
    ExperimentPlan,
    InsufficientDataError,
    PlanError,
    ReferenceMismatchError,
    ReferenceSolution,
    default_initial_condition,
    epsilon_scaling,
    fit_order,
    reference_solution,
    run_sweep,
    spectral_tail,
    write_records,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
