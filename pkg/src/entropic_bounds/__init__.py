"""Entanglement-dependent entropic uncertainty bounds for qubits with quantum memory."""

__version__ = "0.1.0"

from .analysis import (
    MinimizationResult,
    Regime,
    boundary_curve,
    minimize_conditional_sum,
    proposition_gap,
    proposition_slope_origin,
    verify_bounds,
    verify_proposition,
)
from .bounds import (
    BoundSet,
    all_bounds,
    analytic_min_tsallis,
    analytic_min_vn,
    bound_bccrr,
    bound_deutsch,
    bound_kpp_tsallis,
    bound_maj2,
    bound_mixed_vn,
    bound_mu,
    bound_state_dependent,
    boundary_condition,
    kpp_coefficient,
)
from .entropy import (
    Spectrum,
    binary_shannon,
    conditional_tsallis,
    eta,
    eta_q,
    tsallis_entropy,
    tsallis_point,
)
from .errors import DomainError, InvalidOrderError, SpectrumError
from .keyrate import KeyRateInputs, key_rate_for_scenario, key_rate_lower_bound, positive_key
from .scenario import (
    EigenPair,
    Scenario,
    conditional_sum,
    overlap_c,
    post_measurement_eigs,
    rotation,
    schmidt_conditional_entropy,
)
