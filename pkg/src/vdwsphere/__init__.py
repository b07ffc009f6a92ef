"""Retarded van der Waals pair energies and dilute-sphere Casimir energy.

Natural units hbar = c = 1 throughout: lengths in one arbitrary unit,
energies in hbar*c per that unit.  The command-line interface can rescale
outputs to physical units at formatting time.
"""

from .geometry import SphereSpec, overlap_volume, pair_measure_integral, sphere_form_factor
from .kernels import (
    THETA_TRANSVERSE,
    CouplingEigenvalues,
    KernelPair,
    coupling_eigenvalues,
    k_space_kernels,
    oracle_inverse_transform,
    r_space_kernels,
    squared_invariant,
)
from .matsubara import (
    ConvergenceError,
    SumResult,
    ThermalState,
    matsubara_sum,
    oscillator_sum_closed,
    zero_T_integral,
)
from .numerics import (
    FitError,
    FitResult,
    QuadratureError,
    QuadratureResult,
    integrate_adaptive,
    linear_fit,
    richardson_extrapolate,
)
from .pair_energy import (
    PAIR_LAW_COEFF,
    Medium,
    PairEnergy,
    damped_pair_law,
    kspace_pair_energy,
    kspace_pair_energy_lambda0,
    pair_energy_T0,
    pair_energy_T0_numeric,
    pair_free_energy,
)
from .sphere_energy import (
    EXPONENTIAL_BASIS_DEFAULT,
    Cutoff,
    DielectricState,
    EnergyBreakdown,
    Exponential,
    HardCore,
    SelfEnergy,
    decompose_fit,
    dilute_medium,
    epsilon_relation,
    exponential_sweep,
    finite_part_theory,
    fit_exponential_sweep,
    hardcore_breakdown_analytic,
    hardcore_sweep,
    self_energy,
    sphere_energy_kspace,
    sphere_energy_rspace,
)

__version__ = "0.1.0"

__all__ = [
    "CouplingEigenvalues", "KernelPair", "THETA_TRANSVERSE",
    "coupling_eigenvalues", "k_space_kernels", "oracle_inverse_transform",
    "r_space_kernels", "squared_invariant",
    "ConvergenceError", "SumResult", "ThermalState", "matsubara_sum",
    "oscillator_sum_closed", "zero_T_integral",
    "FitError", "FitResult", "QuadratureError", "QuadratureResult",
    "integrate_adaptive", "linear_fit", "richardson_extrapolate",
    "SphereSpec", "overlap_volume", "pair_measure_integral", "sphere_form_factor",
    "PAIR_LAW_COEFF", "Medium", "PairEnergy", "damped_pair_law",
    "kspace_pair_energy", "kspace_pair_energy_lambda0", "pair_energy_T0",
    "pair_energy_T0_numeric", "pair_free_energy",
    "EXPONENTIAL_BASIS_DEFAULT", "Cutoff", "DielectricState", "EnergyBreakdown",
    "Exponential", "HardCore", "SelfEnergy", "decompose_fit", "dilute_medium",
    "epsilon_relation", "exponential_sweep", "finite_part_theory",
    "fit_exponential_sweep", "hardcore_breakdown_analytic", "hardcore_sweep",
    "self_energy", "sphere_energy_kspace", "sphere_energy_rspace",
    "__version__",
]
