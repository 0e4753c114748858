"""Optimal momentum cutoff for the electric-dipole atom-field coupling and its observables."""

from .atomic import ALPHA, DensityProfile, UnitSystem, form_factor, mean_square_dipole, read_profile_csv
from .cutoff import (
    CutoffFunction,
    EnergyFunctional,
    analytic_cutoff,
    energy_shift,
    minimize_on_grid,
    optimal_energy_shift,
)
from .interactions import (
    SpectrumTable,
    coulomb_tensor,
    gamma_tensor_asymptotic,
    gamma_tensor_exact,
    read_spectrum_csv,
    vdw_modified,
    vdw_standard,
)
from .photons import MediumSpec, medium_photon_density, photon_spectrum
from .quadrature import QuadResult, integrate_oscillatory, integrate_semi_infinite

__all__ = [
    "ALPHA", "DensityProfile", "UnitSystem", "form_factor", "mean_square_dipole", "read_profile_csv",
    "CutoffFunction", "EnergyFunctional", "analytic_cutoff", "energy_shift", "minimize_on_grid",
    "optimal_energy_shift", "SpectrumTable", "coulomb_tensor", "gamma_tensor_asymptotic",
    "gamma_tensor_exact", "read_spectrum_csv", "vdw_modified", "vdw_standard", "MediumSpec",
    "medium_photon_density", "photon_spectrum", "QuadResult", "integrate_oscillatory",
    "integrate_semi_infinite",
]
