"""Photon content of the dressed ground state."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .atomic import BOHR_RADIUS_CM, UnitSystem
from .cutoff import CutoffFunction
from .errors import DomainError
from .quadrature import DEFAULT_SMOOTH_REL, integrate_semi_infinite

PEAK_SEARCH_RANGE = (1e-6, 1e2)


@dataclass(frozen=True)
class PhotonSpectrum:
    """Photons per unit k, with total and the location of the maximum (k in 1/a)."""

    density: Callable
    total: float
    peak_k: float


@dataclass(frozen=True)
class MediumSpec:
    number_density: float  # atoms per cm^3
    per_atom_spectrum: PhotonSpectrum

    def __post_init__(self):
        if not self.number_density > 0:
            raise DomainError("number density must be positive")


def _peak(density: Callable) -> float:
    u = np.linspace(math.log(PEAK_SEARCH_RANGE[0]), math.log(PEAK_SEARCH_RANGE[1]), 241)
    vals = density(np.exp(u))
    i = int(np.argmax(vals))
    if vals[i] <= 0:
        return 0.0
    i = min(max(i, 1), u.size - 2)
    res = minimize_scalar(lambda x: -float(density(np.exp(x))), bracket=(u[i - 1], u[i], u[i + 1]),
                          method="golden", tol=1e-10)
    return float(math.exp(res.x))


def photon_spectrum(cutoff: CutoffFunction, d2: float, units: UnitSystem | None = None,
                    rel_tol: float = DEFAULT_SMOOTH_REL) -> PhotonSpectrum:
    """n(k) = d2 / (3 pi hbar c) * k f(k)^2, its integral and its peak."""
    if not d2 > 0:
        raise DomainError("mean-square dipole must be positive")
    units = units or UnitSystem()
    pref = d2 / (3 * math.pi * units.hbar_c)

    if cutoff.is_zero:
        return PhotonSpectrum(lambda k: np.zeros(np.shape(k)), 0.0, 0.0)

    def density(k):
        k = np.asarray(k, dtype=float)
        return pref * k * cutoff(k) ** 2

    total = integrate_semi_infinite(density, rel_tol=rel_tol).value
    return PhotonSpectrum(density, total, _peak(density))


def medium_photon_density(medium: MediumSpec) -> float:
    """Photons per cm^3 for a uniform medium of independent atoms."""
    return medium.number_density * medium.per_atom_spectrum.total


def per_bohr3(density_per_cm3: float) -> float:
    return density_per_cm3 * BOHR_RADIUS_CM ** 3


def frequency_distribution(spectrum: PhotonSpectrum, units: UnitSystem | None = None) -> Callable:
    """omega -> photons per unit angular frequency, n(omega / c) / c."""
    c = (units or UnitSystem()).speed_of_light
    dens = spectrum.density

    def dist(omega):
        return dens(np.asarray(omega, dtype=float) / c) / c

    return dist
