"""Two-atom dipole couplings and the van der Waals potentials built from them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .atomic import _read_csv_columns
from .cutoff import CutoffFunction
from .errors import DomainError, EmptySpectrum, NonPositiveGap, ZeroSeparation
from .quadrature import DEFAULT_OSCILLATORY_REL, integrate_oscillatory

# squared Frobenius norms of the angular factors (delta - 3 xx) and (4 xx - delta)
COULOMB_ANGULAR_WEIGHT = 6
MODIFIED_ANGULAR_WEIGHT = 11


@dataclass(frozen=True)
class InteractionTensor:
    separation: np.ndarray
    matrix: np.ndarray

    @property
    def distance(self) -> float:
        return float(np.linalg.norm(self.separation))


@dataclass(frozen=True)
class SpectrumTable:
    """Excitation energies E_b - E_0 (e^2/a) and |<b|d_z|g>|^2 (e^2 a^2)."""

    excitation_energy: np.ndarray
    dz_squared: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.excitation_energy, dtype=float)
        d = np.asarray(self.dz_squared, dtype=float)
        object.__setattr__(self, "excitation_energy", e)
        object.__setattr__(self, "dz_squared", d)
        if e.shape != d.shape or e.ndim != 1:
            raise DomainError("spectrum columns must be 1-d and of equal length")
        if e.size == 0:
            raise EmptySpectrum("spectrum table is empty")
        if np.any(e <= 0):
            raise NonPositiveGap("excitation energies must be strictly positive")
        if np.any(d < 0):
            raise DomainError("squared dipole elements must be non-negative")

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[float, float]]) -> "SpectrumTable":
        if len(pairs) == 0:
            raise EmptySpectrum("spectrum table is empty")
        e, d = zip(*pairs)
        return cls(np.array(e), np.array(d))

    def to_csv(self) -> str:
        lines = ["excitation_energy,dz_squared"]
        lines += [f"{e:.12g},{d:.12g}" for e, d in zip(self.excitation_energy, self.dz_squared)]
        return "\n".join(lines) + "\n"


def read_spectrum_csv(path_or_text) -> SpectrumTable:
    e, d = _read_csv_columns(path_or_text, ("excitation_energy", "dz_squared"))
    return SpectrumTable(e, d)


def _unit(separation):
    x = np.asarray(separation, dtype=float).reshape(3)
    R = float(np.linalg.norm(x))
    if not R > 0:
        raise ZeroSeparation("atoms must be separated")
    return x, R, x / R


def coulomb_tensor(separation) -> InteractionTensor:
    """g_ij = R^-3 (delta_ij - 3 x_i x_j)."""
    x, R, u = _unit(separation)
    return InteractionTensor(x, (np.eye(3) - 3.0 * np.outer(u, u)) / R ** 3)


def coupling_length(d2: float, lambda_c: float) -> float:
    """gamma = 16 d2 / (3 pi lc), the length setting the strength of the R^-4 coupling."""
    return 16.0 * d2 / (3.0 * math.pi * lambda_c)


def radial_kernel(cutoff: CutoffFunction, R: float, rel_tol: float = DEFAULT_OSCILLATORY_REL):
    """phi(R) = (2/pi) int [1 - f^2(k)] sin(kR)/(kR) dk and its first two R-derivatives.

    The '1' part is done in closed form (1/R); the f^2 part is differentiated
    under the integral sign, which needs

        S0 = int f^2/k sin(kR),  C = int f^2 cos(kR),  S1 = int f^2 k sin(kR).
    """
    if not R > 0:
        raise ZeroSeparation("kernel needs R > 0")
    if cutoff.constant is not None:
        c = 1.0 - cutoff.constant ** 2
        return c / R, -c / R ** 2, 2 * c / R ** 3

    def f2(k):
        return cutoff(k) ** 2

    s0 = integrate_oscillatory(lambda k: f2(k) / k, R, rel_tol=rel_tol).value
    cc = integrate_oscillatory(f2, R, rel_tol=rel_tol, weight="cos").value
    s1 = integrate_oscillatory(lambda k: f2(k) * k, R, rel_tol=rel_tol).value
    two_pi = 2.0 / math.pi
    psi = two_pi * s0 / R
    dpsi = two_pi * cc / R - psi / R
    d2psi = -two_pi * s1 / R - two_pi * cc / R ** 2 - dpsi / R + psi / R ** 2
    return 1.0 / R - psi, -1.0 / R ** 2 - dpsi, 2.0 / R ** 3 - d2psi


def _tensor_from_kernel(u, R, dphi, d2phi):
    # (delta lap - grad grad) phi for radial phi
    uu = np.outer(u, u)
    return np.eye(3) * (d2phi + dphi / R) - uu * (d2phi - dphi / R)


def gamma_tensor_exact(cutoff: CutoffFunction, separation, rel_tol: float = DEFAULT_OSCILLATORY_REL) -> InteractionTensor:
    """Cutoff-modified coupling (delta_ij lap - d_i d_j) phi(R)."""
    x, R, u = _unit(separation)
    if cutoff.constant is not None:
        c = 1.0 - cutoff.constant ** 2
        return InteractionTensor(x, c * (np.eye(3) - 3.0 * np.outer(u, u)) / R ** 3)
    if cutoff.tail_power > -3:
        raise DomainError("exact coupling needs a cutoff decaying at least as k^-3")
    _, dphi, d2phi = radial_kernel(cutoff, R, rel_tol)
    return InteractionTensor(x, _tensor_from_kernel(u, R, dphi, d2phi))


def gamma_tensor_asymptotic(d2: float, lambda_c: float, separation) -> InteractionTensor:
    """Published leading form gamma R^-4 (4 x_i x_j - delta_ij)."""
    x, R, u = _unit(separation)
    return InteractionTensor(x, coupling_length(d2, lambda_c) / R ** 4 * (4.0 * np.outer(u, u) - np.eye(3)))


def gamma_tensor_kernel_asymptote(d2: float, lambda_c: float, separation) -> InteractionTensor:
    """Leading large-R form obtained by applying the derivative operator to phi ~ (gamma/2) R^-2.

    Gives 2 gamma R^-4 (delta_ij - 2 x_i x_j); this is what the exact tensor
    tends to once R is much larger than 2 d2 / (3 lc).
    """
    x, R, u = _unit(separation)
    return InteractionTensor(x, 2.0 * coupling_length(d2, lambda_c) / R ** 4 * (np.eye(3) - 2.0 * np.outer(u, u)))


def _pair_sum(a: SpectrumTable, b: SpectrumTable) -> float:
    # sum dz1 dz2 / (2 E0 - E_b1 - E_b2), denominators are minus the summed gaps
    denom = -(a.excitation_energy[:, None] + b.excitation_energy[None, :])
    return float(np.sum(np.outer(a.dz_squared, b.dz_squared) / denom))


def _check_R(R):
    if not R > 0:
        raise ZeroSeparation("R must be positive")


def vdw_standard(spectrum_a: SpectrumTable, spectrum_b: SpectrumTable, R: float) -> float:
    """U'(R) = (6 / R^6) * pair sum."""
    _check_R(R)
    return COULOMB_ANGULAR_WEIGHT / R ** 6 * _pair_sum(spectrum_a, spectrum_b)


def vdw_modified(spectrum_a: SpectrumTable, spectrum_b: SpectrumTable, d2: float, lambda_c: float,
                 R: float) -> float:
    """U(R) = (11 / R^8) gamma^2 * pair sum (second order in the coupling, hence gamma squared)."""
    _check_R(R)
    g = coupling_length(d2, lambda_c)
    return MODIFIED_ANGULAR_WEIGHT * g * g / R ** 8 * _pair_sum(spectrum_a, spectrum_b)


def vdw_ratio_coefficient(d2: float, lambda_c: float) -> float:
    """C in U/U' = C (a/R)^2."""
    g = coupling_length(d2, lambda_c)
    return MODIFIED_ANGULAR_WEIGHT / COULOMB_ANGULAR_WEIGHT * g * g


def crossover_radius(d2: float, lambda_c: float) -> float:
    """R* with |U(R*)| = |U'(R*)|."""
    return math.sqrt(vdw_ratio_coefficient(d2, lambda_c))
