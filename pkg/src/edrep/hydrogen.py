"""Hydrogen 1s observables reduced to the closed-form integral family.

With z = k a / 2 and eps = alpha / 4 the optimal cutoff is

    f(z) = (alpha / 4) (1 + z^2)^-2 (z + eps)^-1

so every k-integral of the single-atom problem becomes a combination of
``int z^p (1 + z^2)^-n (z + eps)^-m dz``.  These give values independent of
the adaptive quadrature path.
"""

from __future__ import annotations

import math

from .atomic import ALPHA
from .quadrature import closed_form_moment


def _moment(p, n, m, alpha):
    return closed_form_moment(p, n, m, 1.0, alpha / 4.0)


def photon_number(alpha: float = ALPHA) -> float:
    """Total photon number, (alpha^3 / 4 pi) int z (1+z^2)^-4 (z+eps)^-2 dz."""
    return alpha ** 3 / (4 * math.pi) * _moment(1, 4, 2, alpha)


def photon_number_single_power_variant(alpha: float = ALPHA) -> float:
    """Same prefactor with (1+z^2)^-1 in place of (1+z^2)^-4."""
    return alpha ** 3 / (4 * math.pi) * _moment(1, 1, 2, alpha)


def induced_constant(alpha: float = ALPHA) -> float:
    # (alpha/pi) int k f^2 dk; numerically identical to the photon number for hydrogen
    return alpha ** 3 / (4 * math.pi) * _moment(1, 4, 2, alpha)


def induced_frequency(alpha: float = ALPHA) -> float:
    return math.sqrt(2 * alpha ** 2 / (3 * math.pi) * _moment(2, 4, 2, alpha))


def energy_shift(alpha: float = ALPHA) -> float:
    return -alpha ** 2 / math.pi * _moment(1, 4, 1, alpha)


def energy_terms(alpha: float = ALPHA) -> tuple[float, float, float]:
    """The three functional integrals (before the 1/pi) at the optimum."""
    return (
        alpha ** 3 / 4 * _moment(1, 4, 2, alpha),
        alpha ** 2 * _moment(2, 4, 2, alpha),
        -2 * alpha ** 2 * _moment(1, 4, 1, alpha),
    )


def potential_at_origin(alpha: float = ALPHA) -> float:
    return -2 * alpha ** 2 / math.pi * _moment(1, 2, 1, alpha)
