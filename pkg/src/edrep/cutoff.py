"""Variational momentum cutoff and the single-atom quantities it induces.

The energy of the dressed trial state, relative to the unperturbed ground
state, is the quadratic functional

    E[f] = (1/pi) int dk { lc k f^2 + (2/3) d2 k^2 f^2 - 2 lc k nhat f }

with lc the Compton length and d2 = <d^2>/e^2.  It is diagonal in k, so its
minimiser is pointwise: f(k) = nhat(k) / (1 + s k) with s = 2 d2 / (3 lc).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .atomic import ALPHA, DensityProfile, FormFactor, UnitSystem, form_factor, mean_square_dipole
from .errors import DomainError, NonConvergent
from .quadrature import (
    DEFAULT_OSCILLATORY_REL,
    DEFAULT_SMOOTH_REL,
    compact_map_weights,
    integrate_oscillatory,
    integrate_semi_infinite,
)

DEFAULT_GRID = (1e-3, 1e4, 400)


@dataclass(frozen=True)
class CutoffFunction:
    """A cutoff curve k -> f(k) with its asymptotic metadata.

    ``constant`` is set for the degenerate curves f = c (no cutoff, zero
    dressing); downstream code treats those analytically.
    """

    evaluator: Callable
    small_k_slope: float
    tail_power: float
    constant: float | None = None

    def __call__(self, k):
        return self.evaluator(k)

    @classmethod
    def const(cls, value: float) -> "CutoffFunction":
        v = float(value)

        def ev(k):
            return np.full(np.shape(k), v)

        return cls(ev, 0.0, 0.0 if v else -math.inf, constant=v)

    def scaled(self, c: float) -> "CutoffFunction":
        ev = self.evaluator
        return CutoffFunction(lambda k: c * ev(k), c * self.small_k_slope, self.tail_power,
                              None if self.constant is None else c * self.constant)

    @property
    def is_zero(self) -> bool:
        return self.constant == 0.0


@dataclass(frozen=True)
class EnergyFunctional:
    form_factor: FormFactor
    d2: float
    lambda_c: float
    base_energy: float = 0.0
    profile: DensityProfile | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.d2 > 0:
            raise DomainError("mean-square dipole must be positive")
        if not self.lambda_c > 0:
            raise DomainError("Compton length must be positive")

    @classmethod
    def from_profile(cls, profile: DensityProfile, units: UnitSystem | None = None,
                     base_energy: float = 0.0) -> "EnergyFunctional":
        units = units or UnitSystem()
        return cls(form_factor(profile), mean_square_dipole(profile), units.compton_length,
                   base_energy, profile)

    @property
    def slope(self) -> float:
        """s = 2 d2 / (3 lc): the optimal cutoff behaves as 1 - s k near k = 0."""
        return 2.0 * self.d2 / (3.0 * self.lambda_c)

    def coefficients(self, k):
        """The three integrand coefficients (lc k, (2/3) d2 k^2, -2 lc k nhat)."""
        k = np.asarray(k, dtype=float)
        return self.lambda_c * k, (2.0 / 3.0) * self.d2 * k * k, -2.0 * self.lambda_c * k * self.form_factor(k)


@dataclass(frozen=True)
class GridCutoff:
    nodes: np.ndarray
    values: np.ndarray
    stationary_values: np.ndarray
    iterations: int
    gradient_norm: float

    def __post_init__(self):
        if self.nodes.size < 2 or self.nodes.shape != self.values.shape:
            raise DomainError("grid cutoff needs >= 2 nodes and matching values")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("grid cutoff values must be finite")


def analytic_cutoff(functional: EnergyFunctional) -> CutoffFunction:
    ff = functional.form_factor
    s = functional.slope

    def ev(k):
        k = np.asarray(k, dtype=float)
        return ff(k) / (1.0 + s * k)

    return CutoffFunction(ev, s, ff.tail_power - 1.0)


def _k_integral(fn, rel_tol):
    return integrate_semi_infinite(fn, rel_tol=rel_tol).value


def energy_terms(functional: EnergyFunctional, cutoff: CutoffFunction,
                 rel_tol: float = DEFAULT_SMOOTH_REL) -> tuple[float, float, float]:
    """The three integrals lc int k f^2, (2/3) d2 int k^2 f^2, -2 lc int k nhat f."""
    if cutoff.is_zero:
        return 0.0, 0.0, 0.0
    lc, d2, ff = functional.lambda_c, functional.d2, functional.form_factor
    t1 = lc * _k_integral(lambda k: k * cutoff(k) ** 2, rel_tol)
    t2 = (2.0 / 3.0) * d2 * _k_integral(lambda k: k * k * cutoff(k) ** 2, rel_tol)
    t3 = -2.0 * lc * _k_integral(lambda k: k * ff(k) * cutoff(k), rel_tol)
    return t1, t2, t3


def energy_shift(functional: EnergyFunctional, cutoff: CutoffFunction,
                 rel_tol: float = DEFAULT_SMOOTH_REL) -> float:
    """E[f] - E0 in units of e^2/a, from the full quadratic functional."""
    return sum(energy_terms(functional, cutoff, rel_tol)) / math.pi


def optimal_energy_shift(functional: EnergyFunctional, rel_tol: float = DEFAULT_SMOOTH_REL) -> float:
    """Shift at the optimum in reduced form, -(lc/pi) int k nhat^2 / (1 + s k)."""
    ff, s, lc = functional.form_factor, functional.slope, functional.lambda_c
    return -lc / math.pi * _k_integral(lambda k: k * ff(k) ** 2 / (1.0 + s * k), rel_tol)


def discretized_energy(functional: EnergyFunctional, nodes, weights=None):
    """Return (energy(f), gradient(f), hessian_diagonal) for the functional on ``nodes``.

    The integral becomes sum_i w_i * integrand(k_i) with trapezoid weights
    built in the same compact variable the semi-infinite quadrature uses.
    """
    k = np.asarray(nodes, dtype=float)
    w = compact_map_weights(k) if weights is None else np.asarray(weights, dtype=float)
    c1, c2, c3 = functional.coefficients(k)
    quad = w * (c1 + c2) / math.pi
    lin = w * c3 / math.pi

    def energy(f):
        return float(np.sum(quad * f * f + lin * f))

    def gradient(f):
        return 2.0 * quad * f + lin

    return energy, gradient, 2.0 * quad


def steepest_descent(gradient: Callable, hess_vec: Callable, x0, metric, tol: float = 1e-10,
                     max_iter: int = 200_000):
    """Steepest descent on a quadratic with exact line search in a diagonal metric.

    The search direction is -metric^-1 grad; the step length minimises the
    quadratic along it exactly.  Stops once the norm of the metric gradient
    falls below ``tol``.
    """
    x = np.array(x0, dtype=float)
    for it in range(max_iter):
        g = gradient(x)
        p = g / metric
        norm = float(np.linalg.norm(p))
        if norm < tol:
            return x, it, norm
        curv = float(p @ hess_vec(p))
        if not curv > 0:
            raise NonConvergent("non-positive curvature along the descent direction")
        x = x - (float(g @ p) / curv) * p
    raise NonConvergent(f"descent stalled at gradient norm {norm:.3g} after {max_iter} iterations")


def log_grid(k_min: float = DEFAULT_GRID[0], k_max: float = DEFAULT_GRID[1],
             count: int = DEFAULT_GRID[2], spacing: str = "log") -> np.ndarray:
    if not (0 < k_min < k_max) or count < 2:
        raise DomainError("grid needs 0 < k_min < k_max and count >= 2")
    if spacing == "log":
        return np.geomspace(k_min, k_max, count)
    if spacing == "linear":
        return np.linspace(k_min, k_max, count)
    raise DomainError(f"unknown spacing {spacing!r}")


def minimize_on_grid(functional: EnergyFunctional, nodes: Sequence[float] | None = None,
                     tol: float = 1e-10) -> GridCutoff:
    """Minimise the discretised functional, by descent from f = 0.

    Two routes are computed: the node-wise stationary point of each scalar
    quadratic (``stationary_values``) and steepest descent on the whole
    discretised energy (``values``).  The descent uses the fixed metric
    w_i k_i (1 + k_i); without it the Hessian spans ~20 decades and plain
    descent cannot converge in floating point.
    """
    k = log_grid() if nodes is None else np.asarray(nodes, dtype=float)
    w = compact_map_weights(k)
    _, gradient, hdiag = discretized_energy(functional, k, w)
    lin = gradient(np.zeros_like(k))
    stationary = -lin / hdiag

    metric = w * k * (1.0 + k)
    values, iters, gnorm = steepest_descent(gradient, lambda v: hdiag * v, np.zeros_like(k), metric, tol)
    return GridCutoff(k, values, stationary, iters, gnorm)


def stationarity_residual(functional: EnergyFunctional, cutoff: CutoffFunction, k) -> np.ndarray:
    """(lc + (2/3) d2 k) f(k) - lc nhat(k), zero at the optimum."""
    k = np.asarray(k, dtype=float)
    lc = functional.lambda_c
    return (lc + (2.0 / 3.0) * functional.d2 * k) * cutoff(k) - lc * functional.form_factor(k)


def induced_constant_C0(cutoff: CutoffFunction, lambda_c: float = ALPHA, rel_tol: float = DEFAULT_SMOOTH_REL) -> float:
    """Constant shift lc/pi int k f^2 dk (e^2/a)."""
    if cutoff.is_zero:
        return 0.0
    return lambda_c / math.pi * _k_integral(lambda k: k * cutoff(k) ** 2, rel_tol)


def induced_frequency_Omega0(cutoff: CutoffFunction, mass: float = 1.0,
                             rel_tol: float = DEFAULT_SMOOTH_REL) -> float:
    """Harmonic frequency with m Omega^2 / 2 = (2/(3 pi)) int k^2 f^2 dk."""
    if cutoff.is_zero:
        return 0.0
    integral = _k_integral(lambda k: k * k * cutoff(k) ** 2, rel_tol)
    return math.sqrt(4.0 / (3.0 * math.pi) * integral / mass)


def induced_potential_Vpp(cutoff: CutoffFunction, r: float, lambda_c: float = ALPHA,
                          rel_tol: float = DEFAULT_OSCILLATORY_REL) -> float:
    """Short-range induced potential at distance ``r`` from the nucleus.

    -(2 lc / (pi r)) int f(k) sin(k r) dk for r > 0 and
    -(2 lc / pi) int k f(k) dk at r = 0.  Signed value, no asymptotic shortcut.
    """
    if r < 0:
        raise DomainError("r must be non-negative")
    if cutoff.is_zero:
        return 0.0
    if r == 0:
        return -2.0 * lambda_c / math.pi * _k_integral(lambda k: k * cutoff(k), DEFAULT_SMOOTH_REL)
    res = integrate_oscillatory(cutoff, r, rel_tol=rel_tol)
    return -2.0 * lambda_c / (math.pi * r) * res.value


def free_electron_localization_scan(widths: Sequence[float], units: UnitSystem | None = None,
                                    rel_tol: float = DEFAULT_SMOOTH_REL) -> list[tuple[float, float]]:
    """Optimal energy shift of a Gaussian wave packet for each width."""
    units = units or UnitSystem()
    out = []
    for w in widths:
        if not w > 0:
            raise DomainError("widths must be positive")
        functional = EnergyFunctional.from_profile(DensityProfile.gaussian(w), units)
        out.append((float(w), energy_shift(functional, analytic_cutoff(functional), rel_tol)))
    return out


def loglog_slope(x, y) -> float:
    """Least-squares slope of log|y| against log x."""
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.abs(np.asarray(y, float))), 1)[0])
