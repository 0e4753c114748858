import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from edrep import hydrogen as h
from edrep.atomic import ALPHA, DensityProfile
from edrep.cutoff import (
    CutoffFunction,
    EnergyFunctional,
    analytic_cutoff,
    discretized_energy,
    energy_shift,
    energy_terms,
    induced_constant_C0,
    induced_frequency_Omega0,
    induced_potential_Vpp,
    log_grid,
    loglog_slope,
    minimize_on_grid,
    optimal_energy_shift,
    stationarity_residual,
)
from edrep.errors import DomainError
from edrep.quadrature import compact_map_weights, integrate_semi_infinite


def test_hydrogen_cutoff_closed_form(hydrogen):
    # f = (alpha/4) (1+z^2)^-2 (z + alpha/4)^-1 with z = k/2
    _, cutoff = hydrogen
    k = np.geomspace(1e-3, 1e3, 30)
    z = k / 2
    eps = ALPHA / 4
    assert np.allclose(cutoff(k), eps * (1 + z * z) ** -2 / (z + eps), rtol=1e-13)


@pytest.mark.parametrize("name", ["hydrogen", "gaussian"])
def test_stationarity(name, request):
    functional, cutoff = request.getfixturevalue(name)
    k = np.geomspace(1e-4, 1e4, 200)
    assert np.max(np.abs(stationarity_residual(functional, cutoff, k))) < 1e-16


@pytest.mark.parametrize("name", ["hydrogen", "gaussian"])
@pytest.mark.parametrize("bump", [
    lambda k: np.exp(-k),
    lambda k: k * np.exp(-k * k),
    lambda k: 1 / (1 + k) ** 3,
])
@pytest.mark.parametrize("eps", [1e-2, -1e-2])
def test_optimum_beats_perturbations(name, bump, eps, request):
    functional, cutoff = request.getfixturevalue(name)
    perturbed = CutoffFunction(lambda k: cutoff(k) + eps * bump(k), cutoff.small_k_slope, cutoff.tail_power)
    assert energy_shift(functional, perturbed) > energy_shift(functional, cutoff)


@pytest.mark.parametrize("name", ["hydrogen", "gaussian"])
def test_grid_descent_matches_closed_form(name, request):
    functional, cutoff = request.getfixturevalue(name)
    grid = minimize_on_grid(functional)
    assert grid.nodes.size == 400
    assert np.max(np.abs(grid.values - cutoff(grid.nodes))) < 1e-6
    assert np.max(np.abs(grid.stationary_values - cutoff(grid.nodes))) < 1e-12


def test_discretized_gradient_finite_difference(hydrogen):
    functional, _ = hydrogen
    k = log_grid(1e-2, 1e2, 40)
    energy, gradient, _ = discretized_energy(functional, k)
    rng = np.random.default_rng(3)
    f = rng.uniform(0, 1, k.size)
    d = rng.normal(size=k.size)
    h_ = 1e-6
    fd = (energy(f + h_ * d) - energy(f - h_ * d)) / (2 * h_)
    assert fd == pytest.approx(float(gradient(f) @ d), rel=1e-6)


@pytest.mark.parametrize("name", ["hydrogen", "gaussian"])
def test_energy_forms_agree(name, request):
    functional, cutoff = request.getfixturevalue(name)
    full = energy_shift(functional, cutoff)
    reduced = optimal_energy_shift(functional)
    assert full < 0
    assert full == pytest.approx(reduced, rel=1e-8)


def test_hydrogen_values_vs_closed_forms(hydrogen):
    functional, cutoff = hydrogen
    assert energy_shift(functional, cutoff) == pytest.approx(h.energy_shift(), rel=1e-10)
    assert induced_constant_C0(cutoff) == pytest.approx(h.induced_constant(), rel=1e-10)
    assert induced_frequency_Omega0(cutoff) == pytest.approx(h.induced_frequency(), rel=1e-10)
    assert induced_potential_Vpp(cutoff, 0.0) == pytest.approx(h.potential_at_origin(), rel=1e-10)
    terms = energy_terms(functional, cutoff)
    assert sum(terms) / math.pi == pytest.approx(h.energy_shift(), rel=1e-10)


def test_potential_continuous_at_origin(hydrogen):
    _, cutoff = hydrogen
    assert induced_potential_Vpp(cutoff, 1e-3) == pytest.approx(induced_potential_Vpp(cutoff, 0.0), rel=1e-4)


def test_potential_large_r_asymptote(hydrogen):
    # V r^2 -> -2 lc / pi once r >> s = 2 d2/(3 lc)
    _, cutoff = hydrogen
    r = 1e4
    assert induced_potential_Vpp(cutoff, r) * r * r / (2 * ALPHA / math.pi) == pytest.approx(-1.0, abs=5e-3)


def test_constant_cutoffs():
    zero = CutoffFunction.const(0.0)
    assert zero.is_zero
    assert induced_constant_C0(zero) == 0.0
    assert induced_potential_Vpp(zero, 3.0) == 0.0
    assert CutoffFunction.const(1.0).scaled(0.5).constant == 0.5


@settings(max_examples=40, deadline=None)
@given(w=st.floats(0.01, 30.0), k=st.floats(0.0, 1e4))
def test_cutoff_bounds_gaussian(w, k):
    c = analytic_cutoff(EnergyFunctional.from_profile(DensityProfile.gaussian(w)))
    v = float(c(k))
    assert 0.0 <= v <= 1.0


def test_cutoff_at_origin(hydrogen, gaussian):
    for _, c in (hydrogen, gaussian):
        assert float(c(0.0)) == pytest.approx(1.0, abs=1e-10)


def test_small_k_slope(hydrogen):
    functional, cutoff = hydrogen
    k = 1e-9
    assert (1 - float(cutoff(k))) / k == pytest.approx(cutoff.small_k_slope, rel=1e-4)
    assert cutoff.small_k_slope == pytest.approx(2 * 3 / (3 * ALPHA))


def test_hydrogen_tail_power(hydrogen):
    _, cutoff = hydrogen
    k = np.geomspace(1e3, 1e4, 21)
    assert loglog_slope(k, cutoff(k)) == pytest.approx(cutoff.tail_power, abs=1e-3)


def test_photon_integrand_weight():
    # k f^2 integrates to the closed-form moment used by the photon count
    c = analytic_cutoff(EnergyFunctional.from_profile(DensityProfile.hydrogen_1s()))
    val = integrate_semi_infinite(lambda k: k * c(k) ** 2).value
    assert ALPHA / math.pi * val == pytest.approx(h.induced_constant(), rel=1e-10)


def test_functional_rejects():
    ff = EnergyFunctional.from_profile(DensityProfile.hydrogen_1s()).form_factor
    with pytest.raises(DomainError):
        EnergyFunctional(ff, 0.0, ALPHA)
    with pytest.raises(DomainError):
        induced_potential_Vpp(CutoffFunction.const(1.0), -1.0)


def test_log_grid_rejects():
    with pytest.raises(DomainError):
        log_grid(1.0, 0.5, 10)
    assert compact_map_weights(log_grid(1e-3, 1e3, 10)).shape == (10,)
