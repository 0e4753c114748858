import numpy as np
import pytest

from edrep.atomic import DensityProfile, UnitSystem
from edrep.cutoff import EnergyFunctional, analytic_cutoff


def hydrogen_table(r_max=40.0, count=801):
    r = np.linspace(0.0, r_max, count)
    return DensityProfile.tabulated(r, np.exp(-2 * r) / np.pi)


@pytest.fixture(scope="session")
def units():
    return UnitSystem()


@pytest.fixture(scope="session")
def hydrogen(units):
    functional = EnergyFunctional.from_profile(DensityProfile.hydrogen_1s(), units)
    return functional, analytic_cutoff(functional)


@pytest.fixture(scope="session")
def gaussian(units):
    functional = EnergyFunctional.from_profile(DensityProfile.gaussian(1.0), units)
    return functional, analytic_cutoff(functional)
