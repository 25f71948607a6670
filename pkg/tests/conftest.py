import math

import numpy as np
import pytest

from evanesce import Polarization, Scenario, critical_angle, vacuum_wavelength

HEADLINE = dict(n=1.6, f=9.15e9, theta=math.radians(45.0), d=0.040)


@pytest.fixture
def headline() -> Scenario:
    """The reference configuration: n=1.6, 9.15 GHz, 45 deg, 40 mm, TE."""
    return Scenario(**HEADLINE)


def random_scenario(rng: np.random.Generator, tunneling: bool = True,
                    polarization: Polarization | None = None) -> Scenario:
    """Random lossless configuration, above or below the critical angle."""
    n = rng.uniform(1.25, 2.5)
    f = rng.uniform(1e9, 40e9)
    crit = critical_angle(n)
    margin = 0.02
    if tunneling:
        theta = rng.uniform(crit + margin, math.pi / 2 - margin)
    else:
        theta = rng.uniform(margin, crit - margin)
    lam = vacuum_wavelength(f)
    d = rng.uniform(0.05 * lam, 3.0 * lam)
    if polarization is None:
        polarization = Polarization.TE if rng.random() < 0.5 else Polarization.TM
    return Scenario(n=n, f=f, theta=theta, d=d, polarization=polarization)
