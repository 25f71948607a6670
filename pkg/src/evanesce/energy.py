"""In-gap field profile, stored energy, and the dwell-time picture.

The gap field is the two-component standing profile
C e^{+i k_z z} + D e^{-i k_z z} fixed by the boundary matching; in the
evanescent regime these are the decaying and growing exponentials.  The
time-averaged energy density combines the principal field F and the two
companion components that Maxwell's curl equations derive from it:

    u(z) = (1/4) [ (1 + (c k_x/omega)^2) |F|^2 + (c/omega)^2 |F'|^2 ]

in units of the incident field's eps0 E0^2 (TE) or mu0 H0^2 (TM); the
expression is polarization-independent in those units.  Both quadratic
field terms matter: the electric part alone would change the saturation
constant of the stored energy.

Stored energy saturates with gap width because the density decays like
e^{-2 kappa z}: widening the gap adds exponentially little.  The dwell
time, stored energy over incident power, therefore saturates exactly the
way the group delay does; that shared saturation is the content of the
Hartman effect.  The passenger-train toy model (`train_model`) makes the
same point with halved car occupancies summing to less than 2N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import quad

from .core import Polarization, Scenario, wavevectors
from .delay import Channel, goos_hanchen_shift
from .scattering import ScatterResult, scatter


@dataclass(frozen=True)
class GapFieldProfile:
    """Sampled gap field and its time-averaged energy density.

    ``field`` is the principal matched field (E_y for TE, H_y for TM),
    normalized to a unit incident amplitude.  ``evanescent`` records the
    regime; below the critical angle the profile is oscillatory.
    """

    z_samples: np.ndarray
    field: np.ndarray
    energy_density: np.ndarray
    evanescent: bool


@dataclass(frozen=True)
class EnergyBudget:
    """Stored energy in the d-by-s interaction region, per unit depth.

    ``dwell_time = stored / incident_power`` exactly; the lateral extent s
    cancels, leaving stored energy per unit interface area over the
    incident normal flux.
    """

    stored: float          # J/m in normalized units
    incident_power: float  # W/m in normalized units
    dwell_time: float      # s


def _field_functions(scenario: Scenario, omega: float, k_x: float,
                     result: ScatterResult | None = None):
    """Return (field(z), dfield/dz(z), k_z_gap) callables for the gap."""
    res = result if result is not None else scatter(scenario, omega, k_x)
    kz = res.k_z_gap
    c_amp, d_amp = res.c_amp, res.d_amp

    def field(z):
        return c_amp * np.exp(1j * kz * z) + d_amp * np.exp(-1j * kz * z)

    def dfield(z):
        return 1j * kz * (c_amp * np.exp(1j * kz * z)
                          - d_amp * np.exp(-1j * kz * z))

    return field, dfield, kz


def _density_function(scenario: Scenario, omega: float, k_x: float,
                      result: ScatterResult | None = None):
    field, dfield, _ = _field_functions(scenario, omega, k_x, result)
    cx = (scenario.c * k_x / omega) ** 2
    cw = (scenario.c / omega) ** 2

    def density(z):
        return 0.25 * ((1 + cx) * np.abs(field(z)) ** 2
                       + cw * np.abs(dfield(z)) ** 2)

    return density


def gap_field(scenario: Scenario, omega: float | None = None,
              k_x: float | None = None, n_samples: int = 256) -> GapFieldProfile:
    """Sample the gap field and energy density on a uniform grid [0, d].

    Below the critical angle the profile is computed all the same and the
    regime flag is set False; only invalid inputs raise.
    """
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples}")
    if omega is None:
        omega = scenario.omega
    if k_x is None:
        k_x = wavevectors(scenario, omega).k_x
    res = scatter(scenario, omega, k_x)
    field, _, kz = _field_functions(scenario, omega, k_x, res)
    density = _density_function(scenario, omega, k_x, res)
    z = np.linspace(0.0, scenario.d, n_samples)
    return GapFieldProfile(
        z_samples=z,
        field=field(z),
        energy_density=density(z),
        evanescent=bool(kz.imag > 0),
    )


def _incident_flux(scenario: Scenario, omega: float, k_x: float) -> float:
    """Normal component of the incident time-averaged flux, normalized."""
    alpha = math.sqrt((scenario.n * omega / scenario.c) ** 2 - k_x ** 2)
    flux = scenario.c ** 2 * alpha / (2 * omega)
    if scenario.polarization is Polarization.TM:
        flux /= scenario.n ** 2
    return flux


def integrated_density(scenario: Scenario, omega: float | None = None,
                       k_x: float | None = None) -> float:
    """Energy per unit interface area: integral of u(z) over the gap.

    Adaptive quadrature at relative tolerance 1e-9; the integrand is a
    smooth sum of exponentials, so fixed 64-point panels would also do.
    """
    if omega is None:
        omega = scenario.omega
    if k_x is None:
        k_x = wavevectors(scenario, omega).k_x
    if scenario.d == 0:
        return 0.0
    density = _density_function(scenario, omega, k_x)
    value, _ = quad(density, 0.0, scenario.d, epsabs=0.0, epsrel=1e-9, limit=200)
    return value


def stored_energy(scenario: Scenario) -> EnergyBudget:
    """Energy budget of the d-by-s storage region at the carrier.

    The lateral extent is the transmitted-channel Goos-Hanchen shift; the
    incident power crosses the matching s-wide entry window, so the dwell
    time reduces to area-normalized stored energy over incident flux.
    """
    scenario.require_tunneling()
    omega = scenario.omega
    k_x = wavevectors(scenario, omega).k_x
    if scenario.d == 0:
        return EnergyBudget(stored=0.0, incident_power=0.0, dwell_time=0.0)
    per_area = integrated_density(scenario, omega, k_x)
    shift = goos_hanchen_shift(scenario, Channel.TRANSMISSION)
    flux = _incident_flux(scenario, omega, k_x)
    stored = per_area * shift
    power = flux * shift
    return EnergyBudget(stored=stored, incident_power=power,
                        dwell_time=stored / power)


def evanescent_vs_free_energy(scenario: Scenario) -> float:
    """Mean-square gap field relative to a constant-amplitude wave.

    Ratio of the stored field energy to that of a traveling plane wave
    filling the same volume with the gap-entry amplitude.  It tends to 1 as
    kappa*d -> 0 (uniform field) and falls below 1 once kappa*d is of order
    one: the decaying profile stores less than the free wave would.
    """
    scenario.require_tunneling()
    if scenario.d <= 0:
        raise ValueError("ratio needs a finite gap, got d=0")
    omega = scenario.omega
    k_x = wavevectors(scenario, omega).k_x
    field, _, _ = _field_functions(scenario, omega, k_x)
    num, _ = quad(lambda z: np.abs(field(z)) ** 2, 0.0, scenario.d,
                  epsabs=0.0, epsrel=1e-9, limit=200)
    entry = abs(field(0.0)) ** 2
    return num / (entry * scenario.d)


def train_model(n_first_car: int, n_cars: int) -> tuple[int, float]:
    """Total passengers on a train loaded N, N//2, N//4, ... and a delay proxy.

    Integer occupancies use floor halving, which is exact when N is a power
    of two.  The total stays strictly below 2N however long the train: each
    extra car adds at most half the previous one.  ``delay_proxy`` is
    total/(2N), the fraction of the saturation bound reached.
    """
    if n_first_car < 1 or n_cars < 1:
        raise ValueError("need n_first_car >= 1 and n_cars >= 1")
    total = 0
    occupancy = n_first_car
    for _ in range(n_cars):
        total += occupancy
        occupancy //= 2
    return total, total / (2 * n_first_car)


def train_model_geometric(n_first_car: float, n_cars: int) -> tuple[Fraction, float]:
    """Exact-halving variant: total = 2N(1 - 2^-cars), approaching 2N."""
    if n_first_car <= 0 or n_cars < 1:
        raise ValueError("need n_first_car > 0 and n_cars >= 1")
    total = 2 * Fraction(n_first_car) * (1 - Fraction(1, 2 ** n_cars))
    return total, float(total / (2 * Fraction(n_first_car)))
