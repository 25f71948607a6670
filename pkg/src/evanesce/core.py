"""Physical configuration and derived wave numbers for the double-prism gap.

Geometry: a plane wave inside a dielectric prism (index ``n``) meets the
prism/air interface at angle ``theta`` from the normal.  A second, identical
prism sits a distance ``d`` away; the air gap between the two flat faces is
the tunneling barrier.  Beyond the critical angle ``arcsin(1/n)`` the gap
field is evanescent with decay constant

    kappa = (2 pi f / c) * sqrt(n^2 sin^2(theta) - 1)   [1/m]

All quantities are SI.  Angles are radians internally; degree conversion
belongs to the CLI layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

C_VACUUM = 3.0e8          # m/s, rounded value used for all headline numbers
C_CODATA = 299_792_458.0  # m/s, exact SI value, selectable via Scenario.c


class Polarization(str, Enum):
    TE = "TE"  # electric field perpendicular to the plane of incidence
    TM = "TM"  # magnetic field perpendicular to the plane of incidence


class RegimeError(ValueError):
    """Raised when an operation requires the evanescent-gap regime."""


def _require_finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class Scenario:
    """Physical configuration of one double-prism experiment.

    Parameters
    ----------
    n : float
        Prism refractive index (> 1).
    f : float
        Carrier frequency [Hz].
    theta : float
        Incidence angle from the interface normal [rad], in (0, pi/2).
    d : float
        Gap width [m], >= 0.
    polarization : Polarization
        Field polarization; TE is the default.
    c : float
        Speed of light [m/s].  Defaults to the rounded 3e8 so quoted
        headline numbers reproduce exactly; pass C_CODATA for SI-exact work.
    """

    n: float
    f: float
    theta: float
    d: float
    polarization: Polarization = Polarization.TE
    c: float = C_VACUUM

    def __post_init__(self) -> None:
        for name in ("n", "f", "theta", "d", "c"):
            _require_finite(name, float(getattr(self, name)))
        if self.n <= 1:
            raise ValueError(f"refractive index must exceed 1, got n={self.n}")
        if self.f <= 0:
            raise ValueError(f"carrier frequency must be positive, got f={self.f}")
        if not 0 < self.theta < math.pi / 2:
            raise ValueError(
                f"incidence angle must lie in (0, pi/2) rad, got theta={self.theta}"
            )
        if self.d < 0:
            raise ValueError(f"gap width must be nonnegative, got d={self.d}")
        if self.c <= 0:
            raise ValueError(f"speed of light must be positive, got c={self.c}")
        object.__setattr__(self, "polarization", Polarization(self.polarization))

    @property
    def omega(self) -> float:
        """Carrier angular frequency [rad/s]."""
        return 2 * math.pi * self.f

    @property
    def is_tunneling(self) -> bool:
        """True iff the gap wave is evanescent (n sin(theta) > 1)."""
        return self.n * math.sin(self.theta) > 1

    def require_tunneling(self) -> None:
        if not self.is_tunneling:
            raise RegimeError(
                "operation requires the evanescent regime: "
                f"n sin(theta) = {self.n * math.sin(self.theta):.6f} <= 1 "
                f"(critical angle {math.degrees(critical_angle(self.n)):.2f} deg)"
            )


@dataclass(frozen=True)
class Wavevectors:
    """Propagation constants at one (scenario, omega) point.

    ``kappa`` is the gap decay constant in the evanescent regime and 0
    otherwise; below the critical angle the gap carries a real normal
    wavenumber instead, reported with the scattering result.
    """

    omega: float      # rad/s
    k_x: float        # 1/m, interface-parallel (conserved)
    k_z_prism: float  # 1/m, normal component inside the prism
    kappa: float      # 1/m, evanescent decay constant (0 when propagating)


@dataclass(frozen=True)
class PulseSpec:
    """Temporal envelope riding on the carrier.

    ``fwhm`` is the full width at half maximum of the *intensity* envelope.
    A plain Gaussian has ``front_time=None``.  Setting ``front_time`` gives
    the envelope a strict front: it is identically zero before that instant
    and turns on smoothly over ``front_rise`` seconds (default fwhm/16), so
    the signal has compact support without a sampling-hostile jump.
    """

    fwhm: float
    carrier: float
    front_time: float | None = None
    front_rise: float | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.fwhm) and self.fwhm > 0):
            raise ValueError(f"fwhm must be positive and finite, got {self.fwhm}")
        if not (math.isfinite(self.carrier) and self.carrier > 0):
            raise ValueError(f"carrier must be positive and finite, got {self.carrier}")
        if self.front_time is not None and not math.isfinite(self.front_time):
            raise ValueError(f"front_time must be finite, got {self.front_time}")
        if self.front_rise is not None and not (
            math.isfinite(self.front_rise) and self.front_rise > 0
        ):
            raise ValueError(f"front_rise must be positive, got {self.front_rise}")

    @property
    def sigma(self) -> float:
        """Gaussian field-envelope standard deviation [s]."""
        return self.fwhm / (2 * math.sqrt(math.log(2)))

    @property
    def rise(self) -> float:
        """Front turn-on duration [s] (only meaningful with a front)."""
        return self.front_rise if self.front_rise is not None else self.fwhm / 16


@dataclass(frozen=True)
class BeamSpec:
    """Transverse Gaussian beam, ``waist`` = 1/e field half-width [m]."""

    waist: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.waist) and self.waist > 0):
            raise ValueError(f"waist must be positive and finite, got {self.waist}")


def critical_angle(n: float) -> float:
    """Total-internal-reflection critical angle arcsin(1/n) [rad]."""
    if not (math.isfinite(n) and n > 1):
        raise ValueError(f"total internal reflection requires n > 1, got n={n}")
    return math.asin(1.0 / n)


def vacuum_wavelength(f: float, c: float = C_VACUUM) -> float:
    """Vacuum wavelength c/f [m]."""
    if not (math.isfinite(f) and f > 0):
        raise ValueError(f"frequency must be positive, got {f}")
    return c / f


def pulse_spatial_extent(pulse: PulseSpec, c: float = C_VACUUM) -> float:
    """Spatial length c * fwhm [m] of the pulse envelope in vacuum."""
    return c * pulse.fwhm


def wavevectors(scenario: Scenario, omega: float | None = None) -> Wavevectors:
    """Propagation constants for ``scenario`` at angular frequency ``omega``.

    ``kappa`` follows the attenuation-constant formula
    (omega/c) sqrt(n^2 sin^2(theta) - 1) in the evanescent regime and is 0
    below the critical angle.
    """
    if omega is None:
        omega = scenario.omega
    if not (math.isfinite(omega) and omega > 0):
        raise ValueError(f"omega must be positive and finite, got {omega}")
    n, th, c = scenario.n, scenario.theta, scenario.c
    k_prism = n * omega / c
    k_x = k_prism * math.sin(th)
    k_z = k_prism * math.cos(th)
    radicand = n * n * math.sin(th) ** 2 - 1.0
    kappa = (omega / c) * math.sqrt(radicand) if radicand > 0 else 0.0
    return Wavevectors(omega=omega, k_x=k_x, k_z_prism=k_z, kappa=kappa)
