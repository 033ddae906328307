"""Material models and scattering kinematics for a compound metal-dielectric interface.

Everything here works in a reduced unit system with c = hbar = eps0 = 1,
frequencies measured in units of the silver plasma frequency and lengths in
units of c over that frequency.  SI values (wavelength in metres, angles in
degrees) are converted once, at construction of :class:`InterfaceSpec` or in
the CLI, and never appear again downstream.

The geometry: two metal/dielectric half-space pairs joined at x = 0, with the
metal filling z < 0 on both sides.  A bound surface mode (TM polarised) exists
on each side whenever eps_d + eps_m < 0; the radiation continuum above the
light line is parameterised by the free transverse parameter q.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

__all__ = [
    "OMEGA_P_SILVER",
    "C_LIGHT",
    "NonBoundModeError",
    "TotalInternalReflectionError",
    "HalfSpacePair",
    "InterfaceSpec",
    "SppKinematics",
    "RadiationKinematics",
    "csqrt",
    "drude_epsilon",
    "spp_wavenumber",
    "spp_group_velocity",
    "spp_kinematics",
    "radiation_kinematics",
    "transmitted_angle",
    "matched_incidence_angle",
    "tir_critical_angle",
    "omega_from_wavelength",
]

# Plasma frequency of silver, rad/s.
OMEGA_P_SILVER = 1.402e16
# Speed of light, m/s (SI boundary conversions only).
C_LIGHT = 299792458.0


class NonBoundModeError(ValueError):
    """No bound surface mode exists for the requested material combination."""


class TotalInternalReflectionError(ValueError):
    """The conserved k_y exceeds the transmitted-side surface-mode wavenumber."""


def omega_from_wavelength(lambda0: float) -> float:
    """Reduced angular frequency for a free-space wavelength in metres."""
    if lambda0 <= 0.0:
        raise ValueError("wavelength must be positive")
    return 2.0 * math.pi * C_LIGHT / lambda0 / OMEGA_P_SILVER


def csqrt(z) -> complex:
    """Principal square root with Re >= 0; on the branch cut pick Im >= 0.

    The +0j offset forces negative reals onto the upper side of the cut so
    that evanescent propagation constants come out as +i|k| (fields bounded
    in the decay direction).
    """
    z = complex(z)
    if z.imag == 0.0:
        z = complex(z.real, 0.0)
    return cmath.sqrt(z)


def drude_epsilon(omega: float, omega_p: float) -> float:
    """Drude permittivity 1 - (omega_p/omega)^2 of the lossless metal."""
    if omega <= 0.0:
        raise ValueError("omega must be positive")
    return 1.0 - (omega_p / omega) ** 2


def spp_wavenumber(omega: float, eps_d: float, eps_m: float) -> float:
    """Surface-mode wavenumber k = omega*sqrt(eps_d*eps_m/(eps_d+eps_m))."""
    s = eps_d + eps_m
    if s >= 0.0:
        raise NonBoundModeError(
            f"no bound surface mode: eps_d + eps_m = {s:g} >= 0"
        )
    return omega * math.sqrt(eps_d * eps_m / s)


def spp_group_velocity(omega: float, eps_d: float, omega_p: float) -> float:
    """Group velocity d(omega)/dk of the surface mode, by closed form.

    Differentiates k(omega) = omega*sqrt(g) with g = eps_d*eps_m/(eps_d+eps_m)
    and d(eps_m)/d(omega) = 2*omega_p^2/omega^3.
    """
    eps_m = drude_epsilon(omega, omega_p)
    s = eps_d + eps_m
    if s >= 0.0:
        raise NonBoundModeError("no bound surface mode")
    g = eps_d * eps_m / s
    deps = 2.0 * omega_p ** 2 / omega ** 3
    dg = eps_d ** 2 * deps / s ** 2
    dk_domega = math.sqrt(g) + omega * dg / (2.0 * math.sqrt(g))
    return 1.0 / dk_domega


@dataclass(frozen=True)
class HalfSpacePair:
    """One side of the interface: dielectric constant and metal plasma frequency.

    omega_p is measured in units of the silver plasma frequency.
    """

    eps_d: float
    omega_p: float = 1.0

    def __post_init__(self):
        if self.eps_d <= 0.0:
            raise ValueError("eps_d must be positive")
        if self.omega_p <= 0.0:
            raise ValueError("omega_p must be positive")

    def eps_m(self, omega: float) -> float:
        return drude_epsilon(omega, self.omega_p)


@dataclass(frozen=True)
class SppKinematics:
    """Resolved surface-mode parameters on one side, at one incidence angle."""

    omega: float
    eps_d: float
    eps_m: float
    k: float
    k_x: float
    k_y: float
    nu: float
    nu0: float
    theta: float
    v_g: float


@dataclass(frozen=True)
class RadiationKinematics:
    """Resolved radiation-continuum parameters at one (q, k_y) point."""

    omega: float
    eps_d: float
    eps_m: float
    q: float
    k: complex
    k_x: complex
    k_y: float
    nu: complex
    propagating: bool


@dataclass(frozen=True)
class InterfaceSpec:
    """Full physical configuration of one scattering problem.

    lambda0 is the free-space wavelength in metres (the single SI quantity
    retained); theta_ii is the incidence angle in radians on side i;
    n_modes is the number of quadrature nodes per side and polarisation.
    """

    side_i: HalfSpacePair
    side_j: HalfSpacePair
    lambda0: float
    theta_ii: float = 0.0
    n_modes: int = 200

    omega: float = field(init=False)

    def __post_init__(self):
        if not 0.0 <= self.theta_ii < math.pi / 2.0:
            raise ValueError("theta_ii must lie in [0, pi/2)")
        if self.n_modes < 1:
            raise ValueError("n_modes must be at least 1")
        omega = omega_from_wavelength(self.lambda0)
        object.__setattr__(self, "omega", omega)
        if omega >= min(self.side_i.omega_p, self.side_j.omega_p):
            raise ValueError(
                "operating frequency must lie below both plasma frequencies"
            )
        for side in (self.side_i, self.side_j):
            if side.eps_d + side.eps_m(omega) >= 0.0:
                raise NonBoundModeError(
                    "no bound surface mode on one side at this frequency"
                )
        if self.theta_ii >= tir_critical_angle(self):
            raise TotalInternalReflectionError(
                f"theta_ii = {self.theta_ii:.6f} rad is at or beyond the "
                f"critical angle {tir_critical_angle(self):.6f} rad"
            )

    def side(self, label: str) -> HalfSpacePair:
        if label == "i":
            return self.side_i
        if label == "j":
            return self.side_j
        raise ValueError("side label must be 'i' or 'j'")

    def swapped(self, theta: float) -> "InterfaceSpec":
        """The reverse configuration (sides exchanged) at incidence theta."""
        return InterfaceSpec(
            side_i=self.side_j,
            side_j=self.side_i,
            lambda0=self.lambda0,
            theta_ii=theta,
            n_modes=self.n_modes,
        )


def _spp_kin(omega: float, pair: HalfSpacePair, theta: float) -> SppKinematics:
    eps_m = pair.eps_m(omega)
    eps_d = pair.eps_d
    k = spp_wavenumber(omega, eps_d, eps_m)
    k_x = k * math.cos(theta)
    k_y = k * math.sin(theta)
    nu0 = math.sqrt(k * k - omega * omega * eps_d)
    nu = math.sqrt(k * k - omega * omega * eps_m)
    v_g = spp_group_velocity(omega, eps_d, pair.omega_p)
    return SppKinematics(
        omega=omega, eps_d=eps_d, eps_m=eps_m, k=k, k_x=k_x, k_y=k_y,
        nu=nu, nu0=nu0, theta=theta, v_g=v_g,
    )


def spp_kinematics(spec: InterfaceSpec, side: str, theta: float) -> SppKinematics:
    """Surface-mode kinematics for one side of the interface at angle theta."""
    return _spp_kin(spec.omega, spec.side(side), theta)


def radiation_kinematics(
    omega: float, eps_d: float, eps_m: float, q: float, k_y: float
) -> RadiationKinematics:
    """Radiation-continuum kinematics at transverse parameter q.

    k and k_x may be imaginary (evanescent in x); nu is the metal-side decay
    constant.  All square roots follow the csqrt branch rule.
    """
    if q < 0.0:
        raise ValueError("q must be non-negative")
    k = csqrt(omega * omega * eps_d - q * q)
    k_x = csqrt(k * k - k_y * k_y)
    nu = csqrt(omega * omega * (eps_d - eps_m) - q * q)
    propagating = k_x.imag == 0.0 and k_x.real > 0.0
    return RadiationKinematics(
        omega=omega, eps_d=eps_d, eps_m=eps_m, q=q, k=k, k_x=k_x, k_y=k_y,
        nu=nu, propagating=propagating,
    )


def tir_critical_angle(spec: InterfaceSpec) -> float:
    """Incidence angle above which the transmitted surface mode cannot exist."""
    omega = spec.omega
    k_i = spp_wavenumber(omega, spec.side_i.eps_d, spec.side_i.eps_m(omega))
    k_j = spp_wavenumber(omega, spec.side_j.eps_d, spec.side_j.eps_m(omega))
    if k_j >= k_i:
        return math.pi / 2.0
    return math.asin(k_j / k_i)


def transmitted_angle(spec: InterfaceSpec) -> tuple[float, float]:
    """(transmitted, reflected) angles of the incident surface mode.

    Transmission conserves omega and k_y; the reflected angle equals the
    incidence angle.
    """
    omega = spec.omega
    k_i = spp_wavenumber(omega, spec.side_i.eps_d, spec.side_i.eps_m(omega))
    k_j = spp_wavenumber(omega, spec.side_j.eps_d, spec.side_j.eps_m(omega))
    s = k_i * math.sin(spec.theta_ii) / k_j
    if s > 1.0:
        raise TotalInternalReflectionError(
            "incidence beyond the critical angle: k_y exceeds the "
            "transmitted-side wavenumber"
        )
    return math.asin(s), spec.theta_ii


def matched_incidence_angle(spec: InterfaceSpec) -> float:
    """Incidence angle on side j that makes the two output directions coincide.

    Closed form: theta_ji = acos(sqrt(1 - eps_di*eps_mi*(eps_dj+eps_mj)
    * sin^2(theta_ii) / (eps_dj*(eps_di+eps_mi)*eps_mj))).  Equal to the
    transmitted angle of the forward run, independently of frequency.
    """
    omega = spec.omega
    e_di, e_dj = spec.side_i.eps_d, spec.side_j.eps_d
    e_mi, e_mj = spec.side_i.eps_m(omega), spec.side_j.eps_m(omega)
    sin2 = (
        e_di * e_mi * (e_dj + e_mj) * math.sin(spec.theta_ii) ** 2
        / (e_dj * (e_di + e_mi) * e_mj)
    )
    arg = 1.0 - sin2
    if arg < 0.0:
        raise TotalInternalReflectionError(
            "incidence beyond the critical angle: no matched angle exists"
        )
    return math.acos(math.sqrt(arg))
