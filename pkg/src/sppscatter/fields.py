"""Quantized mode profiles and numerical overlap verification.

The electric profile phi and magnetic profile psi of every mode kind (surface
mode, TM radiation, TE radiation) are represented piecewise as short sums of
complex exponentials in z.  That representation makes the x-directed E x H
overlap integrals semi-analytic: metal-side and bound-tail integrals close in
elementary form, while the oscillatory dielectric products reduce to a delta
coefficient (same-frequency terms) plus principal-value kernels i/K.  The
module exists to validate the analytic coupling formulas independently, so it
shares only that distributional reduction with the `coupling` module, not the
final closed forms.

Conventions: half-space z < 0 is metal, z >= 0 dielectric; the harmonic factor
exp(i k.r - i omega t) and the transverse integrals are handled symbolically
(they give the delta(omega - omega') delta(k_y - k_y') factors and are never
evaluated numerically).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .materials import RadiationKinematics, SppKinematics

__all__ = [
    "ModeProfile",
    "spp_wavefunction",
    "radiation_wavefunction",
    "magnetic_profile",
    "self_overlap",
    "cross_overlap",
    "numeric_coupling",
]

_ZHAT = np.array([0.0, 0.0, 1.0], dtype=complex)


def _khat(kin) -> np.ndarray:
    return np.array([kin.k_x / kin.k, kin.k_y / kin.k, 0.0], dtype=complex)


def _z_cross_khat(kin) -> np.ndarray:
    return np.array([-kin.k_y / kin.k, kin.k_x / kin.k, 0.0], dtype=complex)


def _psi_dir(kin) -> np.ndarray:
    return np.array([kin.k_y / kin.k, -kin.k_x / kin.k, 0.0], dtype=complex)


def _gamma_tm(kin: RadiationKinematics) -> complex:
    from .materials import csqrt

    return kin.nu / csqrt(
        kin.eps_d ** 2 * kin.nu ** 2 + kin.eps_m ** 2 * kin.q ** 2
    )


def _gamma_te(kin: RadiationKinematics) -> complex:
    return 1.0 / math.sqrt(kin.eps_d * (kin.eps_d - kin.eps_m))


def _eta(kin: RadiationKinematics) -> complex:
    return kin.q * kin.eps_m / (kin.nu * kin.eps_d)


def _osc_terms(a_vec, b_vec, q):
    """Split A*cos(qz) + B*sin(qz) into exp(+iqz) and exp(-iqz) terms."""
    return [
        (0.5 * (a_vec - 1j * b_vec), complex(q)),
        (0.5 * (a_vec + 1j * b_vec), complex(-q)),
    ]


def _electric_terms(kind: str, kin):
    """(metal_terms, dielectric_terms) of the phi profile.

    Metal terms are (vec, alpha) meaning vec*exp(alpha*z) for z < 0;
    dielectric terms are (vec, kappa) meaning vec*exp(i*kappa*z) for z >= 0.
    """
    khat = _khat(kin)
    if kind == "SPP":
        metal = [(1j * khat + (kin.k / kin.nu) * _ZHAT, complex(kin.nu))]
        diel = [(1j * khat - (kin.k / kin.nu0) * _ZHAT, 1j * kin.nu0)]
        return metal, diel
    if kind == "TM":
        g = _gamma_tm(kin)
        eta = _eta(kin)
        metal = [(g * (1j * khat + (kin.k / kin.nu) * _ZHAT), complex(kin.nu))]
        a_vec = g * (1j * khat + (kin.k / kin.q) * eta * _ZHAT)
        b_vec = g * (-eta * 1j * khat + (kin.k / kin.q) * _ZHAT)
        return metal, _osc_terms(a_vec, b_vec, kin.q)
    if kind == "TE":
        g = _gamma_te(kin)
        e_vec = 1j * _z_cross_khat(kin)
        metal = [(g * e_vec, complex(kin.nu))]
        return metal, _osc_terms(g * e_vec, g * (kin.nu / kin.q) * e_vec, kin.q)
    raise ValueError(f"unknown mode kind {kind!r}")


def _magnetic_terms(kind: str, kin):
    """(metal_terms, dielectric_terms) of the psi profile (same encoding)."""
    if kind == "SPP":
        amp = (kin.k ** 2 - kin.nu ** 2) / kin.nu
        d = _psi_dir(kin)
        return [(amp * d, complex(kin.nu))], [(amp * d, 1j * kin.nu0)]
    if kind == "TM":
        amp = (kin.k ** 2 - kin.nu ** 2) / kin.nu * _gamma_tm(kin)
        d = _psi_dir(kin)
        metal = [(amp * d, complex(kin.nu))]
        return metal, _osc_terms(amp * d, amp / _eta(kin) * d, kin.q)
    if kind == "TE":
        g = 1j * kin.nu * _gamma_te(kin)
        khat = _khat(kin)
        metal = [(g * (1j * khat + (kin.k / kin.nu) * _ZHAT), complex(kin.nu))]
        a_vec = g * (1j * khat + (kin.k / kin.nu) * _ZHAT)
        b_vec = g * (
            -(kin.q / kin.nu) * 1j * khat + (kin.k / kin.q) * _ZHAT
        )
        return metal, _osc_terms(a_vec, b_vec, kin.q)
    raise ValueError(f"unknown mode kind {kind!r}")


def _eval_terms(metal, diel, z: float) -> np.ndarray:
    out = np.zeros(3, dtype=complex)
    if z < 0.0:
        for vec, alpha in metal:
            out += vec * np.exp(alpha * z)
    else:
        for vec, kappa in diel:
            out += vec * np.exp(1j * kappa * z)
    return out


def spp_wavefunction(kin: SppKinematics, z: float) -> np.ndarray:
    """Electric z-profile of the surface mode (harmonic factor excluded)."""
    return _eval_terms(*_electric_terms("SPP", kin), z)


def radiation_wavefunction(kind: str, kin: RadiationKinematics, z: float) -> np.ndarray:
    """Electric z-profile of a TM or TE radiation mode."""
    if kind not in ("TM", "TE"):
        raise ValueError("radiation kind must be 'TM' or 'TE'")
    return _eval_terms(*_electric_terms(kind, kin), z)


def magnetic_profile(kind: str, kin, z: float) -> np.ndarray:
    """Magnetic z-profile psi of any mode kind."""
    return _eval_terms(*_magnetic_terms(kind, kin), z)


@dataclass(frozen=True)
class ModeProfile:
    """One fully resolved mode: kind, kinematics, and amplitude prefactors."""

    kind: str
    kin: object

    @property
    def electric_prefactor(self) -> float:
        if self.kind == "SPP":
            return math.sqrt(self.kin.omega / (2.0 * _spp_p(self.kin)))
        return self.kin.q / math.sqrt(math.pi * self.kin.omega)

    @property
    def magnetic_prefactor(self) -> float:
        return self.electric_prefactor / self.kin.omega

    @property
    def dkx_domega(self) -> float:
        """Jacobian of the x propagation constant with frequency."""
        if self.kind == "SPP":
            return self.kin.k / (self.kin.k_x * self.kin.v_g)
        kx = self.kin.k_x
        if kx.imag != 0.0:
            raise ValueError("Jacobian defined for propagating modes only")
        return self.kin.omega * self.kin.eps_d / kx.real


def _spp_p(kin: SppKinematics) -> float:
    """Surface-mode normalization parameter p (reduced units)."""
    t = (kin.eps_m ** 2 + kin.eps_d) * (kin.eps_m ** 2 - kin.eps_d ** 2)
    return t / (
        2.0
        * kin.omega
        * kin.eps_m ** 2
        * kin.eps_d
        * math.sqrt(-(kin.eps_m + kin.eps_d))
    )


def _z_overlap(phi_out, psi_in, rel_tol: float = 1e-9):
    """x-component of the z-integrated E_out x conj(H_in) product.

    Returns (delta_coefficient, finite_part).  The delta coefficient collects
    pi times the weight of identically-zero phase differences (the same-mode
    delta channel); the finite part collects the analytic metal and bound-tail
    integrals together with the principal-value kernels i/K.
    """
    (m_out, d_out) = phi_out
    (m_in, d_in) = psi_in
    delta = 0.0j
    finite = 0.0j
    scale = 1.0
    for _, kappa in d_out + d_in:
        scale = max(scale, abs(kappa))
    for vo, ao in m_out:
        for vi, ai in m_in:
            c = vo[1] * np.conj(vi[2]) - vo[2] * np.conj(vi[1])
            finite += c / (ao + np.conj(ai))
    for vo, ko in d_out:
        for vi, ki in d_in:
            c = vo[1] * np.conj(vi[2]) - vo[2] * np.conj(vi[1])
            bigk = ko - np.conj(ki)
            if abs(bigk) < rel_tol * scale:
                delta += math.pi * c
            else:
                finite += c * 1j / bigk
    return delta, finite


def _overlap_parts(kind_out, kin_out, kind_in, kin_in):
    phi = _electric_terms(kind_out, kin_out)
    psi = _magnetic_terms(kind_in, kin_in)
    return _z_overlap(phi, psi)


def self_overlap(kind: str, kin) -> complex:
    """Overlap of a propagating mode with itself, normalized to one.

    The exact value of the reciprocity integral is 2*pi^2*hbar*omega per unit
    delta weight; this returns the computed value over that constant, so the
    analytic answer is exactly 1.
    """
    mode = ModeProfile(kind, kin)
    delta, finite = _overlap_parts(kind, kin, kind, kin)
    body = finite if kind == "SPP" else delta
    raw = (
        mode.electric_prefactor
        * mode.magnetic_prefactor
        * body
        * (2.0 * math.pi) ** 2
        * mode.dkx_domega
    )
    return complex(np.conj(raw) / (2.0 * math.pi ** 2 * kin.omega))


def cross_overlap(kind_a: str, kin_a, kind_b: str, kin_b) -> complex:
    """Normalized inner product of two same-side modes of distinct kinds.

    Vanishes (to numerical tolerance) for pairs at equal omega and k_y.  When
    a surface mode is involved every z-integral converges and the full value
    is returned; for radiation-radiation pairs the inner product is the
    coefficient of the same-q delta channel (the smooth principal-value
    remainder is the finite cross-polarization coupling, not part of the
    normalization, and is exposed through :func:`numeric_coupling`).
    """
    mode_a = ModeProfile(kind_a, kin_a)
    mode_b = ModeProfile(kind_b, kin_b)
    delta, finite = _overlap_parts(kind_a, kin_a, kind_b, kin_b)
    if kind_a != "SPP" and kind_b != "SPP":
        finite = 0.0j
    jac = math.sqrt(mode_a.dkx_domega * mode_b.dkx_domega)
    raw = (
        mode_a.electric_prefactor
        * mode_b.magnetic_prefactor
        * (delta + finite)
        * (2.0 * math.pi) ** 2
        * jac
    )
    return complex(np.conj(raw) / (2.0 * math.pi ** 2 * kin_a.omega))


def numeric_coupling(kind_out: str, kin_out, kind_in: str, kin_in) -> complex:
    """Cross-interface coupling by direct overlap of profiles.

    Out is the side-j mode (its electric profile), in the side-i mode (its
    conjugated magnetic profile); both must share omega and k_y.  This is the
    brute-force oracle for the analytic coupling catalogue.
    """
    mode_out = ModeProfile(kind_out, kin_out)
    mode_in = ModeProfile(kind_in, kin_in)
    delta, finite = _overlap_parts(kind_out, kin_out, kind_in, kin_in)
    jac = math.sqrt(mode_out.dkx_domega * mode_in.dkx_domega)
    raw = (
        mode_out.electric_prefactor
        * mode_in.magnetic_prefactor
        * (delta + finite)
        * (2.0 * math.pi) ** 2
        * jac
    )
    return complex(raw / (2.0 * math.pi ** 2 * kin_out.omega))
