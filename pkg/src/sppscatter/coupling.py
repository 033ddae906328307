"""Analytic mode couplings across the interface and their matrix assembly.

The overlap of a side-j output mode with a side-i input mode reduces, after
the z integration, to closed forms built from three ingredients: bound-tail
integrals 1/(nu + nu'), half-line plane-wave products realized as pi on the
delta channel and i/K off it, and the single-interface Fresnel responses

    r_TM = (i*eps_d*nu - eps_m*q) / (i*eps_d*nu + eps_m*q)
    r_TE = (i*nu - q) / (i*nu + q).

All couplings are normalized so that every mode has unit self-overlap; the
mode-amplitude factors M carry that normalization.  Matrices are assembled
with row index = output (side j) and column index = input (side i), slot 0
reserved for the surface mode and slots 1..N+1 for the quadrature nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .materials import InterfaceSpec, csqrt, spp_kinematics, transmitted_angle
from .quadrature import ModeGrid, build_grid

__all__ = [
    "SideModes",
    "CouplingContext",
    "CBlocks",
    "fresnel_tm",
    "fresnel_te",
    "delta_plus_realization",
    "build_context",
    "build_c_blocks",
]


def fresnel_tm(eps_d, eps_m, nu, q):
    """TM response of a single metal-dielectric boundary."""
    return (1j * eps_d * nu - eps_m * q) / (1j * eps_d * nu + eps_m * q)


def fresnel_te(nu, q):
    """TE response of a single metal-dielectric boundary."""
    return (1j * nu - q) / (1j * nu + q)


def delta_plus_realization(q_out: np.ndarray, q_in: np.ndarray, sign_in: int) -> np.ndarray:
    """Discrete realization of the one-sided delta kernel 2*pi*delta_+.

    Entry (m, n) realizes the distribution at argument q_out[m] + sign_in *
    q_in[n]: pi when the argument vanishes identically (difference kernel on
    the shared grid's diagonal), i / argument otherwise (the principal-value
    channel, exact for arguments with positive imaginary regularization).
    """
    arg = q_out[:, None] + sign_in * q_in[None, :]
    if sign_in < 0:
        out = np.zeros_like(arg, dtype=complex)
        off = ~np.eye(arg.shape[0], dtype=bool)
        out[off] = 1j / arg[off]
        out[~off] = math.pi
        return out
    return 1j / arg


@dataclass(frozen=True)
class SideModes:
    """All per-side mode data on the shared grid, fully vectorized."""

    eps_d: float
    eps_m: float
    spp: object  # SppKinematics at this side's angle
    q: np.ndarray
    k: np.ndarray
    k_x: np.ndarray
    nu: np.ndarray
    r_tm: np.ndarray
    r_te: np.ndarray
    propagating: np.ndarray
    k_is_real: np.ndarray


@dataclass(frozen=True)
class CouplingContext:
    """Everything needed to evaluate couplings for one configuration."""

    spec: InterfaceSpec
    grid: ModeGrid
    omega: float
    k_y: float
    side_i: SideModes
    side_j: SideModes


@dataclass(frozen=True)
class CBlocks:
    """The assembled coupling matrices, shape (nodes+1, nodes+1).

    tmtm couples TM-family outputs to TM-family inputs (slot 0 = surface
    mode on both axes); tmte couples TM-family outputs to TE inputs; tete
    couples TE outputs to TE inputs.  The TE-output/TM-input block vanishes
    identically and is not stored.
    """

    tmtm: np.ndarray
    tmte: np.ndarray
    tete: np.ndarray


def _side_modes(omega, pair, theta, nodes, k_y) -> SideModes:
    from .materials import _spp_kin

    spp = _spp_kin(omega, pair, theta)
    eps_d, eps_m = pair.eps_d, pair.eps_m(omega)
    q = np.asarray(nodes, dtype=float)
    k = np.array([csqrt(omega * omega * eps_d - qq * qq) for qq in q])
    k_x = np.array([csqrt(kk * kk - k_y * k_y) for kk in k])
    nu = np.array(
        [csqrt(omega * omega * (eps_d - eps_m) - qq * qq) for qq in q]
    )
    r_tm = fresnel_tm(eps_d, eps_m, nu, q)
    r_te = fresnel_te(nu, q)
    propagating = (k_x.imag == 0.0) & (k_x.real > 0.0)
    k_is_real = k.imag == 0.0
    return SideModes(
        eps_d=eps_d, eps_m=eps_m, spp=spp, q=q, k=k, k_x=k_x, nu=nu,
        r_tm=r_tm, r_te=r_te, propagating=propagating, k_is_real=k_is_real,
    )


def build_context(spec: InterfaceSpec, grid: ModeGrid | None = None) -> CouplingContext:
    """Resolve both sides of the interface on the shared quadrature grid."""
    if grid is None:
        grid = build_grid(spec)
    omega = spec.omega
    kin_i = spp_kinematics(spec, "i", spec.theta_ii)
    theta_t, _ = transmitted_angle(spec)
    k_y = kin_i.k_y
    side_i = _side_modes(omega, spec.side_i, spec.theta_ii, grid.nodes, k_y)
    side_j = _side_modes(omega, spec.side_j, theta_t, grid.nodes, k_y)
    return CouplingContext(
        spec=spec, grid=grid, omega=omega, k_y=k_y,
        side_i=side_i, side_j=side_j,
    )


# ---------------------------------------------------------------------------
# Mode amplitude factors (unit self-overlap normalization).
# ---------------------------------------------------------------------------


def _norm_spp(spp) -> complex:
    """Amplitude factor of the surface mode."""
    num = (
        spp.omega * spp.eps_d * spp.eps_m ** 2 * spp.nu0
        / (math.pi * spp.k_x * (spp.eps_m ** 2 - spp.eps_d ** 2))
    )
    return csqrt(num)


def _norm_tm(side: SideModes, omega: float) -> np.ndarray:
    """Amplitude factors of the TM radiation modes (vectorized)."""
    kxc = np.conj(side.k_x)
    return np.array(
        [
            csqrt(z)
            for z in omega * side.eps_d / (4.0 * math.pi ** 2 * kxc)
            * (np.conj(side.k) / side.k)
        ]
    )


def _norm_te(side: SideModes, omega: float) -> np.ndarray:
    """Amplitude factors of the TE radiation modes (vectorized)."""
    return np.array(
        [
            csqrt(z)
            for z in 1.0
            / (4.0 * math.pi ** 2 * omega * side.k_x)
            * (side.k / np.conj(side.k))
        ]
    )


# ---------------------------------------------------------------------------
# Raw overlap integrals (per mode pair, before amplitude factors).
# ---------------------------------------------------------------------------


def _metal_tail_kernel(ctx: CouplingContext) -> np.ndarray:
    """Realized metal-side tail integral 1/(nu_j + conj(nu_i)) as a matrix.

    Beyond q = omega*sqrt(eps_d - eps_m) the metal-side constants turn purely
    imaginary and the tail oscillates instead of decaying; its half-line
    integral then carries its own delta channel.  Where the denominator
    vanishes identically (equal media, diagonal node) the kernel is realized
    as pi * |Im nu| / q -- the delta in the metal oscillation variable mapped
    onto the shared q grid, placed on the unweighted diagonal exactly like
    the dielectric-side delta channel.  Elsewhere the plain reciprocal is the
    principal-value realization.
    """
    nu_j = ctx.side_j.nu[:, None]
    nu_ic = np.conj(ctx.side_i.nu)[None, :]
    den = nu_j + nu_ic
    tiny = den == 0.0
    kernel = np.where(tiny, 1.0, den) ** -1
    if np.any(tiny):
        q_j = ctx.side_j.q[:, None]
        repl = math.pi * np.abs(nu_j.imag) / q_j
        kernel = np.where(tiny, repl, kernel)
    return kernel


def _i_pp(ctx: CouplingContext) -> complex:
    si, sj = ctx.side_i.spp, ctx.side_j.spp
    eps_dj, eps_mj = ctx.side_j.eps_d, ctx.side_j.eps_m
    pref = (2.0 * math.pi * si.k_x / ctx.omega) * (sj.k / si.k)
    return pref * (
        1.0 / (eps_mj * (sj.nu + si.nu))
        + 1.0 / (eps_dj * (sj.nu0 + si.nu0))
    )


def _i_tmp(ctx: CouplingContext) -> np.ndarray:
    """Output TM radiation (side j, per node) from the input surface mode."""
    si = ctx.side_i.spp
    sj = ctx.side_j
    eps_dj, eps_mj = sj.eps_d, sj.eps_m
    pref = (2.0 * math.pi * si.k_x / ctx.omega) * (sj.k / si.k)
    bracket = (
        (1.0 / (si.nu0 + 1j * sj.q) - sj.r_tm / (si.nu0 - 1j * sj.q)) / eps_dj
        + (1.0 - sj.r_tm) / (si.nu + sj.nu) / eps_mj
    )
    return pref * bracket


def _i_ptm(ctx: CouplingContext) -> np.ndarray:
    """Output surface mode from input TM radiation (side i, per node)."""
    si = ctx.side_i
    sj = ctx.side_j.spp
    eps_dj, eps_mj = ctx.side_j.eps_d, ctx.side_j.eps_m
    kxc = np.conj(si.k_x)
    kic = np.conj(si.k)
    r_c = np.conj(si.r_tm)
    nu_ic = np.conj(si.nu)
    pref = (2.0 * math.pi * kxc / ctx.omega) * (sj.k / kic)
    bracket = (
        (1.0 / (sj.nu0 - 1j * si.q) - r_c / (sj.nu0 + 1j * si.q)) / eps_dj
        + (1.0 - r_c) / (sj.nu + nu_ic) / eps_mj
    )
    return pref * bracket


def _i_tmtm(ctx: CouplingContext) -> np.ndarray:
    si, sj = ctx.side_i, ctx.side_j
    eps_dj, eps_mj = sj.eps_d, sj.eps_m
    kxc = np.conj(si.k_x)[None, :]
    kic = np.conj(si.k)[None, :]
    kj = sj.k[:, None]
    r_j = sj.r_tm[:, None]
    r_ic = np.conj(si.r_tm)[None, :]
    nu_j = sj.nu[:, None]
    nu_ic = np.conj(si.nu)[None, :]
    pref = (2.0 * math.pi * kxc / ctx.omega) * (kj / kic)
    qj, qi = sj.q, si.q
    d_diff = delta_plus_realization(qj, qi, -1)
    d_diff_r = delta_plus_realization(-qj, -qi, -1)  # argument -qj + qi
    d_sum = delta_plus_realization(qj, qi, +1)
    d_sum_n = -d_sum  # argument -qj - qi
    delta_part = (
        r_j * r_ic * d_diff - r_j * d_sum - r_ic * d_sum_n + d_diff_r
    ) / eps_dj
    smooth = (1.0 - r_j) * (1.0 - r_ic) * _metal_tail_kernel(ctx) / eps_mj
    return pref * (delta_part + smooth)


def _i_pte(ctx: CouplingContext) -> np.ndarray:
    """Output surface mode from input TE radiation (side i, per node)."""
    si = ctx.side_i
    sj = ctx.side_j.spp
    eps_dj, eps_mj = ctx.side_j.eps_d, ctx.side_j.eps_m
    k_y = ctx.k_y
    kic = np.conj(si.k)
    r_c = np.conj(si.r_te)
    a = k_y * 1j * sj.nu0 * kic / (eps_dj * sj.k)
    b = k_y * si.q * sj.k / (eps_dj * kic)
    c = k_y * 1j * sj.nu * kic / (eps_mj * sj.k)
    d = k_y * np.conj(1j * si.nu) * sj.k / (eps_mj * kic)
    bracket = (
        (a - b) * r_c / (sj.nu0 + 1j * si.q)
        - (a + b) / (sj.nu0 - 1j * si.q)
        + (c - d) * (1.0 - r_c) / (sj.nu + np.conj(si.nu))
    )
    return (2.0 * math.pi / ctx.omega) * bracket


def _i_tete(ctx: CouplingContext) -> np.ndarray:
    si, sj = ctx.side_i, ctx.side_j
    kic = np.conj(si.k)[None, :]
    kj = sj.k[:, None]
    kxj = sj.k_x[:, None]
    r_j = sj.r_te[:, None]
    r_ic = np.conj(si.r_te)[None, :]
    nu_j = sj.nu[:, None]
    nu_ic = np.conj(si.nu)[None, :]
    qj, qi = sj.q, si.q
    d_diff = delta_plus_realization(qj, qi, -1)
    d_diff_r = delta_plus_realization(-qj, -qi, -1)
    d_sum = delta_plus_realization(qj, qi, +1)
    d_sum_n = -d_sum
    bracket = (
        r_j * r_ic * d_diff
        - r_j * d_sum
        - r_ic * d_sum_n
        + d_diff_r
        + (1.0 - r_j) * (1.0 - r_ic) * _metal_tail_kernel(ctx)
    )
    return 2.0 * math.pi * kxj * ctx.omega * (kic / kj) * bracket


def _i_tmte(ctx: CouplingContext) -> np.ndarray:
    """Output TM radiation from input TE radiation (cross-polarization)."""
    si, sj = ctx.side_i, ctx.side_j
    eps_dj, eps_mj = sj.eps_d, sj.eps_m
    k_y = ctx.k_y
    kic = np.conj(si.k)[None, :]
    kj = sj.k[:, None]
    qj = sj.q[:, None]
    qi = si.q[None, :]
    r_tmj = sj.r_tm[:, None]
    r_teic = np.conj(si.r_te)[None, :]
    nu_j = sj.nu[:, None]
    nu_ic = np.conj(si.nu)[None, :]
    a = k_y * qj * kic / (eps_dj * kj)
    b = k_y * qi * kj / (eps_dj * kic)
    c = k_y * 1j * nu_j * kic / (eps_mj * kj)
    d = k_y * np.conj(1j * si.nu)[None, :] * kj / (eps_mj * kic)
    d_diff = delta_plus_realization(sj.q, si.q, -1)
    d_diff_r = delta_plus_realization(-sj.q, -si.q, -1)
    d_sum = delta_plus_realization(sj.q, si.q, +1)
    d_sum_n = -d_sum
    bracket = (
        (-a + b) * r_tmj * r_teic * d_diff
        + (a + b) * r_tmj * d_sum
        - (a + b) * r_teic * d_sum_n
        + (a - b) * d_diff_r
        + (c - d) * (1.0 - r_tmj) * (1.0 - r_teic) * _metal_tail_kernel(ctx)
    )
    return (2.0 * math.pi / ctx.omega) * bracket


# ---------------------------------------------------------------------------
# Coupling coefficients (amplitude factors applied) and matrix assembly.
# ---------------------------------------------------------------------------


def coupling_pp(ctx: CouplingContext) -> complex:
    return complex(
        _norm_spp(ctx.side_j.spp)
        * np.conj(_norm_spp(ctx.side_i.spp))
        * _i_pp(ctx)
    )


def coupling_tmp(ctx: CouplingContext) -> np.ndarray:
    return _norm_tm(ctx.side_j, ctx.omega) * np.conj(
        _norm_spp(ctx.side_i.spp)
    ) * _i_tmp(ctx)


def coupling_ptm(ctx: CouplingContext) -> np.ndarray:
    return _norm_spp(ctx.side_j.spp) * np.conj(
        _norm_tm(ctx.side_i, ctx.omega)
    ) * _i_ptm(ctx)


def coupling_pte(ctx: CouplingContext) -> np.ndarray:
    return _norm_spp(ctx.side_j.spp) * np.conj(
        _norm_te(ctx.side_i, ctx.omega)
    ) * _i_pte(ctx)


def coupling_tmtm(ctx: CouplingContext) -> np.ndarray:
    mj = _norm_tm(ctx.side_j, ctx.omega)
    mi = np.conj(_norm_tm(ctx.side_i, ctx.omega))
    return mj[:, None] * mi[None, :] * _i_tmtm(ctx)


def coupling_tete(ctx: CouplingContext) -> np.ndarray:
    mj = _norm_te(ctx.side_j, ctx.omega)
    mi = np.conj(_norm_te(ctx.side_i, ctx.omega))
    return mj[:, None] * mi[None, :] * _i_tete(ctx)


def coupling_tmte(ctx: CouplingContext) -> np.ndarray:
    mj = _norm_tm(ctx.side_j, ctx.omega)
    mi = np.conj(_norm_te(ctx.side_i, ctx.omega))
    return mj[:, None] * mi[None, :] * _i_tmte(ctx)


def _radiation_weighting(wp: np.ndarray) -> np.ndarray:
    """sqrt(w'_m w'_n) off the diagonal, 1 on it (delta channel is unweighted)."""
    s = np.sqrt(wp)
    w = s[:, None] * s[None, :]
    np.fill_diagonal(w, 1.0)
    return w


def build_c_blocks(ctx: CouplingContext) -> CBlocks:
    """Assemble the (nodes+1)x(nodes+1) coupling matrices from the catalogue."""
    n = ctx.grid.n_modes
    wp = ctx.grid.weights_wp
    sw = np.sqrt(wp)
    w_rr = _radiation_weighting(wp)

    tmtm = np.zeros((n + 1, n + 1), dtype=complex)
    tmtm[0, 0] = coupling_pp(ctx)
    tmtm[0, 1:] = coupling_ptm(ctx) * sw
    tmtm[1:, 0] = coupling_tmp(ctx) * sw
    tmtm[1:, 1:] = coupling_tmtm(ctx) * w_rr

    tmte = np.zeros((n + 1, n + 1), dtype=complex)
    tmte[0, 1:] = coupling_pte(ctx) * sw
    tmte[1:, 1:] = coupling_tmte(ctx) * w_rr

    tete = np.zeros((n + 1, n + 1), dtype=complex)
    tete[1:, 1:] = coupling_tete(ctx) * w_rr

    return CBlocks(tmtm=tmtm, tmte=tmte, tete=tete)
