"""Beamsplitter observables extracted from the transfer matrix.

A surface mode incident from side i populates one column of the transfer
matrix; its squared entries give the transmitted (tau) and reflected (rho)
surface-mode probabilities and the total radiative loss (sigma, summed over
the propagating radiation channels of both sides and polarisations).  The
forward and reverse (sides exchanged, matched incidence angle) runs combine
into an effective lossy beamsplitter, from which the two-boson interference
observables follow in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .materials import InterfaceSpec, matched_incidence_angle
from .transfer import TransferMatrix, build_transfer_matrix

__all__ = [
    "SplitterCoefficients",
    "ReciprocityReport",
    "RadiationChannel",
    "extract_coefficients",
    "reverse_spec",
    "reciprocity_report",
    "splitter_phase",
    "beamsplitter_matrix",
    "hom_coincidence",
    "two_spp_output",
    "radiation_pattern",
]


@dataclass(frozen=True)
class SplitterCoefficients:
    """Single-run scattering probabilities of the incident surface mode."""

    tau: float
    rho: float
    sigma: float
    t_amp: complex
    r_amp: complex

    @property
    def conservation_residual(self) -> float:
        return abs(self.tau + self.rho + self.sigma - 1.0)


@dataclass(frozen=True)
class ReciprocityReport:
    """Forward and reverse runs with their mutual deviations."""

    forward: SplitterCoefficients
    reverse: SplitterCoefficients
    theta_reverse: float

    @property
    def tau_gap(self) -> float:
        return abs(self.forward.tau - self.reverse.tau)

    @property
    def rho_gap(self) -> float:
        return abs(self.forward.rho - self.reverse.rho)


@dataclass(frozen=True)
class RadiationChannel:
    """One propagating radiation channel excited by the incident surface mode."""

    side: str
    polarization: str
    node: int
    q: float
    k_y: float
    k_x: complex
    power_fraction: float
    normalized_power: float


def extract_coefficients(tm: TransferMatrix) -> SplitterCoefficients:
    """tau, rho, sigma for a surface mode incident from side i.

    sigma sums |amplitude|^2 over the propagating radiation rows only
    (rows 1..mmax of each side); the evanescent rows carry no outgoing power.
    """
    t11 = tm.block(0, 0)
    t21 = tm.block(1, 0)
    t31 = tm.block(2, 0)
    t41 = tm.block(3, 0)
    r_amp = t11[0, 0]
    t_amp = t21[0, 0]
    mi, mj = tm.layout.mmax_i, tm.layout.mmax_j
    sigma = float(
        np.sum(np.abs(t11[1:mi + 1, 0]) ** 2)
        + np.sum(np.abs(t31[1:mi + 1, 0]) ** 2)
        + np.sum(np.abs(t21[1:mj + 1, 0]) ** 2)
        + np.sum(np.abs(t41[1:mj + 1, 0]) ** 2)
    )
    return SplitterCoefficients(
        tau=abs(t_amp) ** 2,
        rho=abs(r_amp) ** 2,
        sigma=sigma,
        t_amp=complex(t_amp),
        r_amp=complex(r_amp),
    )


def reverse_spec(spec: InterfaceSpec) -> InterfaceSpec:
    """Sides exchanged, incidence at the matched angle of the forward run."""
    return spec.swapped(matched_incidence_angle(spec))


def reciprocity_report(
    spec: InterfaceSpec, evanescent_reality: str = "total_k"
) -> ReciprocityReport:
    """Forward and reverse coefficient sets for one configuration."""
    fwd = extract_coefficients(build_transfer_matrix(spec, evanescent_reality))
    rspec = reverse_spec(spec)
    rev = extract_coefficients(build_transfer_matrix(rspec, evanescent_reality))
    return ReciprocityReport(
        forward=fwd, reverse=rev, theta_reverse=rspec.theta_ii
    )


def splitter_phase(spec: InterfaceSpec) -> float:
    """Relative reflection phase of the effective beamsplitter.

    Zero when the incident side has the larger dielectric constant, pi when
    it has the smaller one (hard-wall versus soft-wall reflection).
    """
    if spec.side_i.eps_d >= spec.side_j.eps_d:
        return 0.0
    return math.pi


def beamsplitter_matrix(report: ReciprocityReport, phi: float) -> np.ndarray:
    """Effective 2x2 splitter built from forward and reverse magnitudes."""
    fwd, rev = report.forward, report.reverse
    return np.array(
        [
            [
                np.exp(1j * phi) * math.sqrt(fwd.rho),
                math.sqrt(rev.tau),
            ],
            [
                math.sqrt(fwd.tau),
                -np.exp(-1j * phi) * math.sqrt(rev.rho),
            ],
        ],
        dtype=complex,
    )


def hom_coincidence(tau: float, rho: float) -> float:
    """Coincidence probability of two indistinguishable surface bosons."""
    return (tau - rho) ** 2


def two_spp_output(tau: float, rho: float, phi: float):
    """Two-boson output amplitudes (both-left, both-right, coincidence) and loss.

    The amplitudes refer to the states with both quanta on one output arm
    (factor sqrt(2) from bosonic enhancement) and one on each.
    """
    both_a = np.exp(1j * phi) * math.sqrt(2.0 * rho * tau)
    both_b = -np.exp(-1j * phi) * math.sqrt(2.0 * rho * tau)
    coincidence = tau - rho
    loss = 1.0 - (tau + rho) ** 2
    return (complex(both_a), complex(both_b), float(coincidence)), loss


def radiation_pattern(tm: TransferMatrix) -> list[RadiationChannel]:
    """Propagating radiation channels excited by the incident surface mode.

    power_fraction entries sum to sigma; normalized_power rescales by the
    largest contributor so the strongest channel reads exactly one.
    """
    entries = []
    rows = [
        ("i", "TM", tm.block(0, 0), tm.ctx.side_i, tm.layout.mmax_i),
        ("i", "TE", tm.block(2, 0), tm.ctx.side_i, tm.layout.mmax_i),
        ("j", "TM", tm.block(1, 0), tm.ctx.side_j, tm.layout.mmax_j),
        ("j", "TE", tm.block(3, 0), tm.ctx.side_j, tm.layout.mmax_j),
    ]
    for side_label, pol, blk, side, mmax in rows:
        for ell in range(1, mmax + 1):
            node = ell - 1
            frac = float(abs(blk[ell, 0]) ** 2)
            entries.append(
                (side_label, pol, node, float(side.q[node]),
                 complex(side.k_x[node]), frac)
            )
    peak = max((e[5] for e in entries), default=0.0)
    return [
        RadiationChannel(
            side=side_label,
            polarization=pol,
            node=node,
            q=q,
            k_y=float(tm.ctx.k_y),
            k_x=k_x,
            power_fraction=frac,
            normalized_power=frac / peak if peak > 0.0 else 0.0,
        )
        for side_label, pol, node, q, k_x, frac in entries
    ]
