"""Gauss-Legendre discretization of the radiation continua.

A single node set on [0, q_cut] is shared by both sides of the interface and
both polarisations; only the per-side classification into propagating and
evanescent nodes differs.  The cutoff follows
q_cut = 10 * max[(eps_di*k_i^2 - k_yi^2)^(1/2), (eps_dj*k_j^2 - k_yj^2)^(1/2)]
with k_s the surface-mode wavenumber of side s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .materials import (
    InterfaceSpec,
    radiation_kinematics,
    spp_kinematics,
    transmitted_angle,
)

__all__ = ["ModeGrid", "gauss_legendre", "build_grid"]


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes (roots of P_n, ascending) and weights on [-1, 1].

    Newton iteration from the Chebyshev-angle initial guess; tolerance 1e-14
    on |P_n(u)|.  Exact for polynomials of degree <= 2n - 1.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    i = np.arange(1, n + 1)
    x = np.cos(math.pi * (4.0 * i - 1.0) / (4.0 * n + 2.0))
    for _ in range(100):
        p, dp = _legendre_and_derivative(n, x)
        dx = p / dp
        x -= dx
        if np.max(np.abs(dx)) < 1e-14:
            break
    else:  # pragma: no cover - defect guard
        raise RuntimeError("Legendre root iteration did not converge")
    _, dp = _legendre_and_derivative(n, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    order = np.argsort(x)
    x, w = x[order], w[order]
    # Symmetrise to kill the last rounding asymmetry.
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return x, w


def _legendre_and_derivative(n: int, x: np.ndarray):
    """P_n(x) and P_n'(x) by the three-term recurrence."""
    p_prev = np.ones_like(x)
    p = x.copy()
    for k in range(2, n + 1):
        p_prev, p = p, ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k
    if n == 1:
        p, p_prev = x.copy(), np.ones_like(x)
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


@dataclass(frozen=True)
class ModeGrid:
    """Shared quadrature grid with per-side propagating-mode counts."""

    q_cut: float
    nodes: np.ndarray
    weights_w: np.ndarray
    weights_wp: np.ndarray
    mmax_i: int
    mmax_j: int

    @property
    def n_modes(self) -> int:
        return self.nodes.size

    def mmax(self, side: str) -> int:
        if side == "i":
            return self.mmax_i
        if side == "j":
            return self.mmax_j
        raise ValueError("side label must be 'i' or 'j'")


def build_grid(spec: InterfaceSpec) -> ModeGrid:
    """Quadrature grid for one interface configuration."""
    omega = spec.omega
    kin_i = spp_kinematics(spec, "i", spec.theta_ii)
    theta_t, _ = transmitted_angle(spec)
    kin_j = spp_kinematics(spec, "j", theta_t)
    k_y = kin_i.k_y
    q_cut = 10.0 * max(
        math.sqrt(kin_i.eps_d * kin_i.k ** 2 - k_y ** 2),
        math.sqrt(kin_j.eps_d * kin_j.k ** 2 - k_y ** 2),
    )
    u, w = gauss_legendre(spec.n_modes)
    nodes = 0.5 * q_cut * (u + 1.0)
    wp = 0.5 * q_cut * w

    def count_propagating(pair):
        eps_m = pair.eps_m(omega)
        flags = [
            radiation_kinematics(omega, pair.eps_d, eps_m, q, k_y).propagating
            for q in nodes
        ]
        return int(np.count_nonzero(flags))

    return ModeGrid(
        q_cut=q_cut,
        nodes=nodes,
        weights_w=w,
        weights_wp=wp,
        mmax_i=count_propagating(spec.side_i),
        mmax_j=count_propagating(spec.side_j),
    )
