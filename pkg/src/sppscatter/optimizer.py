"""Deterministic constrained search for target splitting ratios.

Per incidence angle, the search minimizes the L1 distance of (tau, rho) to a
target over the material parameters, subject to the loss bound sigma <= 0.05
and the reciprocity gaps |tau - tau'|, |rho - rho'|, |sigma - sigma'| <=
0.025.  The search domain excludes configurations at or beyond the
radiation critical angle of the transmitted side (conserved k_y >=
omega*sqrt(eps_dj)), where the transmitted radiation cone closes and sweeps
are stopped; the interesting near-critical region lies just inside that
boundary.

Strategy: coarse uniform grid (25 points per axis) followed by coordinate
descent with shrinking steps (3 rounds, shrink factor 5).  Fully
deterministic; repeated evaluations are cached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .materials import (
    HalfSpacePair,
    InterfaceSpec,
    NonBoundModeError,
    TotalInternalReflectionError,
    drude_epsilon,
    omega_from_wavelength,
    spp_wavenumber,
    transmitted_angle,
)
from .splitter import ReciprocityReport, reciprocity_report
from .transfer import SingularBlockError

__all__ = [
    "SearchSpace",
    "CandidatePoint",
    "OptimizationResult",
    "SweepRow",
    "radiation_critical_angle",
    "optimize",
    "sweep",
]

SIGMA_MAX = 0.05
GAP_MAX = 0.025
COARSE_POINTS = 25
DESCENT_ROUNDS = 3
DESCENT_SHRINK = 5.0


@dataclass(frozen=True)
class SearchSpace:
    """Parameter ranges for the splitter optimization.

    Plasma frequencies are in units of the silver value; lock_metals pins
    both to silver and removes those axes from the search.
    """

    eps_di: tuple[float, float] = (1.0, 3.0)
    eps_dj: float = 1.0
    omega_pi: tuple[float, float] = (1.0, 2.0)
    omega_pj: tuple[float, float] = (1.0, 2.0)
    lock_metals: bool = True

    def axes(self) -> list[tuple[str, float, float]]:
        axes = [("eps_di", *self.eps_di)]
        if not self.lock_metals:
            axes.append(("omega_pi", *self.omega_pi))
            axes.append(("omega_pj", *self.omega_pj))
        return axes


@dataclass(frozen=True)
class CandidatePoint:
    """One evaluated configuration with its constraint status."""

    theta_i: float
    eps_di: float
    eps_dj: float
    omega_pi: float
    omega_pj: float
    tau: float
    rho: float
    sigma: float
    tau_gap: float
    rho_gap: float
    sigma_gap: float
    objective: float

    @property
    def feasible(self) -> bool:
        return (
            self.sigma <= SIGMA_MAX
            and self.tau_gap <= GAP_MAX
            and self.rho_gap <= GAP_MAX
            and self.sigma_gap <= GAP_MAX
        )


@dataclass
class OptimizationResult:
    """Best point per incidence angle; points is parallel to theta_grid."""

    target: tuple[float, float]
    theta_grid: list[float]
    points: list[CandidatePoint | None] = field(default_factory=list)

    @property
    def feasible_points(self) -> list[CandidatePoint]:
        return [p for p in self.points if p is not None and p.feasible]

    @property
    def best(self) -> CandidatePoint | None:
        cands = self.feasible_points
        if not cands:
            return None
        return min(cands, key=lambda p: p.objective)


def radiation_critical_angle(
    lambda0: float, eps_di: float, eps_dj: float, omega_pi: float
) -> float:
    """Incidence angle closing the transmitted-side radiation cone.

    Beyond asin(omega*sqrt(eps_dj)/k_i) the conserved k_y exceeds every
    propagating transmitted radiation mode; sweeps and searches stop there.
    """
    omega = omega_from_wavelength(lambda0)
    k_i = spp_wavenumber(omega, eps_di, drude_epsilon(omega, omega_pi))
    s = omega * math.sqrt(eps_dj) / k_i
    if s >= 1.0:
        return math.pi / 2.0
    return math.asin(s)


def _evaluate(
    lambda0: float,
    theta_i: float,
    eps_di: float,
    eps_dj: float,
    omega_pi: float,
    omega_pj: float,
    n_modes: int,
    target: tuple[float, float],
    cache: dict,
) -> CandidatePoint | None:
    key = (round(eps_di, 12), round(omega_pi, 12), round(omega_pj, 12))
    if key in cache:
        return cache[key]
    point = None
    if theta_i < radiation_critical_angle(lambda0, eps_di, eps_dj, omega_pi):
        try:
            spec = InterfaceSpec(
                side_i=HalfSpacePair(eps_di, omega_pi),
                side_j=HalfSpacePair(eps_dj, omega_pj),
                lambda0=lambda0,
                theta_ii=theta_i,
                n_modes=n_modes,
            )
            rep = reciprocity_report(spec)
        except (
            NonBoundModeError,
            TotalInternalReflectionError,
            SingularBlockError,
            ValueError,
        ):
            rep = None
        if rep is not None:
            f, r = rep.forward, rep.reverse
            point = CandidatePoint(
                theta_i=theta_i,
                eps_di=eps_di,
                eps_dj=eps_dj,
                omega_pi=omega_pi,
                omega_pj=omega_pj,
                tau=f.tau,
                rho=f.rho,
                sigma=f.sigma,
                tau_gap=rep.tau_gap,
                rho_gap=rep.rho_gap,
                sigma_gap=abs(f.sigma - r.sigma),
                objective=abs(f.tau - target[0]) + abs(f.rho - target[1]),
            )
    cache[key] = point
    return point


def _score(point: CandidatePoint | None) -> float:
    if point is None or not point.feasible:
        return math.inf
    return point.objective


def optimize(
    target: tuple[float, float],
    space: SearchSpace,
    lambda0: float,
    theta_grid: list[float],
    n_modes: int = 150,
) -> OptimizationResult:
    """Best feasible configuration per incidence angle (radians).

    Deterministic two-stage search per angle: 25-point coarse grid on each
    axis, then three rounds of coordinate descent with the step shrinking by
    a factor of five each round.  Angles where no feasible point exists get
    None.
    """
    result = OptimizationResult(target=target, theta_grid=list(theta_grid))
    axes = space.axes()
    for theta_i in theta_grid:
        cache: dict = {}

        def ev(values: dict) -> CandidatePoint | None:
            return _evaluate(
                lambda0,
                theta_i,
                values["eps_di"],
                space.eps_dj,
                values.get("omega_pi", 1.0),
                values.get("omega_pj", 1.0),
                n_modes,
                target,
                cache,
            )

        best_vals = None
        best_pt = None
        # Coarse stage: full grid over each axis independently is enough for
        # one axis; for several, scan axis-by-axis from the space midpoint.
        current = {name: 0.5 * (lo + hi) for name, lo, hi in axes}
        for name, lo, hi in axes:
            for idx in range(COARSE_POINTS):
                val = lo + (hi - lo) * idx / (COARSE_POINTS - 1)
                trial = dict(current)
                trial[name] = val
                pt = ev(trial)
                if _score(pt) < _score(best_pt) or (
                    best_pt is None and pt is not None
                ):
                    best_pt, best_vals = pt, trial
            if best_vals is not None:
                current = dict(best_vals)
        if best_vals is None:
            # Nothing evaluable on the coarse grid (e.g. all beyond cutoff).
            result.points.append(None)
            continue
        # Descent stage.
        steps = {name: (hi - lo) / (COARSE_POINTS - 1) for name, lo, hi in axes}
        bounds = {name: (lo, hi) for name, lo, hi in axes}
        current = dict(best_vals)
        for _ in range(DESCENT_ROUNDS):
            for name, _, _ in axes:
                improved = True
                while improved:
                    improved = False
                    for sign in (+1.0, -1.0):
                        val = current[name] + sign * steps[name]
                        lo, hi = bounds[name]
                        if not lo <= val <= hi:
                            continue
                        trial = dict(current)
                        trial[name] = val
                        pt = ev(trial)
                        if _score(pt) < _score(best_pt) or (
                            best_pt is None and pt is not None
                        ):
                            best_pt, best_vals = pt, trial
                            current = dict(trial)
                            improved = True
                            break
            for name in steps:
                steps[name] /= DESCENT_SHRINK
        result.points.append(best_pt)
    return result


@dataclass(frozen=True)
class SweepRow:
    """One sweep grid point; coefficients are None for skipped points."""

    lambda0: float
    theta_i: float
    eps_di: float
    eps_dj: float
    omega_pi: float
    omega_pj: float
    theta_t: float | None
    report: ReciprocityReport | None
    skip_reason: str | None


def sweep(
    lambda0: float,
    theta_grid: list[float],
    eps_di_values: list[float],
    eps_dj: float = 1.0,
    omega_pi: float = 1.0,
    omega_pj: float = 1.0,
    n_modes: int = 200,
) -> list[SweepRow]:
    """Coefficient table over incidence angle and eps_di axes.

    Rows at or beyond the transmitted-side radiation critical angle are
    skipped with a reason code, mirroring sweeps that stop near the critical
    angle.
    """
    rows: list[SweepRow] = []
    for eps_di in eps_di_values:
        cutoff = radiation_critical_angle(lambda0, eps_di, eps_dj, omega_pi)
        for theta_i in theta_grid:
            base = dict(
                lambda0=lambda0, theta_i=theta_i, eps_di=eps_di,
                eps_dj=eps_dj, omega_pi=omega_pi, omega_pj=omega_pj,
            )
            if theta_i >= cutoff:
                rows.append(
                    SweepRow(
                        **base, theta_t=None, report=None,
                        skip_reason="beyond-radiation-critical-angle",
                    )
                )
                continue
            try:
                spec = InterfaceSpec(
                    side_i=HalfSpacePair(eps_di, omega_pi),
                    side_j=HalfSpacePair(eps_dj, omega_pj),
                    lambda0=lambda0,
                    theta_ii=theta_i,
                    n_modes=n_modes,
                )
                theta_t, _ = transmitted_angle(spec)
                report = reciprocity_report(spec)
            except (NonBoundModeError, TotalInternalReflectionError) as exc:
                rows.append(
                    SweepRow(
                        **base, theta_t=None, report=None,
                        skip_reason=type(exc).__name__,
                    )
                )
                continue
            rows.append(
                SweepRow(
                    **base, theta_t=theta_t, report=report, skip_reason=None
                )
            )
    return rows
