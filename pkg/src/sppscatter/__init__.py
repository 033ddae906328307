"""Quantum scattering of surface plasmon polaritons at a compound interface.

Public API re-exports: configuration and kinematics (`materials`), quadrature
grids (`quadrature`), mode profiles (`fields`), analytic couplings
(`coupling`), transfer-matrix assembly (`transfer`), beamsplitter observables
(`splitter`) and the 50:50 design search (`optimizer`).
"""

from .materials import (
    OMEGA_P_SILVER,
    HalfSpacePair,
    InterfaceSpec,
    NonBoundModeError,
    TotalInternalReflectionError,
    matched_incidence_angle,
    tir_critical_angle,
    transmitted_angle,
)
from .quadrature import ModeGrid, build_grid
from .coupling import CouplingContext, build_c_blocks, build_context
from .transfer import (
    SingularBlockError,
    TransferMatrix,
    assemble_transfer,
    build_transfer_matrix,
    scatter,
)
from .splitter import (
    RadiationChannel,
    ReciprocityReport,
    SplitterCoefficients,
    beamsplitter_matrix,
    extract_coefficients,
    hom_coincidence,
    radiation_pattern,
    reciprocity_report,
    splitter_phase,
    two_spp_output,
)
from .optimizer import (
    CandidatePoint,
    OptimizationResult,
    SearchSpace,
    SweepRow,
    optimize,
    radiation_critical_angle,
    sweep,
)

__all__ = [
    "OMEGA_P_SILVER",
    "HalfSpacePair",
    "InterfaceSpec",
    "NonBoundModeError",
    "TotalInternalReflectionError",
    "matched_incidence_angle",
    "tir_critical_angle",
    "transmitted_angle",
    "ModeGrid",
    "build_grid",
    "CouplingContext",
    "build_context",
    "build_c_blocks",
    "SingularBlockError",
    "TransferMatrix",
    "assemble_transfer",
    "build_transfer_matrix",
    "scatter",
    "SplitterCoefficients",
    "ReciprocityReport",
    "RadiationChannel",
    "extract_coefficients",
    "reciprocity_report",
    "splitter_phase",
    "beamsplitter_matrix",
    "hom_coincidence",
    "two_spp_output",
    "radiation_pattern",
    "SearchSpace",
    "CandidatePoint",
    "OptimizationResult",
    "SweepRow",
    "optimize",
    "sweep",
    "radiation_critical_angle",
]

__version__ = "0.1.0"
