"""Transfer-matrix assembly from the coupling blocks.

The mode-matching conditions at the interface close into a linear map between
the amplitudes travelling toward the boundary and those travelling away from
it.  Two ingredients enter: D matrices (used transposed on the side-j
amplitudes) and F matrices (used conjugated on the side-i amplitudes), both
obtained from the coupling blocks by rescaling the evanescent input/output
columns/rows with unit-modulus factors +-i that restore unit self-coupling on
the diagonal.

The evanescent factor depends on which reality test classifies a node:

* ``total_k`` (default): the factor is +i when the total dielectric
  wavenumber k = sqrt(omega^2 eps_d - q^2) is real and -i when it is
  imaginary (reversed for TE outputs/inputs).  This choice equals
  1 / C_nn exactly, node by node, so the rescaled diagonals are exactly one.
* ``k_x``: the same two-branch table keyed on the reality of the x component
  instead; since every evanescent node has imaginary k_x this collapses to a
  single branch.

Amplitude vector layout (length 4*(nodes+1)): blocks (A_TM, B_TM, A_TE, B_TE)
where A lives on side i and B on side j, slot 0 of each block is the surface
mode (physical only in the TM family) and slots 1..nodes the quadrature nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coupling import CBlocks, CouplingContext, build_c_blocks, build_context
from .materials import InterfaceSpec

__all__ = [
    "SingularBlockError",
    "BlockLayout",
    "TransferMatrix",
    "build_df",
    "assemble_transfer",
    "build_transfer_matrix",
    "direct_transfer",
    "scatter",
]


class SingularBlockError(np.linalg.LinAlgError):
    """A linear solve in the transfer assembly encountered a singular block."""


@dataclass(frozen=True)
class BlockLayout:
    """Index bookkeeping for the block-structured amplitude vectors."""

    n_modes: int
    mmax_i: int
    mmax_j: int

    @property
    def block(self) -> int:
        return self.n_modes + 1

    def slots(self, family: int) -> slice:
        b = self.block
        return slice(family * b, (family + 1) * b)


@dataclass(frozen=True)
class TransferMatrix:
    """Assembled transfer matrix and the blocks it was built from.

    ``t`` maps incoming amplitudes (A_TM^f, B_TM^b, A_TE^f, B_TE^b) to the
    outgoing ones (A_TM^b, B_TM^f, A_TE^b, B_TE^f).
    """

    ctx: CouplingContext
    layout: BlockLayout
    t: np.ndarray
    d_tmtm: np.ndarray
    d_tmte: np.ndarray
    d_tete: np.ndarray
    f_tmtm: np.ndarray
    f_tmte: np.ndarray
    f_tete: np.ndarray

    def block(self, row: int, col: int) -> np.ndarray:
        b = self.layout.block
        return self.t[row * b:(row + 1) * b, col * b:(col + 1) * b]

    def save(self, path) -> None:
        """Dump the transfer matrix and block metadata to an .npz file."""
        np.savez_compressed(
            path,
            t=self.t,
            n_modes=self.layout.n_modes,
            mmax_i=self.layout.mmax_i,
            mmax_j=self.layout.mmax_j,
        )


def _evanescent_factors(side, family: str, role: str, mode: str) -> np.ndarray:
    """Per-node unit factors applied to evanescent columns (D) or rows (F).

    ``family`` is "TM" or "TE" (of the rescaled axis), ``role`` is "in" or
    "out" and only documents intent, ``mode`` selects the reality test.
    """
    if mode == "total_k":
        k_real = side.k_is_real
    elif mode == "k_x":
        k_real = side.k_x.imag == 0.0
    else:
        raise ValueError("evanescent_reality must be 'total_k' or 'k_x'")
    base = np.where(k_real, 1j, -1j)
    if family == "TE":
        base = -base
    factors = np.ones(side.q.size, dtype=complex)
    ev = ~side.propagating
    factors[ev] = base[ev]
    return factors


def build_df(
    ctx: CouplingContext,
    blocks: CBlocks | None = None,
    evanescent_reality: str = "total_k",
):
    """D and F matrices from the coupling blocks.

    D rescales evanescent input columns (side i); F rescales evanescent
    output rows (side j).  Returns (d_tmtm, d_tmte, d_tete, f_tmtm, f_tmte,
    f_tete); the TE-output/TM-input members are identically zero and omitted.
    """
    if blocks is None:
        blocks = build_c_blocks(ctx)
    col_tm = _evanescent_factors(ctx.side_i, "TM", "in", evanescent_reality)
    col_te = _evanescent_factors(ctx.side_i, "TE", "in", evanescent_reality)
    row_tm = _evanescent_factors(ctx.side_j, "TM", "out", evanescent_reality)
    row_te = _evanescent_factors(ctx.side_j, "TE", "out", evanescent_reality)

    def rescale_cols(mat, col):
        out = mat.copy()
        out[:, 1:] = out[:, 1:] * col[None, :]
        return out

    def rescale_rows(mat, row):
        out = mat.copy()
        out[1:, :] = out[1:, :] * row[:, None]
        return out

    d_tmtm = rescale_cols(blocks.tmtm, col_tm)
    d_tmte = rescale_cols(blocks.tmte, col_te)
    d_tete = rescale_cols(blocks.tete, col_te)
    f_tmtm = rescale_rows(blocks.tmtm, row_tm)
    f_tmte = rescale_rows(blocks.tmte, row_tm)
    f_tete = rescale_rows(blocks.tete, row_te)
    return d_tmtm, d_tmte, d_tete, f_tmtm, f_tmte, f_tete


def _solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularBlockError(str(exc)) from exc


def assemble_transfer(
    ctx: CouplingContext,
    blocks: CBlocks | None = None,
    evanescent_reality: str = "total_k",
) -> TransferMatrix:
    """Close the matching conditions into the 4x4-block transfer matrix."""
    d_tmtm, d_tmte, d_tete, f_tmtm, f_tmte, f_tete = build_df(
        ctx, blocks, evanescent_reality
    )
    n = ctx.grid.n_modes
    b = n + 1
    eye = np.eye(b, dtype=complex)

    dt_tmtm = d_tmtm.T
    dt_tmte = d_tmte.T
    dt_tete = d_tete.T
    fc_tmtm = f_tmtm.conj()
    fc_tmte = f_tmte.conj()
    fc_tete = f_tete.conj()

    g = dt_tmtm @ fc_tmtm
    one_plus_g = eye + g

    def p_apply(x):
        return _solve(one_plus_g, x)

    k_mat = dt_tmte @ fc_tmtm
    h_mat = dt_tmtm @ fc_tmte
    s_te = dt_tmte @ fc_tmte + dt_tete @ fc_tete

    chi_inv = eye + s_te - k_mat @ p_apply(h_mat)

    def chi_apply(x):
        return _solve(chi_inv, x)

    t31 = chi_apply(k_mat @ (p_apply(g - eye) - eye))
    t32 = chi_apply(2.0 * (k_mat @ p_apply(dt_tmtm) - dt_tmte))
    t33 = chi_apply(eye - s_te + k_mat @ p_apply(h_mat))
    t34 = chi_apply(2.0 * dt_tete)

    t41 = fc_tete @ t31
    t42 = fc_tete @ t32
    t43 = fc_tete @ (eye + t33)
    t44 = fc_tete @ t34 - eye

    t11 = p_apply(g - eye + h_mat @ t31)
    t12 = p_apply(2.0 * dt_tmtm + h_mat @ t32)
    t13 = p_apply(h_mat @ (eye + t33))
    t14 = p_apply(h_mat @ t34)

    t21 = fc_tmtm @ (eye - t11) + fc_tmte @ t31
    t22 = eye + fc_tmte @ t32 - fc_tmtm @ t12
    t23 = fc_tmte @ (eye + t33) - fc_tmtm @ t13
    t24 = fc_tmte @ t34 - fc_tmtm @ t14

    t = np.empty((4 * b, 4 * b), dtype=complex)
    rows = [
        [t11, t12, t13, t14],
        [t21, t22, t23, t24],
        [t31, t32, t33, t34],
        [t41, t42, t43, t44],
    ]
    for r, row in enumerate(rows):
        for c, blk in enumerate(row):
            t[r * b:(r + 1) * b, c * b:(c + 1) * b] = blk

    layout = BlockLayout(
        n_modes=n, mmax_i=ctx.grid.mmax_i, mmax_j=ctx.grid.mmax_j
    )
    return TransferMatrix(
        ctx=ctx, layout=layout, t=t,
        d_tmtm=d_tmtm, d_tmte=d_tmte, d_tete=d_tete,
        f_tmtm=f_tmtm, f_tmte=f_tmte, f_tete=f_tete,
    )


def build_transfer_matrix(
    spec: InterfaceSpec, evanescent_reality: str = "total_k"
) -> TransferMatrix:
    """Convenience path from configuration to transfer matrix."""
    ctx = build_context(spec)
    return assemble_transfer(ctx, evanescent_reality=evanescent_reality)


def direct_transfer(tm: TransferMatrix) -> np.ndarray:
    """Transfer matrix by one monolithic solve of the matching conditions.

    Builds the four coupled matrix equations in the unknowns
    (A_TM^b, B_TM^f, A_TE^b, B_TE^f) and solves them against the known
    incoming blocks.  Algebraically identical to the staged elimination in
    :func:`assemble_transfer`; kept as an independent cross-check.
    """
    b = tm.layout.block
    eye = np.eye(b, dtype=complex)
    zero = np.zeros((b, b), dtype=complex)
    dt_tmtm = tm.d_tmtm.T
    dt_tmte = tm.d_tmte.T
    dt_tete = tm.d_tete.T
    fc_tmtm = tm.f_tmtm.conj()
    fc_tmte = tm.f_tmte.conj()
    fc_tete = tm.f_tete.conj()

    m_left = np.block(
        [
            [eye, -dt_tmtm, zero, zero],
            [fc_tmtm, eye, -fc_tmte, zero],
            [zero, -dt_tmte, -eye, -dt_tete],
            [zero, zero, -fc_tete, eye],
        ]
    )
    m_right = np.block(
        [
            [-eye, dt_tmtm, zero, zero],
            [fc_tmtm, eye, fc_tmte, zero],
            [zero, dt_tmte, -eye, -dt_tete],
            [zero, zero, fc_tete, -eye],
        ]
    )
    return _solve(m_left, m_right)


def scatter(tm: TransferMatrix, incoming: np.ndarray) -> np.ndarray:
    """Outgoing amplitudes for a given incoming amplitude vector."""
    incoming = np.asarray(incoming, dtype=complex)
    if incoming.shape != (4 * tm.layout.block,):
        raise ValueError("incoming vector has the wrong length")
    return tm.t @ incoming
