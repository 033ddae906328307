import math

import numpy as np
import pytest

from sppscatter.coupling import (
    build_c_blocks,
    build_context,
    coupling_pp,
    delta_plus_realization,
    fresnel_te,
    fresnel_tm,
)
from sppscatter.materials import HalfSpacePair, InterfaceSpec


def _ctx(eps_i=1.5, eps_j=1.0, lam=1500e-9, theta=0.4, n=30):
    spec = InterfaceSpec(
        side_i=HalfSpacePair(eps_i),
        side_j=HalfSpacePair(eps_j),
        lambda0=lam,
        theta_ii=theta,
        n_modes=n,
    )
    return build_context(spec)


def test_delta_kernel_difference_form():
    q = np.array([1.0, 2.0, 3.5])
    ker = delta_plus_realization(q, q, -1)
    assert np.all(np.diag(ker) == math.pi)
    assert ker[0, 1] == 1j / (1.0 - 2.0)
    assert ker[2, 0] == 1j / (3.5 - 1.0)


def test_delta_kernel_sum_form_has_no_diagonal_weight():
    q = np.array([1.0, 2.0])
    ker = delta_plus_realization(q, q, +1)
    assert ker[0, 0] == 1j / 2.0
    assert ker[1, 0] == 1j / 3.0


def test_boundary_responses_are_unimodular_for_oscillatory_metal_tails():
    # with a real metal-side constant nu the response (i*a*nu - b*q) over
    # (i*a*nu + b*q) is a pure phase: the lossless boundary reflects fully
    ctx = _ctx()
    side = ctx.side_i
    r_tm = fresnel_tm(side.eps_d, side.eps_m, side.nu, side.q)
    r_te = fresnel_te(side.nu, side.q)
    real_nu = side.nu.imag == 0.0
    assert np.allclose(np.abs(r_tm[real_nu]), 1.0, atol=1e-12)
    assert np.allclose(np.abs(r_te[real_nu]), 1.0, atol=1e-12)


def test_block_shapes_and_structural_zeros():
    ctx = _ctx(n=25)
    blocks = build_c_blocks(ctx)
    b = 26
    assert blocks.tmtm.shape == (b, b)
    assert blocks.tmte.shape == (b, b)
    assert blocks.tete.shape == (b, b)
    # no surface-mode slot in the TE family
    assert np.all(blocks.tete[0, :] == 0.0)
    assert np.all(blocks.tete[:, 0] == 0.0)
    assert np.all(blocks.tmte[:, 0] == 0.0)
    assert blocks.tmte[0, 0] == 0.0
    # surface-to-surface entry
    assert blocks.tmtm[0, 0] == pytest.approx(coupling_pp(ctx))


def test_normal_incidence_kills_the_cross_polarization_blocks():
    ctx = _ctx(theta=0.0)
    blocks = build_c_blocks(ctx)
    assert np.max(np.abs(blocks.tmte)) == 0.0


def test_radiation_rows_scale_with_quadrature_weights():
    # doubling the weights must scale off-diagonal radiation entries by 2
    # through the sqrt(w') factors on rows and columns
    ctx = _ctx(n=20)
    blocks = build_c_blocks(ctx)
    wp = ctx.grid.weights_wp
    raw_ptm = blocks.tmtm[0, 1:] / np.sqrt(wp)
    assert np.all(np.isfinite(raw_ptm))
    # diagonal of the radiation block carries no weight factor
    from sppscatter.coupling import coupling_tmtm

    c = coupling_tmtm(ctx)
    assert np.allclose(np.diag(blocks.tmtm)[1:], np.diag(c), atol=0, rtol=1e-13)


def test_identity_interface_surface_coupling_is_exactly_unity():
    ctx = _ctx(eps_i=1.0, eps_j=1.0, theta=0.3)
    assert coupling_pp(ctx) == pytest.approx(1.0 + 0j, abs=1e-12)
