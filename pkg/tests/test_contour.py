import math

import numpy as np
import pytest

from nonabelian_ab.contour import (
    Branch,
    ContourError,
    ContourSpec,
    contour_nodes,
    contour_state,
    contour_term,
    contour_terms,
    contour_vertices,
)
from nonabelian_ab.gauge import su2_flux, u2_flux
from nonabelian_ab.models import ModelId, ModeSpec, channel_modes, partial_wave_term, plane_wave


def test_spec_validation():
    with pytest.raises(ValueError):
        ContourSpec(0.0, Branch.PLUS, height=9.0)
    with pytest.raises(ValueError):
        ContourSpec(0.0, Branch.PLUS, step=0.06)
    with pytest.raises(ValueError):
        ContourSpec(0.0, Branch.PLUS, v_sign=0)
    assert ContourSpec.for_order(-0.3, 0.0, 1).branch is Branch.MINUS
    assert ContourSpec.for_order(0.0, 0.0, 1).branch is Branch.PLUS


def test_endpoints():
    v = contour_vertices(ContourSpec(0.0, Branch.MINUS, height=10.0))
    assert {v[0], v[-1]} == {complex(-1.5 * math.pi, -10), complex(0.5 * math.pi, -10)}
    v = contour_vertices(ContourSpec(0.0, Branch.PLUS, height=10.0))
    assert (v[0], v[-1]) == (complex(-2.5 * math.pi, 10), complex(-0.5 * math.pi, 10))
    # hole-like bands: the whole upper contour moves right by 2 pi
    h = contour_vertices(ContourSpec(0.0, Branch.PLUS, v_sign=-1, height=10.0))
    assert np.allclose(np.array(h) - np.array(v), 2 * math.pi)


def test_minus_orientation():
    fwd = contour_vertices(ContourSpec(0.3, Branch.MINUS, reverse_minus=False))
    rev = contour_vertices(ContourSpec(0.3, Branch.MINUS))
    assert rev == fwd[::-1]
    assert rev[0].real > rev[-1].real


@pytest.mark.parametrize("phi", [0.0, 1.0, -2.9])
def test_phi_covariance(phi):
    for br in Branch:
        x0, w0 = contour_nodes(ContourSpec(0.0, br))
        x1, w1 = contour_nodes(ContourSpec(phi, br))
        assert np.abs((x1 - phi) - x0).max() < 1e-12
        assert np.abs(w1 - w0).max() < 1e-15


def test_rule_integrates_entire_functions():
    for spec in (ContourSpec(0.4, Branch.PLUS), ContourSpec(0.4, Branch.MINUS), ContourSpec(0.4, Branch.PLUS, v_sign=-1)):
        x, w = contour_nodes(spec)
        v = contour_vertices(spec)
        assert np.sum(w) == pytest.approx(v[-1] - v[0], abs=1e-12)
        f = np.exp(0.5j * x)
        exact = (np.exp(0.5j * v[-1]) - np.exp(0.5j * v[0])) / 0.5j
        assert abs(np.sum(w * f) - exact) < 1e-12 * max(1.0, abs(exact))


@pytest.mark.parametrize("model,flux,s", [
    (ModelId.SU2_DOUBLET, su2_flux(0.2), 1),
    (ModelId.U2_DOUBLET, u2_flux(0.5, 0.25), 1),
    (ModelId.U2_DOUBLET, u2_flux(0.5, 0.25), -1),
    (ModelId.SU2_DOUBLET, su2_flux(1.7), 1),
])
def test_matches_series(model, flux, s):
    ms = np.arange(-8, 9)
    for mode in channel_modes(model, s, 1.0, 0.4):
        for r, phi in ((0.7, 0.2), (6.0, 2.9)):
            c = contour_terms(mode, flux, ms, r, phi)
            ref = np.array([partial_wave_term(mode, flux, int(m), r, phi) for m in ms])
            assert np.abs(c - ref).max() < 1e-12


def test_raw_integral_carries_channel_phase():
    # unaligned electron-band integral = exp(-i pi alpha_n) x series term
    flux = u2_flux(0.3, 0.15)
    ms = np.arange(-5, 6)
    for s in (1, -1):
        for mode in channel_modes(ModelId.U2_DOUBLET, s, 1.0, 0.0):
            a = flux.eigenvalues[mode.n - 1]
            raw = contour_terms(mode, flux, ms, 2.0, 0.7, align_phase=False)
            ref = np.array([partial_wave_term(mode, flux, int(m), 2.0, 0.7) for m in ms])
            factor = np.exp(-1j * math.pi * a) if s == 1 else 1.0
            assert np.abs(raw - factor * ref).max() < 1e-12


def test_printed_minus_orientation_flips_negative_orders():
    mode = ModeSpec(ModelId.SU2_DOUBLET, 1, 1, 1.0)
    flux = su2_flux(0.2)
    ms = np.arange(-4, 5)
    good = contour_terms(mode, flux, ms, 1.5, 0.3)
    flipped = contour_terms(mode, flux, ms, 1.5, 0.3, reverse_minus=False)
    neg = ms + 0.2 < 0
    assert np.allclose(flipped[neg], -good[neg], atol=1e-13)
    assert np.allclose(flipped[~neg], good[~neg], atol=1e-13)


def test_single_term_shape():
    mode = ModeSpec(ModelId.U2_DOUBLET, -1, 2, 1.0)
    out = contour_term(mode, u2_flux(0.2, 0.3), -3, 1.0, 0.5)
    assert out.shape == (4,) and np.all(out[:2] == 0)


def test_undecayed_endpoint_raises():
    mode = ModeSpec(ModelId.SU2_DOUBLET, 1, 1, 1.0)
    with pytest.raises(ContourError):
        contour_term(mode, su2_flux(0.2), 0, 1e-4, 0.0, height=10.0)


def test_rejects_bad_input():
    mode = ModeSpec(ModelId.SU2_DOUBLET, 1, 1, 1.0)
    with pytest.raises(ValueError):
        contour_term(mode, su2_flux(0.2), 0, 0.0, 0.0)
    with pytest.raises(ValueError):
        contour_term(mode, u2_flux(0.2, 0.0), 0, 1.0, 0.0)


def test_contour_state_zero_flux():
    for s in (1, -1):
        mode = ModeSpec(ModelId.U2_DOUBLET, s, 1, 1.0, 0.5)
        psi = contour_state([mode], u2_flux(0.0, 0.0), [1.0], 3.0, 1.1)
        assert np.abs(psi - plane_wave(mode, 3.0, 1.1)).max() < 1e-10
