"""Acceptance criteria, one test per criterion.

Each test records a single ``[PASS|FAIL] criterion N`` line (printed and
repeated in the terminal summary) and then asserts it.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from nonabelian_ab.contour import contour_terms
from nonabelian_ab.gauge import Group, flux_for_group, su2_flux, su3_flux, u2_flux
from nonabelian_ab.models import ModelId, Superposition, channel_modes, partial_wave_term
from nonabelian_ab.observables import CrossSectionQuery, cross_section, divergence, field_arrays, sigma_factor, sigma_map
from nonabelian_ab.specfun import bessel_j, bessel_j_derivative

pytestmark = pytest.mark.acceptance


def equal_weights(n):
    return np.full(n, 1.0 / math.sqrt(n), dtype=complex)


def test_criterion_1_bessel(acceptance, bessel_sample):
    t0 = time.perf_counter()
    sample = max(abs(bessel_j(nu, x) - ref) - max(1e-10 * abs(ref), 1e-12) for nu, x, ref in bessel_sample)
    worst_rel = max(abs(bessel_j(nu, x) - ref) / max(abs(ref), 1e-2) for nu, x, ref in bessel_sample)

    rng = np.random.default_rng(1)
    rec = 0.0
    for nu, x in zip(rng.uniform(-5, 40, 2000), rng.uniform(0.1, 80, 2000)):
        a, b, c = bessel_j(nu - 1, x), bessel_j(nu + 1, x), 2 * nu / x * bessel_j(nu, x)
        rec = max(rec, abs(a + b - c) / max(abs(a), abs(b), abs(c)))

    half = 0.0
    for x in np.linspace(0.1, 80, 800):
        env = math.sqrt(2 / (math.pi * x))
        half = max(half, abs(bessel_j(0.5, x) - env * math.sin(x)) / env, abs(bessel_j(-0.5, x) - env * math.cos(x)) / env)

    neg = 0.0
    for m in range(0, 30):
        for x in np.linspace(0, 50, 51):
            ref = bessel_j(m, x)
            neg = max(neg, abs(bessel_j(-m, x) - (-1) ** m * ref) / max(abs(ref), 1e-300))

    fd = 0.0
    for nu, x in zip(rng.uniform(-5, 40, 200), rng.uniform(0.5, 80, 200)):
        num = (bessel_j(nu, x + 1e-6) - bessel_j(nu, x - 1e-6)) / 2e-6
        fd = max(fd, abs(bessel_j_derivative(nu, x) - num))
    secs = time.perf_counter() - t0

    ok = (len(bessel_sample) >= 2000 and sample <= 0 and rec < 1e-9 and half < 1e-10
          and neg < 1e-10 and fd < 1e-6 and secs < 10)
    acceptance(1, "Bessel J vs extended-precision oracle", ok,
               f"{len(bessel_sample)} pts, worst rel {worst_rel:.1e}, recurrence {rec:.1e}, "
               f"half-integer {half:.1e}, J_-m {neg:.1e}, d/dx {fd:.1e}, {secs:.1f}s")
    assert ok


FLUX_SETS = {
    ModelId.SU2_DOUBLET: [(0.2, 0.0), (0.5, 0.0), (0.8, 0.0)],
    ModelId.SU3_TRIPLET: [(0.2, 1 / 3), (0.5, 0.5), (0.3, 1 / 6)],
    ModelId.U2_DOUBLET: [(0.2, 0.3), (0.5, 0.25), (0.5, 0.5)],
}


def test_criterion_2_series_matches_contour(acceptance):
    t0 = time.perf_counter()
    ms = np.arange(-12, 13)
    worst, count, where = 0.0, 0, None
    for model, sets in FLUX_SETS.items():
        for a, b in sets:
            flux = flux_for_group(model.group, a, b)
            for s in model.bands:
                for mode in channel_modes(model, s, 1.0, 0.3):
                    for kr in (0.5, 1.0, 5.0, 15.0):
                        for phi in (0.0, math.pi / 3, 2.8):
                            c = contour_terms(mode, flux, ms, kr, phi)
                            ser = np.array([partial_wave_term(mode, flux, int(m), kr, phi) for m in ms])
                            d = float(np.abs(c - ser).max())
                            count += len(ms)
                            if d > worst:
                                worst, where = d, (model.value, a, b, s, mode.n, kr, phi)
    secs = time.perf_counter() - t0
    ok = worst < 1e-8 and secs < 120
    acceptance(2, "partial-wave series equals contour integral", ok,
               f"{count} terms, max diff {worst:.1e} at {where}, {secs:.1f}s")
    assert ok


def test_criterion_3_no_scattering(acceptance):
    t0 = time.perf_counter()
    g = np.linspace(-8, 8, 41)
    X, Y = np.meshgrid(g, g)
    worst = 0.0
    parts = []
    for model, (a, b) in ((ModelId.SU2_DOUBLET, (0.0, 0.0)), (ModelId.SU3_TRIPLET, (0.5, 0.5)), (ModelId.U2_DOUBLET, (0.5, 0.5))):
        sp = Superposition(channel_modes(model, 1, 1.0), flux_for_group(model.group, a, b), equal_weights(model.N))
        rho = field_arrays(sp, X, Y)[0]
        inside = np.hypot(X, Y) < 1e-3
        assert np.isnan(rho[inside]).all() and not np.isnan(rho[~inside]).any()
        dev = float(np.abs(rho[~inside] - 1).max())
        parts.append(f"{model.value} {dev:.1e}")
        worst = max(worst, dev)
    secs = time.perf_counter() - t0
    ok = worst < 1e-8 and secs < 30
    acceptance(3, "integer flux gives rho = 1", ok, f"{', '.join(parts)}, {secs:.1f}s")
    assert ok


def sigma_su3_reference(a, b, c):
    w = np.abs(c) ** 2
    return w[0] * math.sin(math.pi * (b + a)) ** 2 + w[1] * math.sin(math.pi * (b - a)) ** 2 + w[2] * math.sin(2 * math.pi * b) ** 2


def sigma_u2_reference(a, b, c):
    w = np.abs(c) ** 2
    return w[0] * math.sin(math.pi * (b + a)) ** 2 + w[1] * math.sin(math.pi * (b - a)) ** 2


def random_unit(rng, n):
    c = rng.normal(size=n) + 1j * rng.normal(size=n)
    return c / np.linalg.norm(c)


def test_criterion_4_sigma_closed_forms(acceptance):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    su2 = su3 = u2 = period = 0.0
    for _ in range(100):
        a, b = rng.uniform(-3, 3, 2)
        c2, c3 = random_unit(rng, 2), random_unit(rng, 3)
        su2 = max(su2, abs(sigma_factor(su2_flux(a), c2) - math.sin(a * math.pi) ** 2))
        su3 = max(su3, abs(sigma_factor(su3_flux(a, b), c3) - sigma_su3_reference(a, b, c3)))
        u2 = max(u2, abs(sigma_factor(u2_flux(a, b), c2) - sigma_u2_reference(a, b, c2)))
        period = max(period,
                     abs(sigma_factor(su2_flux(a + 1), c2) - sigma_factor(su2_flux(a), c2)),
                     abs(sigma_factor(su3_flux(a + 1, b), c3) - sigma_factor(su3_flux(a, b), c3)),
                     abs(sigma_factor(su3_flux(a, b + 1), c3) - sigma_factor(su3_flux(a, b), c3)),
                     abs(sigma_factor(u2_flux(a + 1, b), c2) - sigma_factor(u2_flux(a, b), c2)),
                     abs(sigma_factor(u2_flux(a, b + 1), c2) - sigma_factor(u2_flux(a, b), c2)))

    # unit maximum for every c exactly when beta + alpha and beta - alpha are half-integers
    unit = 0.0
    for _ in range(100):
        p, q = rng.integers(-4, 4, 2) + 0.5
        a, b = 0.5 * (p - q), 0.5 * (p + q)
        unit = max(unit, abs(sigma_factor(u2_flux(a, b), random_unit(rng, 2)) - 1))
    below = -math.inf
    for _ in range(100):
        p = rng.integers(-4, 4) + 0.5
        q = rng.uniform(-3, 3)
        if abs(q - round(q) - 0.5) < 1e-3 or abs(q - round(q) + 0.5) < 1e-3:
            continue
        a, b = 0.5 * (p - q), 0.5 * (p + q)
        # the channel whose eigenvalue is not half-integer
        below = max(below, sigma_factor(u2_flux(a, b), [0.0, 1.0]) - (1 - 1e-6))
    secs = time.perf_counter() - t0
    worst = max(su2, su3, u2, period, unit)
    ok = worst < 1e-12 and below < 0 and secs < 1
    acceptance(4, "cross-section factor closed forms", ok,
               f"su2 {su2:.1e}, su3 {su3:.1e}, u2 {u2:.1e}, period {period:.1e}, unit max {unit:.1e}, "
               f"non-half-integer max {below + 1 - 1e-6:.6f}, {secs:.2f}s")
    assert ok


def test_criterion_5_cross_section_law(acceptance):
    phis = np.linspace(-math.pi + 0.1, math.pi - 0.1, 501)[1:-1]
    spread = ratio = 0.0
    for sig in (1.0, 0.3, math.sin(0.2 * math.pi) ** 2, 2 / 3):
        for k in (1.0, 2.0):
            vals = np.array([cross_section(CrossSectionQuery(k, sig, p)) * math.cos(p / 2) ** 2 for p in phis])
            spread = max(spread, float(np.abs(vals / vals[0] - 1).max()))
        for p in phis[::50]:
            r = cross_section(CrossSectionQuery(2.0, sig, p)) / cross_section(CrossSectionQuery(1.0, sig, p))
            ratio = max(ratio, abs(r / 0.5 - 1))
    ok = spread < 1e-12 and ratio < 1e-12
    acceptance(5, "sigma(phi) cos^2(phi/2) constant, 1/k scaling", ok, f"angular {spread:.1e}, k-scaling {ratio:.1e}")
    assert ok


def _divergence_errors(sp, n):
    g = np.linspace(-8, 8, n)
    X, Y = np.meshgrid(g, g)
    _, jx, jy = field_arrays(sp, X, Y)
    d = divergence(jx, jy, g[1] - g[0])
    R = np.hypot(X, Y)[1:-1, 1:-1]
    return d, R


def test_criterion_6_current_conservation(acceptance):
    t0 = time.perf_counter()
    cases = [(ModelId.SU2_DOUBLET, (0.2, 0.0)), (ModelId.SU3_TRIPLET, (0.2, 1 / 3)), (ModelId.U2_DOUBLET, (0.2, 0.3))]
    parts, ratios = [], []
    for model, (a, b) in cases:
        sp = Superposition(channel_modes(model, 1, 1.0), flux_for_group(model.group, a, b), equal_weights(model.N))
        coarse, Rc = _divergence_errors(sp, 101)
        fine, _ = _divergence_errors(sp, 201)
        # interior nodes of the coarse grid are every other interior node of the fine one
        fine = fine[1::2, 1::2]
        mask = (Rc >= 2) & (Rc <= 8)
        ec, ef = float(np.abs(coarse[mask]).max()), float(np.abs(fine[mask]).max())
        ratios.append(ec / ef)
        parts.append(f"{model.value} {ec:.1e}->{ef:.1e} ({ec / ef:.2f})")
    secs = time.perf_counter() - t0
    ok = min(ratios) >= 3.5 and secs < 60
    acceptance(6, "discrete div j shrinks at second order", ok, f"{', '.join(parts)}, {secs:.1f}s")
    assert ok


def test_criterion_7_symmetries(acceptance):
    g = np.linspace(-8, 8, 41)
    X, Y = np.meshgrid(g, g)
    refl = 0.0
    for a in (0.2, 0.5, 0.8):
        sp = Superposition(channel_modes(ModelId.SU2_DOUBLET, 1, 1.0), su2_flux(a), equal_weights(2))
        rho = field_arrays(sp, X, Y)[0]
        refl = max(refl, float(np.nanmax(np.abs(rho - rho[::-1]))))
    one_two = np.array([1, 2]) / math.sqrt(5)
    m12 = sigma_map(Group.U2, one_two, (-1, 1), (-1, 1), 201)
    m21 = sigma_map(Group.U2, one_two[::-1], (-1, 1), (-1, 1), 201)
    mirror = float(np.abs(m12 - m21[:, ::-1]).max())
    ok = refl < 1e-8 and mirror < 1e-12
    acceptance(7, "reflection symmetry and U2 sigma-map mirror", ok, f"rho(x,y)-rho(x,-y) {refl:.1e}, mirror {mirror:.1e}")
    assert ok


def test_criterion_8_determinism(acceptance, tmp_path):
    outs = {}
    for model, extra in (("su2", ["--alpha", "0.2"]), ("su3", ["--alpha", "0.2", "--beta", "0.3333333333333333"]),
                         ("u2", ["--alpha", "0.2", "--beta", "0.3"])):
        for workers in (1, 4):
            path = tmp_path / f"{model}_{workers}.csv"
            cmd = [sys.executable, "-m", "nonabelian_ab.cli", "state", "--model", model, *extra,
                   "--grid", "-10,10,-10,10,101,101", "--workers", str(workers), "--out", str(path)]
            subprocess.run(cmd, check=True)
            outs[model, workers] = path.read_bytes()
    same = [outs[m, 1] == outs[m, 4] for m in ("su2", "su3", "u2")]
    ok = all(same) and all(len(v) > 0 for v in outs.values())
    acceptance(8, "state output byte-identical for 1 and 4 workers", ok,
               ", ".join(f"{m} {'identical' if s else 'DIFFERENT'}" for m, s in zip(("su2", "su3", "u2"), same)))
    assert ok
