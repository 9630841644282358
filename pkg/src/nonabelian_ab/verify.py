"""Desk-scale invariant suite shared by ``nonabelian-ab verify`` and the tests.

Every check returns a :class:`CheckResult`; none of them raise on a failed
property. The Bessel callable is injectable so the harness itself can be
tested against a deliberately perturbed implementation.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import specfun
from .contour import contour_terms
from .gauge import Group, flux_for_group, gauge_potential, su2_flux, su3_flux, u2_flux, wilson_loop
from .models import ModelId, Superposition, channel_modes, partial_wave_term, plane_wave
from .observables import (
    CrossSectionQuery,
    cross_section,
    current_density,
    divergence,
    field_arrays,
    kinetic_current_u2,
    sigma_factor,
    sigma_map,
)

__all__ = ["CheckResult", "run_suite", "CHECKS"]

BesselFn = Callable[[float, float], float]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name:<28s} {self.detail}"


def _equal_weights(n: int) -> np.ndarray:
    return np.full(n, 1.0 / math.sqrt(n), dtype=complex)


def check_bessel_recurrence(bessel: BesselFn) -> tuple[bool, str]:
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(200):
        nu = rng.uniform(-4.5, 30.0)
        x = rng.uniform(0.1, 60.0)
        lhs = bessel(nu - 1, x) + bessel(nu + 1, x)
        rhs = 2.0 * nu / x * bessel(nu, x)
        scale = max(abs(bessel(nu - 1, x)), abs(bessel(nu + 1, x)), abs(rhs), 1e-2)
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst < 1e-9, f"max scaled residual {worst:.1e}"


def check_bessel_half_integer(bessel: BesselFn) -> tuple[bool, str]:
    worst = 0.0
    for x in np.linspace(0.05, 70.0, 60):
        env = math.sqrt(2.0 / (math.pi * x))
        worst = max(worst, abs(bessel(0.5, x) - env * math.sin(x)) / env)
        worst = max(worst, abs(bessel(-0.5, x) - env * math.cos(x)) / env)
        j32 = env * (math.sin(x) / x - math.cos(x))
        worst = max(worst, abs(bessel(1.5, x) - j32) / env)
    return worst < 1e-10, f"max error/envelope {worst:.1e}"


def check_bessel_origin(bessel: BesselFn) -> tuple[bool, str]:
    ok = bessel(0.0, 0.0) == 1.0 and all(bessel(nu, 0.0) == 0.0 for nu in (0.3, 1.0, 2.5, 7.0))
    return ok, "J_0(0)=1, J_nu(0)=0 for nu>0"


def check_gauge() -> tuple[bool, str]:
    flux = su3_flux(0.2, 1.0 / 3.0)
    # circulation of A around circles equals the eigenvalue (in flux quanta)
    th = np.linspace(0.0, 2.0 * math.pi, 400, endpoint=False)
    worst = 0.0
    for rad in (0.5, 3.0):
        ax, ay = gauge_potential(flux, rad * np.cos(th), rad * np.sin(th))
        circ = np.sum(-ax * np.sin(th)[:, None] + ay * np.cos(th)[:, None], axis=0) * rad * (2.0 * math.pi / th.size)
        worst = max(worst, float(np.max(np.abs(circ - np.array(flux.eigenvalues)))))
    w1 = wilson_loop(flux)
    w2 = wilson_loop(flux_for_group(Group.SU3, 1.2, 1.0 / 3.0 + 1.0))
    unitary = np.abs(w1 @ w1.conj().T - np.eye(3)).max()
    # (alpha, beta) -> (alpha + 1, beta + 1) shifts the eigenvalues by (2, 0, -2)
    period = np.abs(w1 - w2).max()
    worst = max(worst, unitary, period)
    return worst < 1e-12, f"circulation/unitarity/period error {worst:.1e}"


def check_zero_flux() -> tuple[bool, str]:
    worst = 0.0
    r = np.array([0.3, 2.0, 6.5])
    phi = np.array([0.4, -2.2, 3.0])
    for model in ModelId:
        flux = flux_for_group(model.group, 0.0, 0.0)
        for s in model.bands:
            for mode in channel_modes(model, s, 1.0, 0.7):
                psi = Superposition([mode], flux, [1.0])(r, phi)
                worst = max(worst, float(np.abs(psi - plane_wave(mode, r, phi)).max()))
    return worst < 1e-10, f"max |Psi - plane wave| {worst:.1e}"


def check_series_contour() -> tuple[bool, str]:
    worst = 0.0
    cases = [(ModelId.SU2_DOUBLET, su2_flux(0.2), 1), (ModelId.U2_DOUBLET, u2_flux(0.5, 0.25), -1)]
    ms = np.arange(-6, 7)
    for model, flux, s in cases:
        for mode in channel_modes(model, s, 1.0, 0.0):
            for r, phi in ((0.5, 0.0), (5.0, 2.8)):
                c = contour_terms(mode, flux, ms, r, phi, check=False)
                ser = np.array([partial_wave_term(mode, flux, int(m), r, phi) for m in ms])
                worst = max(worst, float(np.abs(c - ser).max()))
    return worst < 1e-8, f"max term difference {worst:.1e}"


def check_no_scattering() -> tuple[bool, str]:
    g = np.linspace(-8.0, 8.0, 21)
    X, Y = np.meshgrid(g, g)
    worst = 0.0
    for model, (a, b) in ((ModelId.SU2_DOUBLET, (0.0, 0.0)), (ModelId.SU3_TRIPLET, (0.5, 0.5)), (ModelId.U2_DOUBLET, (0.5, 0.5))):
        sp = Superposition(channel_modes(model, 1, 1.0), flux_for_group(model.group, a, b), _equal_weights(model.N))
        rho = field_arrays(sp, X, Y)[0]
        worst = max(worst, float(np.nanmax(np.abs(rho - 1.0))))
    return worst < 1e-8, f"max |rho - 1| {worst:.1e}"


def check_sigma() -> tuple[bool, str]:
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(50):
        a, b = rng.uniform(-2, 2, 2)
        c = rng.normal(size=3) + 1j * rng.normal(size=3)
        c /= np.linalg.norm(c)
        f = su3_flux(a, b)
        g = su3_flux(a + 1.0, b + 1.0)
        s = sigma_factor(f, c)
        worst = max(worst, abs(s - sigma_factor(g, c)))
        if not -1e-15 <= s <= 1.0 + 1e-15:
            worst = max(worst, 1.0)
    worst = max(worst, abs(sigma_factor(u2_flux(0.5, 0.0), [0.6, 0.8]) - 1.0))
    worst = max(worst, sigma_factor(su3_flux(0.5, 0.5), _equal_weights(3)))
    return worst < 1e-12, f"period/bound/limit error {worst:.1e}"


def check_cross_section() -> tuple[bool, str]:
    sig = sigma_factor(su2_flux(0.3), [1.0, 0.0])
    phis = np.linspace(-math.pi + 0.1, math.pi - 0.1, 41)
    vals = np.array([cross_section(CrossSectionQuery(1.0, sig, p)) * math.cos(p / 2) ** 2 for p in phis])
    spread = float(np.ptp(vals) / vals[0])
    ratio = cross_section(CrossSectionQuery(2.0, sig, 0.4)) / cross_section(CrossSectionQuery(1.0, sig, 0.4))
    worst = max(spread, abs(ratio - 0.5))
    return worst < 1e-12, f"angular/k-scaling error {worst:.1e}"


def check_u2_current() -> tuple[bool, str]:
    rng = np.random.default_rng(5)
    r = rng.uniform(0.5, 8.0, 40)
    phi = rng.uniform(-math.pi, math.pi, 40)
    worst = 0.0
    for s in (1, -1):
        flux = u2_flux(0.2, 0.3)
        sp = Superposition(channel_modes(ModelId.U2_DOUBLET, s, 1.0, 0.3), flux, [0.6, 0.8j])
        a = current_density(ModelId.U2_DOUBLET, flux, sp, r, phi)
        b = kinetic_current_u2(flux, sp, r, phi)
        worst = max(worst, float(np.abs(a[0] - b[0]).max()), float(np.abs(a[1] - b[1]).max()))
    return worst < 1e-8, f"algebraic vs kinetic {worst:.1e}"


def check_reflection() -> tuple[bool, str]:
    sp = Superposition(channel_modes(ModelId.SU2_DOUBLET, 1, 1.0), su2_flux(0.2), _equal_weights(2))
    g = np.linspace(-8.0, 8.0, 31)
    X, Y = np.meshgrid(g, g)
    rho = field_arrays(sp, X, Y)[0]
    worst = float(np.nanmax(np.abs(rho - rho[::-1])))
    return worst < 1e-8, f"max |rho(x,y) - rho(x,-y)| {worst:.1e}"


def check_divergence() -> tuple[bool, str]:
    sp = Superposition(channel_modes(ModelId.SU2_DOUBLET, 1, 1.0), su2_flux(0.2), _equal_weights(2))
    errs = []
    for n in (41, 81):
        g = np.linspace(-8.0, 8.0, n)
        X, Y = np.meshgrid(g, g)
        _, jx, jy = field_arrays(sp, X, Y)
        d = divergence(jx, jy, g[1] - g[0])
        R = np.hypot(X, Y)[1:-1, 1:-1]
        errs.append(float(np.abs(d[(R >= 2) & (R <= 8)]).max()))
    ratio = errs[0] / errs[1]
    return ratio >= 3.5, f"div j {errs[0]:.1e} -> {errs[1]:.1e} (ratio {ratio:.2f})"


def check_sigma_map_mirror() -> tuple[bool, str]:
    c12 = np.array([1.0, 2.0]) / math.sqrt(5.0)
    a = sigma_map(Group.U2, c12, (-1, 1), (-1, 1), 21)
    b = sigma_map(Group.U2, c12[::-1], (-1, 1), (-1, 1), 21)
    worst = float(np.abs(a - b[:, ::-1]).max())
    return worst < 1e-12, f"1:2 vs mirrored 2:1 {worst:.1e}"


CHECKS: list[tuple[str, Callable]] = [
    ("bessel.recurrence", check_bessel_recurrence),
    ("bessel.half_integer", check_bessel_half_integer),
    ("bessel.origin", check_bessel_origin),
    ("gauge.potential_wilson", check_gauge),
    ("models.zero_flux", check_zero_flux),
    ("contour.series_agreement", check_series_contour),
    ("observables.no_scattering", check_no_scattering),
    ("observables.sigma", check_sigma),
    ("observables.cross_section", check_cross_section),
    ("observables.u2_current", check_u2_current),
    ("observables.reflection", check_reflection),
    ("observables.divergence", check_divergence),
    ("observables.sigma_map_mirror", check_sigma_map_mirror),
]

_BESSEL_CHECKS = {"bessel.recurrence", "bessel.half_integer", "bessel.origin"}


def run_suite(bessel_bias: float = 0.0) -> list[CheckResult]:
    """Run every check; ``bessel_bias`` adds a constant to the Bessel values under test."""

    def bessel(nu, x):
        return specfun.bessel_j(nu, x) + bessel_bias

    results = []
    for name, fn in CHECKS:
        t0 = time.perf_counter()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            try:
                ok, detail = fn(bessel) if name in _BESSEL_CHECKS else fn()
            except Exception as exc:  # a crash is a failed property, not a crashed report
                ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(CheckResult(name, bool(ok), detail, time.perf_counter() - t0))
    return results
