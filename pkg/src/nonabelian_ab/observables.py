"""Densities, currents and cross sections derived from the scattering states.

Currents are in natural units (hbar = M = v = 1). For the Schroedinger-type
models the kinetic momentum is ``p + 2 pi A`` with ``A`` from
:func:`nonabelian_ab.gauge.gauge_potential`; the U(2) Dirac model uses the
velocity operator ``sigma`` in each channel block.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .gauge import FluxSpec, Group, flux_for_group, gauge_potential
from .models import ModelId, Superposition

__all__ = [
    "ForwardDivergenceError",
    "CrossSectionQuery",
    "FieldSample",
    "probability_density",
    "current_density",
    "kinetic_current_u2",
    "field_arrays",
    "sample_field",
    "sigma_factor",
    "cross_section",
    "sigma_map",
    "divergence",
]

NORM_TOL = 1e-10


class ForwardDivergenceError(ValueError):
    """The cross section diverges in the forward direction phi = pi."""


def _is_forward(phi: float) -> bool:
    return abs(math.remainder(phi - math.pi, 2.0 * math.pi)) < 1e-12


@dataclass(frozen=True)
class CrossSectionQuery:
    k: float
    sigma: float
    phi: float

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k > 0):
            raise ValueError("k must be positive")
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise ValueError("cross-section factor must be >= 0")
        if not math.isfinite(self.phi):
            raise ValueError("phi must be finite")
        if _is_forward(self.phi):
            raise ForwardDivergenceError("cross section diverges at phi = pi")


@dataclass(frozen=True)
class FieldSample:
    r: float
    phi: float
    state: np.ndarray
    rho: float
    j: tuple[float, float]


def probability_density(state) -> np.ndarray:
    """Squared norm over the last axis."""
    psi = np.asarray(state)
    return np.sum(psi.real**2 + psi.imag**2, axis=-1)


def _polar_to_xy(phi, v_r, v_phi):
    c, s = np.cos(phi), np.sin(phi)
    return c * v_r - s * v_phi, s * v_r + c * v_phi


def _azimuthal_coupling(flux: FluxSpec, r, phi):
    # 2 pi A_phi per channel, shape r.shape + (N,)
    x, y = r * np.cos(phi), r * np.sin(phi)
    ax, ay = gauge_potential(flux, np.atleast_1d(x), np.atleast_1d(y))
    a_phi = -np.sin(phi)[..., None] * ax + np.cos(phi)[..., None] * ay
    return 2.0 * np.pi * a_phi


def current_density(model: ModelId, flux: FluxSpec, evaluator: Superposition, r, phi, m_max: int | None = None):
    """Probability current ``(j_x, j_y)`` at polar points ``(r, phi)``.

    The Schroedinger models use the analytic series derivatives of the
    evaluator; the U(2) model needs only the state itself.
    """
    model = ModelId(model)
    r_b, phi_b = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(phi, dtype=float))
    if np.any(r_b <= 0):
        raise ValueError("current needs r > 0")
    if model.D == 2:
        psi = evaluator(r_b, phi_b, m_max=m_max)
        z = np.sum(np.conj(psi[..., 0::2]) * psi[..., 1::2], axis=-1)
        return 2.0 * z.real, 2.0 * z.imag
    psi, d_r, d_phi = evaluator.evaluate(r_b, phi_b, derivatives=True, m_max=m_max)
    a_phi = _azimuthal_coupling(flux, r_b.ravel(), phi_b.ravel()).reshape(psi.shape)
    cp = np.conj(psi)
    j_r = np.sum((cp * d_r).imag, axis=-1)
    j_phi = np.sum((cp * d_phi).imag, axis=-1) / r_b + np.sum(a_phi * np.abs(psi) ** 2, axis=-1)
    return _polar_to_xy(phi_b, j_r, j_phi)


def kinetic_current_u2(flux: FluxSpec, evaluator: Superposition, r, phi, m_max: int | None = None):
    """U(2) current rebuilt from the kinetic momentum (Gordon split).

    ``j = Re[Psi^+ Pi Psi] / E + curl(Psi^+ sigma_z Psi) / (2E)`` with
    ``E = s k``. Agreement with :func:`current_density` checks the series
    derivatives and the gauge coupling together.
    """
    if evaluator.model is not ModelId.U2_DOUBLET:
        raise ValueError("kinetic_current_u2 needs the U(2) model")
    r_b, phi_b = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(phi, dtype=float))
    if np.any(r_b <= 0):
        raise ValueError("current needs r > 0")
    energy = evaluator.modes[0].s * evaluator.k
    psi, d_r, d_phi = evaluator.evaluate(r_b, phi_b, derivatives=True, m_max=m_max)
    a_phi = _azimuthal_coupling(flux, r_b.ravel(), phi_b.ravel()).reshape(psi.shape[:-1] + (-1,))
    a_phi = np.repeat(a_phi, 2, axis=-1)  # same coupling for both spinor entries
    cp = np.conj(psi)
    p_r = np.sum((cp * d_r).imag, axis=-1)
    p_phi = np.sum((cp * d_phi).imag, axis=-1) / r_b + np.sum(a_phi * np.abs(psi) ** 2, axis=-1)
    sz = np.tile([1.0, -1.0], psi.shape[-1] // 2)
    # gradient of Psi^+ sigma_z Psi in polar components
    g_r = 2.0 * np.sum(sz * (cp * d_r).real, axis=-1)
    g_phi = 2.0 * np.sum(sz * (cp * d_phi).real, axis=-1) / r_b
    # curl(f z) = (d_y f, -d_x f) = rotation of the gradient by -90 degrees
    v_r = p_r + 0.5 * g_phi
    v_phi = p_phi - 0.5 * g_r
    jx, jy = _polar_to_xy(phi_b, v_r, v_phi)
    return jx / energy, jy / energy


def field_arrays(evaluator: Superposition, x, y, r_min: float = 1e-3, m_max: int | None = None):
    """``rho, j_x, j_y`` on Cartesian points; NaN inside the guard disk ``r < r_min``."""
    xa, ya = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    r = np.hypot(xa, ya)
    phi = np.arctan2(ya, xa)
    ok = r >= r_min
    rho = np.full(xa.shape, np.nan)
    jx = np.full(xa.shape, np.nan)
    jy = np.full(xa.shape, np.nan)
    if ok.any():
        if m_max is None:
            m_max = evaluator.m_max_for(float(r[ok].max()))
        psi = evaluator(r[ok], phi[ok], m_max=m_max)
        rho[ok] = probability_density(psi)
        jx[ok], jy[ok] = current_density(evaluator.model, evaluator.flux, evaluator, r[ok], phi[ok], m_max=m_max)
    return rho, jx, jy


def sample_field(evaluator: Superposition, r: float, phi: float) -> FieldSample:
    psi = evaluator(np.array([r]), np.array([phi]))[0]
    jx, jy = current_density(evaluator.model, evaluator.flux, evaluator, np.array([r]), np.array([phi]))
    return FieldSample(r, phi, psi, float(probability_density(psi)), (float(jx[0]), float(jy[0])))


def sigma_factor(flux: FluxSpec, c) -> float:
    """``sum_n |c_n|^2 sin^2(pi alpha_n)`` for unit-norm coefficients."""
    w = np.abs(np.asarray(c, dtype=complex).ravel()) ** 2
    if w.size != flux.n_channels:
        raise ValueError("one coefficient per channel required")
    if abs(float(np.sum(w)) - 1.0) > NORM_TOL:
        raise ValueError("coefficients must satisfy sum |c_n|^2 = 1")
    a = np.asarray(flux.eigenvalues)
    s = np.sin(np.pi * (a - np.round(a)))
    return float(np.sum(w * s * s))


def cross_section(q: CrossSectionQuery) -> float:
    """Differential cross section ``Sigma / (2 pi k cos^2(phi/2))``."""
    c = math.cos(0.5 * q.phi)
    return q.sigma / (2.0 * math.pi * q.k * c * c)


def _axis(rng, n):
    lo, hi = (float(v) for v in rng)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("ranges must be finite")
    return np.linspace(lo, hi, n)


def sigma_map(group, c, alpha_range, beta_range, resolution, workers: int = 1) -> np.ndarray:
    """Sigma on an (alpha, beta) grid; rows follow beta, columns follow alpha.

    ``resolution`` is one count for both axes or a pair ``(n_alpha, n_beta)``.
    """
    group = Group(group)
    na, nb = (resolution, resolution) if np.isscalar(resolution) else resolution
    if na < 2 or nb < 2:
        raise ValueError("resolution must be >= 2")
    alphas = _axis(alpha_range, int(na))
    betas = _axis(beta_range, int(nb))
    c = np.asarray(c, dtype=complex)

    def row(beta):
        return [sigma_factor(flux_for_group(group, a, beta), c) for a in alphas]

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        rows = list(pool.map(row, betas))
    return np.array(rows)


def divergence(jx: np.ndarray, jy: np.ndarray, h: float) -> np.ndarray:
    """Central-difference divergence on interior nodes of a square grid.

    Arrays are indexed ``[iy, ix]``; the result has shape ``(ny-2, nx-2)``.
    """
    return (jx[1:-1, 2:] - jx[1:-1, :-2] + jy[2:, 1:-1] - jy[:-2, 1:-1]) / (2.0 * h)
