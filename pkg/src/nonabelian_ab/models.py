"""The three isotropic multiband models and their Aharonov-Bohm scattering states.

Natural units throughout: hbar = M = v = 1 and lengths in d_0, so ``k`` is
``k d_0``.

Each channel ``n`` of the diagonalised flux scatters independently. With
``t = m + alpha_n`` the m-th partial wave of a one-component (D = 1) model is::

    b**|t| * J_|t|(k r) * exp(i m (phi - theta + pi))

and for the U(2) Dirac doublet it is the spinor::

    b**|t| exp(i m (phi - theta_g + pi)) / sqrt(2) * (J_|t|(kr),
        i s eps(t) J_{|t|+eps(t)}(kr) exp(i phi))

where ``b = -i`` on electron-like bands and ``b = +i`` on hole-like bands,
``eps(t) = +1`` for ``t >= 0`` and ``-1`` otherwise. ``theta`` is always the
direction of the wave vector. On a hole-like band the group velocity points the
other way, ``theta_g = theta + pi``; with that substitution every state reduces
to the plane wave ``exp(i k.r) w_n u_s(theta)`` at zero flux.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .gauge import FluxSpec, Group
from .specfun import bessel_j, bessel_j_ladder

__all__ = [
    "ModelId",
    "ModeSpec",
    "TruncationSpec",
    "TruncationWarning",
    "NormalizationWarning",
    "Superposition",
    "sign_eps",
    "auto_m_max",
    "dispersion",
    "radial_velocity_sign",
    "internal_eigenvector",
    "plane_wave",
    "partial_wave_term",
    "scattering_state",
    "superpose",
    "channel_modes",
]

SQRT_HALF = math.sqrt(0.5)


class TruncationWarning(RuntimeWarning):
    """The partial-wave window is too narrow for the requested radius."""


class NormalizationWarning(UserWarning):
    """Superposition coefficients were rescaled to unit norm."""


class ModelId(str, Enum):
    SU2_DOUBLET = "su2"
    SU3_TRIPLET = "su3"
    U2_DOUBLET = "u2"

    @property
    def group(self) -> Group:
        return {"su2": Group.SU2, "su3": Group.SU3, "u2": Group.U2}[self.value]

    @property
    def N(self) -> int:
        return self.group.dimension

    @property
    def D(self) -> int:
        return 2 if self is ModelId.U2_DOUBLET else 1

    @property
    def bands(self) -> tuple[int, ...]:
        return (-1, 1) if self is ModelId.U2_DOUBLET else (1,)

    @property
    def dim(self) -> int:
        return self.N * self.D


@dataclass(frozen=True)
class ModeSpec:
    """One incoming channel: band ``s``, polarization ``n`` (1-based), wave number, angle."""

    model: ModelId
    s: int
    n: int
    k: float
    theta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "model", ModelId(self.model))
        if self.s not in self.model.bands:
            raise ValueError(f"band s={self.s} not allowed for {self.model.value}")
        if not 1 <= self.n <= self.model.N:
            raise ValueError(f"channel n={self.n} outside 1..{self.model.N}")
        if not (math.isfinite(self.k) and self.k > 0):
            raise ValueError("wave number k must be positive")
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")


@dataclass(frozen=True)
class TruncationSpec:
    """Partial-wave window ``m in [-m_max, m_max]``.

    With ``auto=True`` the window is sized from the largest radius evaluated;
    callers that split a grid into chunks should resolve it once up front so
    every chunk uses the same window.
    """

    m_max: int = 0
    auto: bool = True

    def __post_init__(self):
        if self.m_max < 0:
            raise ValueError("m_max must be >= 0")

    def resolve(self, k: float, r_max: float, flux: FluxSpec) -> int:
        if not self.auto:
            return self.m_max
        return auto_m_max(k, r_max, flux)


def auto_m_max(k: float, r_max: float, flux: FluxSpec) -> int:
    kr = k * max(r_max, 0.0)
    amax = max(abs(a) for a in flux.eigenvalues)
    return int(math.ceil(kr + 8.0 * kr ** (1.0 / 3.0) + amax + 12.0))


def sign_eps(t: float) -> int:
    return 1 if t >= 0 else -1


def dispersion(model: ModelId, s: int, k: float) -> float:
    model = ModelId(model)
    if k < 0:
        raise ValueError("k must be >= 0")
    if model is ModelId.U2_DOUBLET:
        return s * k
    return 0.5 * k * k


def radial_velocity_sign(model: ModelId, s: int) -> int:
    model = ModelId(model)
    if s not in model.bands:
        raise ValueError(f"band s={s} not allowed for {model.value}")
    return s if model is ModelId.U2_DOUBLET else 1


def internal_eigenvector(model: ModelId, s: int, theta) -> np.ndarray:
    """Momentum-space spinor ``u_s``; ``theta`` may be complex (analytic continuation)."""
    model = ModelId(model)
    if model is ModelId.U2_DOUBLET:
        return SQRT_HALF * np.array([1.0 + 0j, s * np.exp(1j * theta)])
    return np.ones(1, dtype=complex)


def plane_wave(mode: ModeSpec, r, phi) -> np.ndarray:
    """``exp(i k r cos(phi - theta)) w_n u_s(theta)``, shape ``broadcast(r, phi) + (N*D,)``."""
    r = np.asarray(r, dtype=float)
    phi = np.asarray(phi, dtype=float)
    model = mode.model
    u = internal_eigenvector(model, mode.s, mode.theta)
    phase = np.exp(1j * mode.k * r * np.cos(phi - mode.theta))
    out = np.zeros(np.broadcast(r, phi).shape + (model.dim,), dtype=complex)
    lo = (mode.n - 1) * model.D
    out[..., lo:lo + model.D] = phase[..., None] * u
    return out


def _angle_offset(mode: ModeSpec) -> float:
    # phi - theta_g + pi, theta_g the propagation direction
    if radial_velocity_sign(mode.model, mode.s) > 0:
        return math.pi - mode.theta
    return -mode.theta


def _prefactor_phase(mode: ModeSpec) -> float:
    return -0.5 * math.pi if radial_velocity_sign(mode.model, mode.s) > 0 else 0.5 * math.pi


def partial_wave_term(mode: ModeSpec, flux: FluxSpec, m: int, r: float, phi: float) -> np.ndarray:
    """The m-th summand of the scattering state at one point (scalar reference path)."""
    model = mode.model
    if flux.group is not model.group:
        raise ValueError("flux group does not match the model")
    alpha = flux.eigenvalues[mode.n - 1]
    t = m + alpha
    at = abs(t)
    eps = sign_eps(t)
    x = mode.k * r
    pref = np.exp(1j * (_prefactor_phase(mode) * at + m * (phi + _angle_offset(mode))))
    out = np.zeros(model.dim, dtype=complex)
    lo = (mode.n - 1) * model.D
    if model.D == 1:
        out[lo] = pref * bessel_j(at, x)
    else:
        out[lo] = SQRT_HALF * pref * bessel_j(at, x)
        out[lo + 1] = SQRT_HALF * pref * 1j * mode.s * eps * bessel_j(at + eps, x) * np.exp(1j * phi)
    return out


@dataclass
class _Block:
    """One channel's component block and (optionally) its polar derivatives."""

    psi: np.ndarray
    d_r: np.ndarray | None = None
    d_phi: np.ndarray | None = None
    edge: np.ndarray | None = None


def _accumulate(coef, bess, ephase):
    acc = np.zeros(bess.shape[1], dtype=complex)
    for i in range(bess.shape[0]):
        acc += coef[i] * bess[i] * ephase[i]
    return acc


def _channel_block(mode: ModeSpec, alpha: float, m_max: int, r, phi, derivatives: bool) -> _Block:
    """Partial-wave sum for one channel at flat arrays ``r``, ``phi``."""
    model = mode.model
    dirac = model.D == 2
    k = mode.k
    x = k * r
    m = np.arange(-m_max, m_max + 1)
    t = m + alpha
    m0 = math.ceil(-alpha)
    pos = t >= 0
    at = np.abs(t)
    eps = np.where(pos, 1, -1)

    # Bessel values J_|t|, the spinor order J_{|t|+eps}, and neighbours for derivatives.
    n_pos = int(np.count_nonzero(pos))
    n_neg = m.size - n_pos
    npts = x.size
    j_main = np.empty((m.size, npts))
    j_up = np.empty((m.size, npts))  # J_{|t|+1}
    j_spin = j_spin_up = None
    if dirac:
        j_spin = np.empty((m.size, npts))
        j_spin_up = np.empty((m.size, npts))
    if n_pos:
        p0 = m0 + alpha if m0 >= -m_max else alpha - m_max
        lad = bessel_j_ladder(p0, n_pos + 2, x)
        idx = np.nonzero(pos)[0]
        j_main[idx] = lad[:n_pos]
        j_up[idx] = lad[1:n_pos + 1]
        if dirac:
            j_spin[idx] = lad[1:n_pos + 1]
            j_spin_up[idx] = lad[2:n_pos + 2]
    if n_neg:
        q0 = (1 - m0) - alpha if m0 <= m_max else -(m_max + alpha)
        idx = np.nonzero(~pos)[0][::-1]  # increasing |t|
        if dirac:
            lad = bessel_j_ladder(q0 - 1.0, n_neg + 2, x)
            j_spin[idx] = lad[:n_neg]
            j_spin_up[idx] = lad[1:n_neg + 1]
            j_main[idx] = lad[1:n_neg + 1]
            j_up[idx] = lad[2:n_neg + 2]
        else:
            lad = bessel_j_ladder(q0, n_neg + 1, x)
            j_main[idx] = lad[:n_neg]
            j_up[idx] = lad[1:n_neg + 1]

    coef = np.exp(1j * (_prefactor_phase(mode) * at + m * _angle_offset(mode)))
    if dirac:
        coef = coef * SQRT_HALF
    ephase = np.exp(1j * np.outer(m, phi))
    comps = [_accumulate(coef, j_main, ephase)]
    spin_coef = None
    if dirac:
        spin_coef = coef * (1j * mode.s) * eps
        e1 = np.exp(1j * phi)
        comps.append(_accumulate(spin_coef, j_spin, ephase) * e1)
    psi = np.stack(comps, axis=-1)

    edge_main = np.maximum(np.abs(j_main[0]), np.abs(j_main[-1]))
    if dirac:
        edge_main = np.maximum(edge_main, np.maximum(np.abs(j_spin[0]), np.abs(j_spin[-1])))
    block = _Block(psi=psi, edge=edge_main)
    if not derivatives:
        return block

    # J'_nu(x) = (nu/x) J_nu(x) - J_{nu+1}(x); d/dr = k d/dx
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_x = 1.0 / x
    dj_main = k * (at[:, None] * inv_x * j_main - j_up)
    d_r = [_accumulate(coef, dj_main, ephase)]
    d_phi = [_accumulate(coef * 1j * m, j_main, ephase)]
    if dirac:
        spin_order = at + eps
        dj_spin = k * (spin_order[:, None] * inv_x * j_spin - j_spin_up)
        d_r.append(_accumulate(spin_coef, dj_spin, ephase) * e1)
        d_phi.append(_accumulate(spin_coef * 1j * (m + 1), j_spin, ephase) * e1)
    block.d_r = np.stack(d_r, axis=-1)
    block.d_phi = np.stack(d_phi, axis=-1)
    return block


class Superposition:
    """Linear combination ``sum_n c_n Psi_{s,n,k}`` of scattering states.

    Instances are immutable after construction and can be shared between
    threads. Calling the object evaluates the state vector.
    """

    def __init__(self, modes: Sequence[ModeSpec], flux: FluxSpec, coeffs, trunc: TruncationSpec | None = None):
        modes = list(modes)
        if not modes:
            raise ValueError("need at least one mode")
        head = modes[0]
        for md in modes[1:]:
            if (md.model, md.s, md.k, md.theta) != (head.model, head.s, head.k, head.theta):
                raise ValueError("superposed modes must share model, band, k and theta")
        if flux.group is not head.model.group:
            raise ValueError("flux group does not match the model")
        c = np.asarray(coeffs, dtype=complex).ravel()
        if c.size != len(modes):
            raise ValueError("one coefficient per mode required")
        norm = float(np.sum(np.abs(c) ** 2))
        if norm == 0.0:
            raise ValueError("coefficients are all zero")
        if abs(norm - 1.0) > 1e-12:
            warnings.warn(f"coefficients had squared norm {norm:g}; normalised", NormalizationWarning, stacklevel=2)
            c = c / math.sqrt(norm)
        self.modes = tuple(modes)
        self.flux = flux
        self.coeffs = c
        self.trunc = trunc or TruncationSpec()
        self.model = head.model
        self.k = head.k

    def m_max_for(self, r_max: float) -> int:
        return self.trunc.resolve(self.k, r_max, self.flux)

    def evaluate(self, r, phi, derivatives: bool = False, m_max: int | None = None):
        """State and optionally its polar derivatives.

        Returns ``(psi, d_r, d_phi)`` with shape ``broadcast(r, phi) + (N*D,)``;
        the derivative entries are None unless requested.
        """
        r_b, phi_b = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(phi, dtype=float))
        shape = r_b.shape
        rf = r_b.ravel()
        pf = phi_b.ravel()
        if np.any(rf < 0) or not np.all(np.isfinite(rf)):
            raise ValueError("radius must be finite and >= 0")
        if derivatives and np.any(rf == 0):
            raise ValueError("derivatives need r > 0")
        if m_max is None:
            m_max = self.m_max_for(float(rf.max()) if rf.size else 0.0)
        model = self.model
        D = model.D
        psi = np.zeros((rf.size, model.dim), dtype=complex)
        d_r = np.zeros_like(psi) if derivatives else None
        d_phi = np.zeros_like(psi) if derivatives else None
        edge = np.zeros(rf.size)
        for mode, c in zip(self.modes, self.coeffs):
            if c == 0:
                continue
            alpha = self.flux.eigenvalues[mode.n - 1]
            blk = _channel_block(mode, alpha, m_max, rf, pf, derivatives)
            sl = slice((mode.n - 1) * D, mode.n * D)
            psi[:, sl] += c * blk.psi
            edge = np.maximum(edge, abs(c) * blk.edge)
            if derivatives:
                d_r[:, sl] += c * blk.d_r
                d_phi[:, sl] += c * blk.d_phi
        # plane-wave amplitudes are O(1); the floor keeps nodal lines from tripping the check
        size = np.sqrt(np.sum(np.abs(psi) ** 2, axis=-1))
        if np.any(edge > 1e-12 * np.maximum(size, 1.0)):
            warnings.warn(f"partial-wave window m_max={m_max} may be too small", TruncationWarning, stacklevel=2)
        out_shape = shape + (model.dim,)
        return (
            psi.reshape(out_shape),
            None if d_r is None else d_r.reshape(out_shape),
            None if d_phi is None else d_phi.reshape(out_shape),
        )

    def __call__(self, r, phi, m_max: int | None = None) -> np.ndarray:
        return self.evaluate(r, phi, m_max=m_max)[0]


def superpose(modes: Sequence[ModeSpec], flux: FluxSpec, c, trunc: TruncationSpec | None = None) -> Superposition:
    return Superposition(modes, flux, c, trunc)


def channel_modes(model: ModelId, s: int, k: float, theta: float = 0.0) -> list[ModeSpec]:
    """All N polarization channels of one band, in channel order."""
    model = ModelId(model)
    return [ModeSpec(model, s, n, k, theta) for n in range(1, model.N + 1)]


def scattering_state(mode: ModeSpec, flux: FluxSpec, trunc: TruncationSpec | None, r, phi) -> np.ndarray:
    """Single-channel scattering state, shape ``broadcast(r, phi) + (N*D,)``."""
    return Superposition([mode], flux, [1.0], trunc)(r, phi)
