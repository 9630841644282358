"""Direct quadrature of the contour-integral form of the scattering states.

This is the in-repo oracle for the closed-form partial-wave series in
:mod:`nonabelian_ab.models`: it never calls a Bessel routine, only ``exp``
along a piecewise-linear path in the complex propagation-angle plane.

For channel ``n`` and ``t = m + alpha_n`` the m-th term is::

    eps(t) / (2 pi) * integral over Gamma(t, phi) of
        exp(i k r cos(phi - xi)) w_n u_s(xi) exp(i m (xi - theta) - i alpha_n (phi - xi)) dxi

``Gamma_+`` (``t >= 0``) is the U-shaped path ``a + iT -> a -> a + 2 pi -> a + 2 pi + iT``
with ``a = phi - 5 pi / 2``, moved right by ``2 pi`` on hole-like bands.
``Gamma_-`` (``t < 0``) is the cap-shaped path in the lower half-plane between
``phi - 3 pi / 2 - iT`` and ``phi + pi / 2 - iT``.

Two conventions pin the result to the series term by term:

* ``Gamma_-`` is traversed from its right end (``phi + pi/2 - iT``) to its
  left end. Run the other way, the ``eps(t) = -1`` prefactor flips the sign
  of every ``t < 0`` term, and the zero-flux state stops being a plane wave.
* On electron-like bands the integral equals ``exp(-i pi alpha_n)`` times the
  series. That is a constant phase per channel, so no observable sees it.
  :func:`contour_terms` multiplies it back out unless ``align_phase=False``.

The quadrature is composite Gauss-Legendre on panels of length ``step``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .gauge import FluxSpec
from .models import ModeSpec, TruncationSpec, radial_velocity_sign, SQRT_HALF

__all__ = [
    "Branch",
    "ContourSpec",
    "ContourError",
    "QuadratureError",
    "contour_vertices",
    "contour_nodes",
    "contour_term",
    "contour_terms",
    "contour_state",
]

GAUSS_ORDER = 8
ENDPOINT_TOL = 1e-14
CONVERGENCE_TOL = 1e-9


class ContourError(ArithmeticError):
    """The integrand has not decayed at the ends of the truncated contour."""


class QuadratureError(ArithmeticError):
    """Halving the panel length changed the result by more than the tolerance."""


class Branch(str, Enum):
    PLUS = "+"
    MINUS = "-"


@dataclass(frozen=True)
class ContourSpec:
    """Geometry and resolution of one contour.

    ``height`` replaces the infinite imaginary extent; ``step`` is the
    Gauss-Legendre panel length.
    """

    phi: float
    branch: Branch
    v_sign: int = 1
    height: float = 12.0
    step: float = 0.02
    reverse_minus: bool = True

    def __post_init__(self):
        object.__setattr__(self, "branch", Branch(self.branch))
        if self.v_sign not in (-1, 1):
            raise ValueError("v_sign must be +1 or -1")
        if self.height < 10:
            raise ValueError("contour height must be >= 10")
        if not 0 < self.step <= 0.05:
            raise ValueError("step must lie in (0, 0.05]")

    @classmethod
    def for_order(cls, t: float, phi: float, v_sign: int, **kw) -> "ContourSpec":
        return cls(phi, Branch.PLUS if t >= 0 else Branch.MINUS, v_sign, **kw)


def contour_vertices(spec: ContourSpec) -> list[complex]:
    """Corner points of the path in traversal order."""
    T = spec.height
    if spec.branch is Branch.PLUS:
        a = -2.5 * math.pi + spec.phi
        if spec.v_sign < 0:
            a += 2.0 * math.pi
        b = a + 2.0 * math.pi
        return [complex(a, T), complex(a, 0.0), complex(b, 0.0), complex(b, T)]
    a = -1.5 * math.pi + spec.phi
    b = 0.5 * math.pi + spec.phi
    path = [complex(a, -T), complex(a, 0.0), complex(b, 0.0), complex(b, -T)]
    return path[::-1] if spec.reverse_minus else path


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gauss(order: int):
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GL_CACHE[order]


def contour_nodes(spec: ContourSpec, order: int = GAUSS_ORDER):
    """Quadrature nodes ``xi`` and complex weights (``dxi`` included) along the path."""
    g, gw = _gauss(order)
    verts = contour_vertices(spec)
    nodes, weights = [], []
    for z0, z1 in zip(verts[:-1], verts[1:]):
        seg = z1 - z0
        n_pan = max(1, math.ceil(abs(seg) / spec.step))
        edges = np.arange(n_pan) / n_pan
        half = 0.5 / n_pan
        u = (edges[:, None] + half * (g[None, :] + 1.0)).ravel()
        nodes.append(z0 + seg * u)
        weights.append(np.tile(gw * half, n_pan) * seg)
    return np.concatenate(nodes), np.concatenate(weights)


def _exponent(mode: ModeSpec, alpha: float, m: np.ndarray, r: float, phi: float, xi: np.ndarray):
    # log of the scalar part of the integrand, shape (len(m), len(xi))
    base = 1j * mode.k * r * np.cos(phi - xi) - 1j * alpha * (phi - xi)
    return base[None, :] + 1j * np.outer(m, xi - mode.theta)


def _spinor_factors(mode: ModeSpec, xi: np.ndarray) -> list[np.ndarray]:
    if mode.model.D == 1:
        return [np.ones_like(xi)]
    return [np.full_like(xi, SQRT_HALF), SQRT_HALF * mode.s * np.exp(1j * xi)]


def _branch_sum(mode, alpha, m, r, phi, spec: ContourSpec):
    xi, w = contour_nodes(spec)
    ends = np.array([contour_vertices(spec)[0], contour_vertices(spec)[-1]])
    end_vals = np.exp(_exponent(mode, alpha, m, r, phi, ends))
    for fac in _spinor_factors(mode, ends):
        worst = float(np.max(np.abs(end_vals * fac)))
        if worst >= ENDPOINT_TOL:
            raise ContourError(f"integrand {worst:.2e} at contour ends; raise the height")
    vals = np.exp(_exponent(mode, alpha, m, r, phi, xi))
    return np.stack([(vals * fac) @ w for fac in _spinor_factors(mode, xi)], axis=-1)


def contour_terms(
    mode: ModeSpec,
    flux: FluxSpec,
    ms,
    r: float,
    phi: float,
    height: float = 12.0,
    step: float = 0.02,
    check: bool = True,
    align_phase: bool = True,
    reverse_minus: bool = True,
) -> np.ndarray:
    """Contour-quadrature partial-wave terms for several ``m`` at one point.

    Returns shape ``(len(ms), N*D)`` with only the channel-``n`` block filled.
    """
    if not r > 0:
        raise ValueError("contour evaluation needs r > 0")
    if flux.group is not mode.model.group:
        raise ValueError("flux group does not match the model")
    ms = np.atleast_1d(np.asarray(ms, dtype=np.int64))
    alpha = flux.eigenvalues[mode.n - 1]
    v_sign = radial_velocity_sign(mode.model, mode.s)
    D = mode.model.D
    block = np.zeros((ms.size, D), dtype=complex)
    t = ms + alpha
    for branch, mask in ((Branch.PLUS, t >= 0), (Branch.MINUS, t < 0)):
        if not mask.any():
            continue
        spec = ContourSpec(phi, branch, v_sign, height, step, reverse_minus)
        val = _branch_sum(mode, alpha, ms[mask], r, phi, spec)
        if check:
            fine = _branch_sum(mode, alpha, ms[mask], r, phi,
                               ContourSpec(phi, branch, v_sign, height, step / 2, reverse_minus))
            diff = float(np.max(np.abs(fine - val)))
            if diff > CONVERGENCE_TOL:
                raise QuadratureError(f"quadrature changed by {diff:.2e} on halving the step")
            val = fine
        eps = 1.0 if branch is Branch.PLUS else -1.0
        block[mask] = eps / (2.0 * math.pi) * val
    if align_phase and v_sign > 0:
        block *= np.exp(1j * math.pi * alpha)
    out = np.zeros((ms.size, mode.model.dim), dtype=complex)
    out[:, (mode.n - 1) * D:mode.n * D] = block
    return out


def contour_term(mode: ModeSpec, flux: FluxSpec, m: int, r: float, phi: float, **kw) -> np.ndarray:
    """Single partial-wave term by contour quadrature, shape ``(N*D,)``."""
    return contour_terms(mode, flux, [m], r, phi, **kw)[0]


def contour_state(modes, flux: FluxSpec, coeffs, r: float, phi: float, m_max: int | None = None, **kw) -> np.ndarray:
    """Superposed scattering state at one point, summed from contour terms."""
    modes = list(modes)
    if m_max is None:
        m_max = TruncationSpec().resolve(modes[0].k, r, flux)
    ms = np.arange(-m_max, m_max + 1)
    total = np.zeros(modes[0].model.dim, dtype=complex)
    for mode, c in zip(modes, np.asarray(coeffs, dtype=complex)):
        if c != 0:
            total += c * contour_terms(mode, flux, ms, r, phi, **kw).sum(axis=0)
    return total

