"""Diagonalised non-Abelian flux, its polarization basis, gauge potential and Wilson loop.

Fluxes are stored in the basis where the dimensionless flux matrix is
diagonal, so every channel ``n`` carries one real eigenvalue ``alpha_n``.
The gauge potential is returned in units of the flux quantum per unit length;
multiply by ``2*pi`` to get the momentum-space coupling used in the kinetic
momentum ``p + A`` (natural units, hbar = e = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "Group",
    "FluxSpec",
    "PolarizationBasis",
    "su2_flux",
    "su3_flux",
    "u2_flux",
    "flux_for_group",
    "gauge_potential",
    "wilson_loop",
]


class Group(str, Enum):
    SU2 = "SU2"
    SU3 = "SU3"
    U2 = "U2"

    @property
    def dimension(self) -> int:
        return 3 if self is Group.SU3 else 2


@dataclass(frozen=True)
class FluxSpec:
    """Eigenvalues ``alpha_n`` of the dimensionless flux, one per polarization channel."""

    eigenvalues: tuple[float, ...]
    group: Group

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", tuple(float(a) for a in self.eigenvalues))
        object.__setattr__(self, "group", Group(self.group))
        if len(self.eigenvalues) != self.group.dimension:
            raise ValueError(
                f"{self.group.value} flux needs {self.group.dimension} eigenvalues, "
                f"got {len(self.eigenvalues)}"
            )
        if not all(math.isfinite(a) for a in self.eigenvalues):
            raise ValueError("flux eigenvalues must be finite")
        if self.group in (Group.SU2, Group.SU3):
            tr = math.fsum(self.eigenvalues)
            if abs(tr) > 1e-12 * max(1.0, max(abs(a) for a in self.eigenvalues)):
                raise ValueError(f"{self.group.value} flux must be traceless (trace={tr})")

    @property
    def n_channels(self) -> int:
        return len(self.eigenvalues)

    def matrix(self) -> np.ndarray:
        return np.diag(np.asarray(self.eigenvalues))


@dataclass(frozen=True)
class PolarizationBasis:
    """Orthonormal eigenvectors ``w_n`` of the flux; columns of :attr:`vectors`."""

    vectors: np.ndarray

    @classmethod
    def for_flux(cls, flux: FluxSpec) -> "PolarizationBasis":
        # diagonal gauge: the standard basis
        return cls(np.eye(flux.n_channels, dtype=complex))

    def w(self, n: int) -> np.ndarray:
        """Channel vector for 1-based channel index ``n``."""
        return self.vectors[:, n - 1]


def su2_flux(alpha: float) -> FluxSpec:
    """``2 alpha tau_3 = diag(alpha, -alpha)``."""
    return FluxSpec((alpha, -alpha), Group.SU2)


def su3_flux(alpha: float, beta: float) -> FluxSpec:
    """``alpha lambda_3 + sqrt(3) beta lambda_8 = diag(beta+alpha, beta-alpha, -2 beta)``."""
    return FluxSpec((beta + alpha, beta - alpha, -2.0 * beta), Group.SU3)


def u2_flux(alpha: float, beta: float) -> FluxSpec:
    """``2 alpha tau_3 + 2 beta tau_4 = diag(beta+alpha, beta-alpha)``."""
    return FluxSpec((beta + alpha, beta - alpha), Group.U2)


def flux_for_group(group, alpha: float, beta: float = 0.0) -> FluxSpec:
    """Dispatch on the group tag; ``beta`` is ignored for SU(2)."""
    group = Group(group)
    if group is Group.SU2:
        return su2_flux(alpha)
    if group is Group.SU3:
        return su3_flux(alpha, beta)
    return u2_flux(alpha, beta)


def gauge_potential(flux: FluxSpec, x, y):
    """Cartesian components ``(A_x, A_y)`` of the flux-tube potential.

    Scalars give two diagonal ``N x N`` matrices; arrays give arrays of shape
    ``np.shape(x) + (N,)`` holding the diagonals.
    """
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    r2 = xa * xa + ya * ya
    if np.any(r2 == 0.0):
        raise ValueError("gauge potential is singular at the origin")
    alpha = np.asarray(flux.eigenvalues)
    ax = (-ya / (2.0 * np.pi * r2))[..., None] * alpha
    ay = (xa / (2.0 * np.pi * r2))[..., None] * alpha
    if xa.ndim == 0 and ya.ndim == 0:
        return np.diag(ax), np.diag(ay)
    return ax, ay


def wilson_loop(flux: FluxSpec) -> np.ndarray:
    """Holonomy around the tube, ``diag(exp(2 pi i alpha_n))``."""
    a = np.asarray(flux.eigenvalues)
    # reduce first: keeps the phase accurate for large |alpha|
    frac = a - np.round(a)
    return np.diag(np.exp(2j * np.pi * frac))
