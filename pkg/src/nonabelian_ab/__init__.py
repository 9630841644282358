"""Aharonov-Bohm scattering on non-Abelian flux tubes.

Scattering states, densities, currents and cross sections for an SU(2)
doublet, an SU(3) triplet and a Dirac-like U(2) doublet, with a contour
quadrature oracle and a command-line front end.
"""

__version__ = "0.1.0"

from .gauge import FluxSpec, Group, flux_for_group, gauge_potential, su2_flux, su3_flux, u2_flux, wilson_loop
from .models import (
    ModeSpec,
    ModelId,
    NormalizationWarning,
    Superposition,
    TruncationSpec,
    TruncationWarning,
    channel_modes,
    plane_wave,
    scattering_state,
    superpose,
)
from .observables import (
    CrossSectionQuery,
    cross_section,
    current_density,
    probability_density,
    sigma_factor,
    sigma_map,
)
from .specfun import bessel_j, bessel_j_derivative, bessel_j_ladder, reciprocal_gamma

__all__ = [
    "FluxSpec",
    "Group",
    "flux_for_group",
    "gauge_potential",
    "su2_flux",
    "su3_flux",
    "u2_flux",
    "wilson_loop",
    "ModeSpec",
    "ModelId",
    "NormalizationWarning",
    "Superposition",
    "TruncationSpec",
    "TruncationWarning",
    "channel_modes",
    "plane_wave",
    "scattering_state",
    "superpose",
    "CrossSectionQuery",
    "cross_section",
    "current_density",
    "probability_density",
    "sigma_factor",
    "sigma_map",
    "bessel_j",
    "bessel_j_derivative",
    "bessel_j_ladder",
    "reciprocal_gamma",
]
