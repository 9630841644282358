"""Regenerate the frozen reference data in this directory.

    python tests/data/generate_fixtures.py

Bessel values come from the extended-precision series in ``tests/oracles.py``.
Density fixtures come from direct contour quadrature (``contour_state``), never
from the partial-wave series that the tests check against them.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import numpy as np

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE.parent))

from oracles import bessel_series  # noqa: E402

from nonabelian_ab.contour import contour_state  # noqa: E402
from nonabelian_ab.gauge import su2_flux, u2_flux  # noqa: E402
from nonabelian_ab.models import ModelId, TruncationSpec, channel_modes  # noqa: E402


def bessel_fixture() -> dict:
    rng = np.random.default_rng(20240611)
    nus = rng.uniform(-5.0, 40.0, 2000)
    xs = rng.uniform(0.0, 80.0, 2000)
    points = [(float(n), float(x)) for n, x in zip(nus, xs)]
    # exact zero argument for non-negative orders, including integers
    points += [(float(n), 0.0) for n in (0.0, 0.5, 1.0, 2.0, 7.25, 40.0)]
    return {
        "description": "J_nu(x), nu in [-5, 40], x in [0, 80]; extended-precision series",
        "points": [[n, x, bessel_series(n, x)] for n, x in points],
    }


def density_fixture(model: ModelId, flux, s: int, window: float, n: int) -> dict:
    modes = channel_modes(model, s, 1.0, 0.0)
    c = np.ones(len(modes)) / math.sqrt(len(modes))
    g = np.linspace(-window, window, n)
    rows = []
    for y in g:
        for x in g:
            r = math.hypot(x, y)
            if r < 1e-3:
                continue
            m_max = TruncationSpec().resolve(1.0, r, flux)
            psi = contour_state(modes, flux, c, r, math.atan2(y, x), m_max=m_max)
            rows.append([float(x), float(y), float(np.sum(np.abs(psi) ** 2))])
    return {
        "model": model.value,
        "eigenvalues": list(flux.eigenvalues),
        "band": s,
        "k": 1.0,
        "theta": 0.0,
        "grid": [-window, window, -window, window, n, n],
        "rows": rows,
    }


def main() -> None:
    (HERE / "bessel_sample.json").write_text(json.dumps(bessel_fixture()))
    fixtures = {
        "su2_alpha0.2": density_fixture(ModelId.SU2_DOUBLET, su2_flux(0.2), 1, 6.0, 13),
        "u2_alpha0.5_beta0.25": density_fixture(ModelId.U2_DOUBLET, u2_flux(0.5, 0.25), 1, 6.0, 13),
    }
    (HERE / "density_contour.json").write_text(json.dumps(fixtures, indent=1))


if __name__ == "__main__":
    main()
