"""Row-parallel evaluation of density and current on a Cartesian grid."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .config import GridSpec
from .models import Superposition
from .observables import field_arrays

__all__ = ["evaluate_grid"]


def evaluate_grid(sp: Superposition, grid: GridSpec, m_max: int | None = None, workers: int = 1):
    """Return ``(xs, ys, rho, jx, jy)`` with field arrays indexed ``[iy, ix]``.

    The truncation window is fixed once for the whole grid and every row is
    evaluated independently, so the result is the same for any worker count.
    """
    xs, ys = grid.axes()
    if m_max is None:
        m_max = sp.m_max_for(grid.r_max())

    def row(y):
        return field_arrays(sp, xs, np.full_like(xs, y), r_min=grid.r_min, m_max=m_max)

    if workers <= 1:
        rows = [row(y) for y in ys]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, ys))
    rho, jx, jy = (np.stack([r[i] for r in rows]) for i in range(3))
    return xs, ys, rho, jx, jy
