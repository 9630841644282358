"""Binary PPM (P6) heatmaps with a fixed viridis-like colour table."""

from __future__ import annotations

import numpy as np

__all__ = ["COLOR_TABLE", "to_rgb", "ppm_bytes", "write_ppm"]

# (position, hex colour) anchors, linearly interpolated to 256 entries
_ANCHORS = [
    (0.0, "440154"),
    (0.1, "482475"),
    (0.2, "414487"),
    (0.3, "355f8d"),
    (0.4, "2a788e"),
    (0.5, "21918c"),
    (0.6, "22a884"),
    (0.7, "44bf70"),
    (0.8, "7ad151"),
    (0.9, "bddf26"),
    (1.0, "fde725"),
]

NAN_COLOR = (0, 0, 0)


def _build_table() -> np.ndarray:
    pos = np.array([p for p, _ in _ANCHORS])
    rgb = np.array([[int(h[i:i + 2], 16) for i in (0, 2, 4)] for _, h in _ANCHORS], dtype=float)
    t = np.linspace(0.0, 1.0, 256)
    table = np.stack([np.interp(t, pos, rgb[:, c]) for c in range(3)], axis=1)
    return np.rint(table).astype(np.uint8)


COLOR_TABLE = _build_table()


def to_rgb(values, vmin: float | None = None, vmax: float | None = None) -> np.ndarray:
    """Map a 2-D array to ``(ny, nx, 3)`` uint8 colours; NaN becomes black.

    Row 0 of ``values`` is drawn at the bottom of the image.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim != 2:
        raise ValueError("heatmap data must be 2-D")
    finite = np.isfinite(v)
    if vmin is None:
        vmin = float(v[finite].min()) if finite.any() else 0.0
    if vmax is None:
        vmax = float(v[finite].max()) if finite.any() else 1.0
    span = vmax - vmin
    scaled = np.zeros_like(v) if span <= 0 else (np.where(finite, v, vmin) - vmin) / span
    idx = np.clip(np.rint(scaled * 255.0), 0, 255).astype(np.int64)
    img = COLOR_TABLE[idx]
    img[~finite] = NAN_COLOR
    return img[::-1]


def ppm_bytes(values, vmin: float | None = None, vmax: float | None = None) -> bytes:
    img = to_rgb(values, vmin, vmax)
    ny, nx, _ = img.shape
    return f"P6\n{nx} {ny}\n255\n".encode("ascii") + img.tobytes()


def write_ppm(path, values, vmin: float | None = None, vmax: float | None = None) -> None:
    with open(path, "wb") as fh:
        fh.write(ppm_bytes(values, vmin, vmax))
