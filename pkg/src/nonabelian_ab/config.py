"""Job configuration for the command-line front end.

A :class:`JobConfig` is a plain, JSON-serialisable record. Worker count is a
runtime choice and deliberately not part of it, so provenance written into
output files never depends on how the job was scheduled.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields, replace

import numpy as np

from .gauge import FluxSpec, flux_for_group
from .models import ModelId, ModeSpec, Superposition, TruncationSpec, channel_modes

__all__ = ["ConfigError", "GridSpec", "JobConfig", "parse_coeffs", "format_coeff", "load_config"]


class ConfigError(ValueError):
    """Invalid user configuration (CLI exit status 1)."""


@dataclass(frozen=True)
class GridSpec:
    """Rectangular sampling window in units of d0."""

    x_min: float = -10.0
    x_max: float = 10.0
    y_min: float = -10.0
    y_max: float = 10.0
    nx: int = 201
    ny: int = 201
    r_min: float = 1e-3

    def __post_init__(self):
        vals = (self.x_min, self.x_max, self.y_min, self.y_max, self.r_min)
        if not all(math.isfinite(v) for v in vals):
            raise ConfigError("grid bounds must be finite")
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ConfigError("grid needs x_min < x_max and y_min < y_max")
        if int(self.nx) != self.nx or int(self.ny) != self.ny or self.nx < 2 or self.ny < 2:
            raise ConfigError("grid needs integer nx, ny >= 2")
        if not self.r_min > 0:
            raise ConfigError("r_min must be positive")

    @classmethod
    def parse(cls, text: str, r_min: float = 1e-3) -> "GridSpec":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 6:
            raise ConfigError("grid must be x0,x1,y0,y1,nx,ny")
        try:
            x0, x1, y0, y1 = (float(p) for p in parts[:4])
            nx, ny = int(parts[4]), int(parts[5])
        except ValueError as exc:
            raise ConfigError(f"bad grid spec {text!r}") from exc
        return cls(x0, x1, y0, y1, nx, ny, r_min)

    def axes(self):
        return np.linspace(self.x_min, self.x_max, self.nx), np.linspace(self.y_min, self.y_max, self.ny)

    def r_max(self) -> float:
        return math.hypot(max(abs(self.x_min), abs(self.x_max)), max(abs(self.y_min), abs(self.y_max)))


def parse_coeffs(text: str) -> list[complex]:
    """``"1,0.5-0.2i,2i"`` -> complex list; ``i`` and ``j`` both mark the imaginary unit."""
    out = []
    for tok in text.split(","):
        tok = tok.strip().replace(" ", "").replace("i", "j")
        try:
            out.append(complex(tok))
        except ValueError as exc:
            raise ConfigError(f"bad coefficient {tok!r}") from exc
    return out


def format_coeff(c: complex) -> str:
    c = complex(c)
    return f"{c.real!r}{'+' if c.imag >= 0 else '-'}{abs(c.imag)!r}i"


@dataclass(frozen=True)
class JobConfig:
    """Everything that determines a job's numerical output."""

    model: str = "su2"
    alpha: float = 0.0
    beta: float = 0.0
    band: int = 1
    k: float = 1.0
    theta: float = 0.0
    coeffs: tuple[str, ...] | None = None  # None: equal weights
    grid: GridSpec = field(default_factory=GridSpec)
    m_max: int | None = None  # None: automatic truncation
    digits: int = 6
    phi_range: tuple[float, float] = (-math.pi + 0.1, math.pi - 0.1)
    samples: int = 181
    alpha_range: tuple[float, float] = (-1.0, 1.0)
    beta_range: tuple[float, float] = (-1.0, 1.0)
    resolution: int = 201

    def __post_init__(self):
        try:
            model = ModelId(self.model)
        except ValueError as exc:
            raise ConfigError(f"unknown model {self.model!r}") from exc
        object.__setattr__(self, "model", model.value)
        if not all(math.isfinite(v) for v in (self.alpha, self.beta, self.theta)):
            raise ConfigError("flux parameters and theta must be finite")
        if model is ModelId.SU2_DOUBLET and self.beta != 0:
            raise ConfigError("the su2 model has no beta parameter")
        if self.band not in model.bands:
            raise ConfigError(f"band {self.band} not available for {model.value}; choose from {model.bands}")
        if not (math.isfinite(self.k) and self.k > 0):
            raise ConfigError("k must be positive")
        if self.coeffs is not None:
            cs = tuple(self.coeffs)
            object.__setattr__(self, "coeffs", tuple(format_coeff(c) for c in self._parse(cs)))
            if len(self.coeffs) != model.N:
                raise ConfigError(f"{model.value} needs {model.N} coefficients")
            if not any(complex(c.replace("i", "j")) != 0 for c in self.coeffs):
                raise ConfigError("coefficients are all zero")
        if self.m_max is not None and self.m_max < 0:
            raise ConfigError("m_max must be >= 0")
        if not 1 <= self.digits <= 17:
            raise ConfigError("digits must lie in 1..17")
        object.__setattr__(self, "phi_range", tuple(float(v) for v in self.phi_range))
        object.__setattr__(self, "alpha_range", tuple(float(v) for v in self.alpha_range))
        object.__setattr__(self, "beta_range", tuple(float(v) for v in self.beta_range))
        if self.samples < 2 or self.resolution < 2:
            raise ConfigError("samples and resolution must be >= 2")

    @staticmethod
    def _parse(cs) -> list[complex]:
        vals = []
        for c in cs:
            vals.extend(parse_coeffs(c) if isinstance(c, str) else [complex(c)])
        return vals

    @property
    def model_id(self) -> ModelId:
        return ModelId(self.model)

    def flux(self) -> FluxSpec:
        return flux_for_group(self.model_id.group, self.alpha, self.beta)

    def coefficient_vector(self) -> np.ndarray:
        """Unit-norm coefficients; ratios given on the command line are rescaled."""
        n = self.model_id.N
        c = np.ones(n, dtype=complex) if self.coeffs is None else np.array(self._parse(self.coeffs))
        return c / np.sqrt(np.sum(np.abs(c) ** 2))

    def modes(self) -> list[ModeSpec]:
        return channel_modes(self.model_id, self.band, self.k, self.theta)

    def truncation(self) -> TruncationSpec:
        return TruncationSpec() if self.m_max is None else TruncationSpec(self.m_max, auto=False)

    def superposition(self) -> Superposition:
        return Superposition(self.modes(), self.flux(), self.coefficient_vector(), self.truncation())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["coeffs"] = None if self.coeffs is None else list(self.coeffs)
        for key in ("phi_range", "alpha_range", "beta_range"):
            d[key] = list(d[key])
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "JobConfig":
        known = {f.name for f in fields(cls)}
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        d = dict(d)
        if isinstance(d.get("grid"), dict):
            try:
                d["grid"] = GridSpec(**d["grid"])
            except TypeError as exc:
                raise ConfigError(f"bad grid entry: {exc}") from exc
        for key in ("coeffs", "phi_range", "alpha_range", "beta_range"):
            if d.get(key) is not None:
                d[key] = tuple(d[key])
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def updated(self, **changes) -> "JobConfig":
        return replace(self, **changes)


def load_config(path) -> JobConfig:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return JobConfig.from_dict(data)
