"""Bessel functions of the first kind for real order, and the reciprocal gamma function.

Three regimes are used for ``J_nu(x)``:

* ascending power series for small arguments (``x <= power_series_max_x``),
  where the alternating terms barely cancel;
* Miller's backward recurrence, normalised with the Neumann sum
  ``(x/2)**mu = sum_k (mu + 2k) Gamma(mu + k) / k! * J_{mu+2k}(x)``, for
  everything in between;
* Hankel's large-argument expansion for ``x >= series_cutoff_x`` whenever
  its terms drop below machine precision before they start to grow.

Negative non-integer orders come out of the same machinery: the power series
takes them directly through :func:`reciprocal_gamma`, and the recurrence is
simply continued a few steps below its normalisation order.

The ladder routine :func:`bessel_j_ladder` returns ``J_{nu0+j}(x)`` for a whole
run of orders and an array of arguments at once, which is what the
partial-wave sums need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "BesselConfig",
    "DEFAULT_CONFIG",
    "reciprocal_gamma",
    "bessel_j",
    "bessel_j_derivative",
    "bessel_j_ladder",
]

_TINY = 1e-300
_HUGE = 1e250
_EPS = 2.0**-56


@dataclass(frozen=True)
class BesselConfig:
    """Regime switches and accuracy target for the Bessel evaluators.

    Attributes:
        series_cutoff_x: arguments at or above this try the Hankel expansion.
        max_series_terms: hard cap on power-series / asymptotic terms.
        target_rel_err: accuracy the regime switches are tuned for.
        power_series_max_x: arguments at or below this use the power series.
    """

    series_cutoff_x: float = 30.0
    max_series_terms: int = 300
    target_rel_err: float = 1e-10
    power_series_max_x: float = 2.0

    def __post_init__(self):
        if not self.series_cutoff_x > 0:
            raise ValueError("series_cutoff_x must be positive")
        if self.max_series_terms < 50:
            raise ValueError("max_series_terms must be >= 50")
        if not 0 < self.target_rel_err < 1e-6:
            raise ValueError("target_rel_err must lie in (0, 1e-6)")
        if not 0 < self.power_series_max_x <= self.series_cutoff_x:
            raise ValueError("power_series_max_x must lie in (0, series_cutoff_x]")


DEFAULT_CONFIG = BesselConfig()


def _is_int(v: float) -> bool:
    return float(v).is_integer()


def reciprocal_gamma(z: float) -> float:
    """Return ``1/Gamma(z)``; exactly zero at the poles ``z = 0, -1, -2, ...``.

    Raises OverflowError below about ``z = -171`` where ``|1/Gamma|`` leaves
    the double range.
    """
    z = float(z)
    if not math.isfinite(z):
        raise ValueError("reciprocal_gamma needs a finite argument")
    if z <= 0 and _is_int(z):
        return 0.0
    if z > 171.0:
        return math.exp(-math.lgamma(z))
    if z < -170.0:
        # |Gamma(z)| underflows here; sign of Gamma alternates between poles.
        sign = -1.0 if math.ceil(-z) % 2 else 1.0
        return sign * math.exp(-math.lgamma(z))
    return 1.0 / math.gamma(z)


def _series_rows(orders, x, max_terms):
    """Power series for each order in ``orders`` (non-integer or >= 0) at x > 0."""
    half = 0.5 * x
    q = -(half * half)
    # log(x) - log 2, not log(x/2): x/2 underflows for subnormal x
    log_half = np.log(x) - math.log(2.0)
    out = np.empty((len(orders),) + x.shape)
    for i, nu in enumerate(orders):
        if nu + 1.0 > 0.0:
            term = np.exp(nu * log_half - math.lgamma(nu + 1.0))
        else:
            with np.errstate(over="ignore"):
                term = np.exp(nu * log_half) * reciprocal_gamma(nu + 1.0)
        total = term.copy()
        # per-element stopping keeps each value independent of its batch
        active = np.ones(x.shape, dtype=bool)
        with np.errstate(invalid="ignore", over="ignore"):
            for k in range(1, max_terms + 1):
                term = term * q / (k * (k + nu))
                total = np.where(active, total + term, total)
                active &= np.abs(term) > _EPS * np.abs(total)
                if not active.any():
                    break
        out[i] = total
    return out


def _neumann_weights(mu: float, kmax: int) -> np.ndarray:
    """Weights ``(mu+2k) Gamma(mu+k)/k!`` with the k=0 entry written as ``Gamma(mu+1)``."""
    w = np.empty(kmax + 1)
    w[0] = math.gamma(mu + 1.0)
    g = math.gamma(mu + 1.0)  # Gamma(mu+1)/1!
    for k in range(1, kmax + 1):
        w[k] = (mu + 2 * k) * g
        g *= (mu + k) / (k + 1)
    return w


def _miller_rows(mu, j_lo, j_hi, x):
    """``J_{mu+j}(x)`` for ``j_lo <= j <= j_hi`` by backward recurrence.

    ``mu`` lies in [0, 1); ``x`` is a 1-D array of positive arguments. Each
    element starts its own recurrence, so the result for one element never
    depends on its neighbours.
    """
    top = mu + j_hi
    z = np.maximum(top, x)
    start = np.ceil(z + 12.0 * np.cbrt(z) + 25.0 - mu).astype(np.int64)
    j_start = int(start.max())
    weights = _neumann_weights(mu, j_start // 2 + 1)

    n = x.shape[0]
    f = np.zeros(n)
    f_up = np.zeros(n)
    norm = np.zeros(n)
    keep_lo = max(j_lo, 0)
    out = np.zeros((j_hi - j_lo + 1, n))
    for j in range(j_start, -1, -1):
        f[start == j] = _TINY
        if keep_lo <= j <= j_hi:
            out[j - j_lo] = f
        if j % 2 == 0:
            norm += weights[j // 2] * f
        if j > 0:
            f_down = (2.0 * (mu + j) / x) * f - f_up
            f_up, f = f, f_down
            big = np.abs(f) > _HUGE
            if big.any():
                f[big] *= 1.0 / _HUGE
                f_up[big] *= 1.0 / _HUGE
                norm[big] *= 1.0 / _HUGE
                out[:, big] *= 1.0 / _HUGE
    scale = np.power(0.5 * x, mu) / norm
    out *= scale
    if j_lo < 0:
        cur = f * scale
        up = f_up * scale
        for j in range(0, j_lo, -1):
            down = (2.0 * (mu + j) / x) * cur - up
            if j - 1 <= j_hi:
                out[j - 1 - j_lo] = down
            up, cur = cur, down
    return out


def _ladder_nonint(nu0, count, x, cfg):
    """Ladder for non-integer ``nu0`` (or integer ``nu0 >= 0``) over x > 0."""
    orders = nu0 + np.arange(count)
    out = np.empty((count,) + x.shape)
    small = x <= cfg.power_series_max_x
    if small.any():
        out[:, small] = _series_rows(orders, x[small], cfg.max_series_terms)
    rest = ~small
    if rest.any():
        j_lo = math.floor(nu0)
        mu = nu0 - j_lo
        out[:, rest] = _miller_rows(mu, j_lo, j_lo + count - 1, x[rest])
    return out


def bessel_j_ladder(nu0: float, count: int, x, config: BesselConfig | None = None) -> np.ndarray:
    """Return ``J_{nu0 + j}(x)`` for ``j = 0 .. count-1``.

    Args:
        nu0: lowest order; any real number.
        count: number of consecutive orders (>= 1).
        x: non-negative argument(s), scalar or array.
        config: regime switches; defaults to :data:`DEFAULT_CONFIG`.

    Returns:
        Array of shape ``(count,) + np.shape(x)``.

    Raises:
        ValueError: a negative non-integer order is requested at ``x = 0``,
            or ``x`` contains negative / non-finite entries.
        OverflowError: a value exceeds the double range.
    """
    cfg = config or DEFAULT_CONFIG
    if count < 1:
        raise ValueError("count must be >= 1")
    nu0 = float(nu0)
    xa = np.asarray(x, dtype=float)
    shape = xa.shape
    xf = xa.ravel()
    if not np.all(np.isfinite(xf)) or np.any(xf < 0):
        raise ValueError("Bessel argument must be finite and non-negative")
    orders = nu0 + np.arange(count)
    out = np.empty((count, xf.size))

    zero = xf == 0.0
    if zero.any():
        if np.any((orders < 0) & (orders != np.floor(orders))):
            raise ValueError("J_nu(0) diverges for negative non-integer order")
        out[:, zero] = (orders == 0.0).astype(float)[:, None]
    pos = ~zero
    if pos.any():
        xp = xf[pos]
        if _is_int(nu0) and nu0 < 0:
            n_lo = int(nu0)
            n_hi = n_lo + count - 1
            top = max(-n_lo, n_hi)
            base = _ladder_nonint(0.0, top + 1, xp, cfg)
            for i, n in enumerate(range(n_lo, n_hi + 1)):
                out[i, pos] = base[n] if n >= 0 else (-1.0) ** n * base[-n]
        else:
            out[:, pos] = _ladder_nonint(nu0, count, xp, cfg)
    if not np.all(np.isfinite(out)):
        raise OverflowError("Bessel value exceeds the double range")
    return out.reshape((count,) + shape)


def _hankel(nu: float, x: float, cfg: BesselConfig):
    """Large-argument expansion; None when it cannot reach full precision."""
    mu4 = 4.0 * nu * nu
    p, q = 1.0, 0.0
    a = 1.0
    prev = math.inf
    for k in range(1, cfg.max_series_terms + 1):
        a *= (mu4 - (2 * k - 1) ** 2) / (k * 8.0 * x)
        mag = abs(a)
        if mag > prev and mag > _EPS:
            return None
        if k % 2:
            q += a if (k // 2) % 2 == 0 else -a
        else:
            p += -a if (k // 2) % 2 else a
        if mag < _EPS * 0.25:
            chi = x - (0.5 * nu + 0.25) * math.pi
            return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))
        prev = mag
    return None


def bessel_j(nu: float, x: float, config: BesselConfig | None = None) -> float:
    """Bessel function of the first kind ``J_nu(x)`` for real order and ``x >= 0``.

    >>> bessel_j(0, 0)
    1.0
    """
    cfg = config or DEFAULT_CONFIG
    nu = float(nu)
    x = float(x)
    if not (math.isfinite(nu) and math.isfinite(x)) or x < 0:
        raise ValueError("bessel_j needs finite nu and x >= 0")
    if _is_int(nu) and nu < 0:
        n = int(-nu)
        return (-1.0) ** n * bessel_j(float(n), x, cfg)
    if x >= cfg.series_cutoff_x:
        val = _hankel(nu, x, cfg)
        if val is not None:
            return val
    return float(bessel_j_ladder(nu, 1, x, cfg)[0])


def bessel_j_derivative(nu: float, x: float, config: BesselConfig | None = None) -> float:
    """``dJ_nu/dx = (J_{nu-1}(x) - J_{nu+1}(x)) / 2`` for ``x > 0``."""
    if not x > 0:
        raise ValueError("bessel_j_derivative needs x > 0")
    return 0.5 * (bessel_j(nu - 1.0, x, config) - bessel_j(nu + 1.0, x, config))
