"""Command-line front end.

Subcommands::

    state        density and current on a grid (CSV, JSON or PPM)
    xsection     differential cross section over an angle range
    sigma-map    cross-section factor over the (alpha, beta) plane
    oracle-diff  partial-wave series against direct contour quadrature
    verify       invariant suite

Exit status: 0 success, 1 invalid input, 2 numerical check failed, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings

import numpy as np

from . import __version__
from .config import ConfigError, GridSpec, JobConfig, load_config
from .contour import ContourError, QuadratureError, contour_terms
from .heatmap import ppm_bytes
from .models import TruncationWarning, partial_wave_term
from .observables import CrossSectionQuery, cross_section, sigma_factor, sigma_map
from .sampling import evaluate_grid
from .verify import run_suite

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3
ORACLE_TOL = 1e-8


class NumericalFailure(RuntimeError):
    pass


def _pair(text: str) -> tuple[float, float]:
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}") from exc
    return a, b


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad number list {text!r}") from exc


def _add_job_flags(p: argparse.ArgumentParser) -> None:
    # defaults are None so that unset flags fall through to --config
    p.add_argument("--config", help="JSON job file; explicit flags override it")
    p.add_argument("--model", choices=["su2", "su3", "u2"])
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--band", type=int, help="band index s (+1 or -1 for u2)")
    p.add_argument("--k", type=float, help="wave number in units of 1/d0")
    p.add_argument("--theta", type=float, help="incidence angle in radians")
    p.add_argument("--coeffs", help="comma-separated complex weights a+bi; rescaled to unit norm")
    p.add_argument("--digits", type=int, help="significant digits in text output")


def _add_grid_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid", help="x0,x1,y0,y1,nx,ny (default -10,10,-10,10,201,201)")
    p.add_argument("--rmin", type=float, help="guard radius; points inside are NaN")
    trunc = p.add_mutually_exclusive_group()
    trunc.add_argument("--mmax", type=int, help="fixed partial-wave window |m| <= MMAX")
    trunc.add_argument("--auto-trunc", action="store_true", help="size the window from the grid (default)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nonabelian-ab", description="Non-Abelian Aharonov-Bohm scattering states")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("state", help="density and current on a grid")
    _add_job_flags(p)
    _add_grid_flags(p)
    p.add_argument("--out", default="-", help="output file ('-' for stdout)")
    p.add_argument("--format", choices=["csv", "json", "ppm"], default="csv")
    p.add_argument("--image", help="also write a density heatmap (PPM) here")
    p.add_argument("--workers", type=int, default=1, help="threads for row evaluation")

    p = sub.add_parser("xsection", help="differential cross section sigma(phi)")
    _add_job_flags(p)
    p.add_argument("--phi-range", type=_pair, help="phi0,phi1 in radians; must not contain pi")
    p.add_argument("--samples", type=int)
    p.add_argument("--out", default="-")

    p = sub.add_parser("sigma-map", help="cross-section factor over (alpha, beta)")
    _add_job_flags(p)
    p.add_argument("--alpha-range", type=_pair)
    p.add_argument("--beta-range", type=_pair)
    p.add_argument("--resolution", type=int)
    p.add_argument("--out", default="-", help="CSV matrix, rows = beta, columns = alpha")
    p.add_argument("--image", help="PPM heatmap path (default: next to --out)")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("oracle-diff", help="series terms against contour quadrature")
    _add_job_flags(p)
    p.add_argument("--m-window", type=int, default=12, help="compare |m| <= M")
    p.add_argument("--kr", type=_floats, default=[0.5, 1.0, 5.0, 15.0])
    p.add_argument("--phis", type=_floats, default=[0.0, math.pi / 3.0, 2.8])
    p.add_argument("--out", default="-")

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--bessel-bias", type=float, default=0.0, help=argparse.SUPPRESS)
    return ap


def job_from_args(args) -> JobConfig:
    base = load_config(args.config) if getattr(args, "config", None) else JobConfig()
    changes = {}
    simple = {"model": "model", "alpha": "alpha", "beta": "beta", "band": "band", "k": "k",
              "theta": "theta", "digits": "digits", "samples": "samples", "resolution": "resolution",
              "phi_range": "phi_range", "alpha_range": "alpha_range", "beta_range": "beta_range"}
    for attr, key in simple.items():
        val = getattr(args, attr, None)
        if val is not None:
            changes[key] = val
    if getattr(args, "coeffs", None) is not None:
        changes["coeffs"] = (args.coeffs,)
    model = changes.get("model", base.model)
    if "model" in changes and changes["model"] != base.model:
        # switching model invalidates model-specific settings from the file
        changes.setdefault("coeffs", None)
        changes.setdefault("band", 1)
        if model == "su2":
            changes.setdefault("beta", 0.0)
    grid = base.grid
    if getattr(args, "grid", None):
        grid = GridSpec.parse(args.grid, grid.r_min)
    if getattr(args, "rmin", None) is not None:
        grid = GridSpec(grid.x_min, grid.x_max, grid.y_min, grid.y_max, grid.nx, grid.ny, args.rmin)
    changes["grid"] = grid
    if getattr(args, "mmax", None) is not None:
        changes["m_max"] = args.mmax
    elif getattr(args, "auto_trunc", False):
        changes["m_max"] = None
    return base.updated(**changes)


def _fmt(v: float, digits: int) -> str:
    if not math.isfinite(v):
        return "nan"
    return f"{v + 0.0:.{digits}g}"


def _round(v: float, digits: int):
    return None if not math.isfinite(v) else float(f"{v + 0.0:.{digits}g}")


def _emit(path: str, data, binary: bool = False) -> None:
    if path == "-":
        if binary:
            sys.stdout.buffer.write(data)
        else:
            sys.stdout.write(data)
        return
    with open(path, "wb" if binary else "w", newline="" if not binary else None) as fh:
        fh.write(data)


def render_state(job: JobConfig, fmt: str, workers: int = 1):
    """Text or bytes of a ``state`` job, plus the density array."""
    sp = job.superposition()
    xs, ys, rho, jx, jy = evaluate_grid(sp, job.grid, job.m_max, workers)
    if fmt == "ppm":
        return ppm_bytes(rho, 0.0), rho
    d = job.digits
    if fmt == "csv":
        lines = ["x,y,rho,jx,jy"]
        for iy, y in enumerate(ys):
            for ix, x in enumerate(xs):
                lines.append(",".join(_fmt(v, d) for v in (x, y, rho[iy, ix], jx[iy, ix], jy[iy, ix])))
        return "\n".join(lines) + "\n", rho
    rows = [
        [_round(v, d) for v in (x, y, rho[iy, ix], jx[iy, ix], jy[iy, ix])]
        for iy, y in enumerate(ys)
        for ix, x in enumerate(xs)
    ]
    env = {"config": job.to_dict(), "columns": ["x", "y", "rho", "jx", "jy"], "rows": rows}
    return json.dumps(env, sort_keys=True) + "\n", rho


def cmd_state(args) -> int:
    job = job_from_args(args)
    if args.format == "ppm" and args.out == "-" and sys.stdout.isatty():
        raise ConfigError("refusing to write binary PPM to a terminal; pass --out")
    if args.workers < 1:
        raise ConfigError("--workers must be >= 1")
    data, rho = render_state(job, args.format, args.workers)
    _emit(args.out, data, binary=args.format == "ppm")
    if args.image:
        _emit(args.image, ppm_bytes(rho, 0.0), binary=True)
    return EXIT_OK


def _contains_forward(lo: float, hi: float) -> bool:
    n = math.ceil((lo - math.pi) / (2.0 * math.pi))
    return math.pi + 2.0 * math.pi * n <= hi


def cmd_xsection(args) -> int:
    job = job_from_args(args)
    lo, hi = job.phi_range
    if not lo < hi:
        raise ConfigError("phi range must be increasing")
    if _contains_forward(lo, hi):
        raise ConfigError("phi range crosses the forward direction pi where sigma diverges")
    sig = sigma_factor(job.flux(), job.coefficient_vector())
    lines = ["phi,sigma"]
    for phi in np.linspace(lo, hi, job.samples):
        val = cross_section(CrossSectionQuery(job.k, sig, float(phi)))
        lines.append(f"{_fmt(float(phi), job.digits)},{_fmt(val, job.digits)}")
    _emit(args.out, "\n".join(lines) + "\n")
    return EXIT_OK


def render_sigma_map(job: JobConfig, workers: int = 1):
    grid = sigma_map(job.model_id.group, job.coefficient_vector(), job.alpha_range, job.beta_range, job.resolution, workers)
    text = "\n".join(",".join(_fmt(v, job.digits) for v in row) for row in grid) + "\n"
    return text, grid


def cmd_sigma_map(args) -> int:
    job = job_from_args(args)
    text, grid = render_sigma_map(job, args.workers)
    _emit(args.out, text)
    image = args.image
    if image is None and args.out != "-":
        image = args.out.rsplit(".", 1)[0] + ".ppm" if "." in args.out else args.out + ".ppm"
    if image:
        _emit(image, ppm_bytes(grid, 0.0, 1.0), binary=True)
    return EXIT_OK


def oracle_table(job: JobConfig, m_window: int, krs, phis):
    """Rows ``(m, kr, phi, diff)``, the max-norm difference over channels, and the global max."""
    if m_window < 0:
        raise ConfigError("m window must be >= 0")
    if any(not kr > 0 for kr in krs):
        raise ConfigError("sample radii must be positive")
    flux = job.flux()
    ms = np.arange(-m_window, m_window + 1)
    diffs = np.zeros((ms.size, len(krs), len(phis)))
    for mode in job.modes():
        for i, kr in enumerate(krs):
            r = kr / job.k
            for j, phi in enumerate(phis):
                c = contour_terms(mode, flux, ms, r, phi)
                ser = np.array([partial_wave_term(mode, flux, int(m), r, phi) for m in ms])
                diffs[:, i, j] = np.maximum(diffs[:, i, j], np.abs(c - ser).max(axis=1))
    rows = [(int(m), kr, phi, float(diffs[a, i, j]))
            for a, m in enumerate(ms) for i, kr in enumerate(krs) for j, phi in enumerate(phis)]
    return rows, float(diffs.max())


def cmd_oracle_diff(args) -> int:
    job = job_from_args(args)
    try:
        rows, worst = oracle_table(job, args.m_window, args.kr, args.phis)
    except (ContourError, QuadratureError) as exc:
        raise NumericalFailure(f"contour oracle did not converge: {exc}") from exc
    lines = ["m,kr,phi,max_abs_diff"] + [f"{m},{kr:.6g},{phi:.6g},{d:.3e}" for m, kr, phi, d in rows]
    _emit(args.out, "\n".join(lines) + "\n")
    ok = worst <= ORACLE_TOL
    print(f"{'PASS' if ok else 'FAIL'}  global max difference {worst:.3e} (tolerance {ORACLE_TOL:.0e})", file=sys.stderr)
    return EXIT_OK if ok else EXIT_NUMERIC


def cmd_verify(args) -> int:
    results = run_suite(bessel_bias=args.bessel_bias)
    for res in results:
        print(res.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} properties passed")
    return EXIT_OK if failed == 0 else EXIT_NUMERIC


COMMANDS = {
    "state": cmd_state,
    "xsection": cmd_xsection,
    "sigma-map": cmd_sigma_map,
    "oracle-diff": cmd_oracle_diff,
    "verify": cmd_verify,
}


_VALUE_FLAGS = {"--grid", "--phi-range", "--alpha-range", "--beta-range", "--kr", "--phis", "--coeffs"}


def _glue_values(argv: list[str]) -> list[str]:
    """Attach list values such as ``-5,5,...`` to their flag; argparse would read them as options."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") and argv[i + 1][1:2] in "0123456789.":
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _glue_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse uses 2 for usage errors; ours is 1
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default", TruncationWarning)
            return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
