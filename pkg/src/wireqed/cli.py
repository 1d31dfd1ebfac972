"""Command-line interface.

Subcommands:
    sweep       distance sweep of rates and decomposed shifts (CSV/JSON)
    dispersion  sampled plasmon spectrum Im G~_rr(kz) with Lorentzian fit
    validate    built-in closed-form validation suites
    point       full report for a single separation

Exit codes: 0 success, 2 configuration error, 3 convergence failure,
4 validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .config import RunConfig, SCHEMA_TAG, load_config
from .emitters import (EmitterPair, PairInteraction, analytic_approximations,
                       dicke_levels, fit_plasmon_lorentzian, fit_two_lorentzian,
                       markov_diagnostic)
from .errors import ConfigError, ConvergenceError, FitError, WireQEDError
from .frequencies import OMEGA_A, SpectralPoint
from .green_wire import SpectralEvaluator, WireGeometry, settle_azimuthal_order
from .validate import run_all

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3
EXIT_VALIDATION = 4


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    return format(float(x), ".17g")


def _load(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig().validate()
    if args.tol is not None:
        cfg.tol_wire = float(args.tol)
    if getattr(args, "out", None):
        cfg.output_path = args.out
    if getattr(args, "format", None):
        cfg.output_format = args.format
    return cfg.validate()


def _geometry(cfg: RunConfig) -> WireGeometry:
    return WireGeometry(radius=cfg.radius, model=cfg.drude_model())


def _pair(cfg: RunConfig, dz: float) -> EmitterPair:
    return EmitterPair((cfg.rho_1, 0.0, 0.0), (cfg.rho_2, 0.0, dz),
                       tuple(cfg.dipole_1), tuple(cfg.dipole_2))


def _mapper(threads: int):
    if threads <= 1:
        return None
    pool = ProcessPoolExecutor(max_workers=threads)
    return pool, (lambda fn, xs: list(pool.map(fn, xs)))


def _emit(text: str, path):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_sweep(args) -> int:
    cfg = _load(args)
    geom = _geometry(cfg)
    dzs = cfg.sweep_points()

    pool_map = _mapper(args.threads)
    parallel = pool_map[1] if pool_map else None
    try:
        engine = PairInteraction(geom, _pair(cfg, dzs[0]), tol=cfg.tol_wire,
                                 nmax=cfg.azimuthal_order,
                                 dz_refs=(0.0, dzs[0], 0.5 * (dzs[0] + dzs[-1]), dzs[-1]),
                                 parallel=parallel)
        try:
            fit = fit_plasmon_lorentzian(geom, cfg.rho_1, OMEGA_A,
                                         nmax=engine.nmax)
        except FitError:
            fit = None
        rows = [engine.at(dz) for dz in dzs]
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        print(f"diagnostics: {exc.diagnostics}", file=sys.stderr)
        return EXIT_CONVERGENCE
    finally:
        if pool_map:
            pool_map[0].shutdown()

    header = ["dz", "gamma11_over_gamma0", "gamma12_over_gamma11",
              "shift12_total_over_gamma11", "shift12_resonant_over_gamma11",
              "shift12_integral_over_gamma11", "gamma12_appr_over_gamma11_appr",
              "shift12_appr_over_gamma11_appr", "converged"]
    meta = {
        "schema": "wireqed-sweep/1",
        "radius": cfg.radius,
        "rho_1": cfg.rho_1,
        "rho_2": cfg.rho_2,
        "shift11_total_over_gamma0": rows[0].shift11_total,
        "gamma11_over_gamma0": rows[0].gamma11,
    }
    if fit is not None:
        meta.update({"fit_amplitude": fit.amplitude_a, "fit_width": fit.width_gamma,
                     "fit_center_kz_pl": fit.center_kz_pl,
                     "fit_residual": fit.fit_residual})

    table = []
    for dz, r in zip(dzs, rows):
        if fit is not None:
            ap = analytic_approximations(fit, dz)
            appr = (ap.gamma12_over_gamma11, ap.shift12_over_gamma11)
        else:
            appr = (float("nan"), float("nan"))
        table.append([dz, r.gamma11, r.gamma12_over_gamma11,
                      r.shift12_total_over_gamma11, r.shift12_resonant_over_gamma11,
                      r.shift12_integral_over_gamma11, appr[0], appr[1], r.converged])

    if not all(row[-1] for row in table):
        bad = [f"dz={row[0]:g}" for row in table if not row[-1]]
        print(f"unconverged sweep rows: {', '.join(bad)}", file=sys.stderr)
        return EXIT_CONVERGENCE

    if cfg.output_format == "csv":
        lines = [f"# {k} = {_fmt(v) if not isinstance(v, str) else v}"
                 for k, v in sorted(meta.items())]
        lines.append(",".join(header))
        for row in table:
            lines.append(",".join(_fmt(v) for v in row))
        _emit("\n".join(lines) + "\n", cfg.output_path)
    else:
        payload = {"meta": meta,
                   "rows": [dict(zip(header, row)) for row in table]}
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", cfg.output_path)
    return EXIT_OK


def cmd_dispersion(args) -> int:
    cfg = _load(args)
    omega = args.omega_over_omega_a * OMEGA_A

    if args.synthetic:
        amp, width, center = (float(x) for x in args.synthetic.split(","))
        kz = np.linspace(0.2, 4.0 * center, 600)
        vals = (amp / (1 + (kz - center) ** 2 / width**2)
                + amp / (1 + (kz + center) ** 2 / width**2))
        fit = fit_two_lorentzian(kz, vals, (0.7 * amp, 2.0 * width, 1.2 * center))
        out = {"synthetic": {"amplitude": amp, "width": width, "center": center},
               "fit": {"amplitude": fit.amplitude_a, "width": fit.width_gamma,
                       "center_kz_pl": fit.center_kz_pl, "residual": fit.fit_residual}}
        _emit(json.dumps(out, indent=2, sort_keys=True) + "\n", cfg.output_path)
        return EXIT_OK

    geom = _geometry(cfg)
    try:
        fit = fit_plasmon_lorentzian(geom, cfg.rho_1, omega, nmax=cfg.azimuthal_order)
    except FitError as exc:
        print(f"fit failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE

    nmax, _ = settle_azimuthal_order(geom, SpectralPoint.real_axis(omega),
                                     cfg.rho_1, cfg.rho_1, 0.0,
                                     nmax=cfg.azimuthal_order or 15)
    ev = SpectralEvaluator(geom, SpectralPoint.real_axis(omega), cfg.rho_1,
                           cfg.rho_1, 0.0, nmax=nmax)
    lo = 1.0001 * omega
    hi = 4.0 * fit.center_kz_pl
    kz = np.unique(np.concatenate([
        np.linspace(lo, hi, args.n_points),
        fit.center_kz_pl + fit.width_gamma * np.linspace(-10, 10, args.n_points // 2),
    ]))
    kz = kz[(kz >= lo) & (kz <= hi)]
    vals = ev(kz)[:, 0, 0, 0].imag

    meta = {"omega": omega, "fit_amplitude": fit.amplitude_a,
            "fit_width": fit.width_gamma, "fit_center_kz_pl": fit.center_kz_pl,
            "fit_residual": fit.fit_residual}
    if cfg.output_format == "csv":
        lines = [f"# {k} = {_fmt(v)}" for k, v in sorted(meta.items())]
        lines.append("kz,im_g_rr")
        for k, v in zip(kz, vals):
            lines.append(f"{_fmt(k)},{_fmt(v)}")
        _emit("\n".join(lines) + "\n", cfg.output_path)
    else:
        payload = {"meta": meta, "kz": [float(k) for k in kz],
                   "im_g_rr": [float(v) for v in vals]}
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", cfg.output_path)
    return EXIT_OK


def cmd_validate(args) -> int:
    cfg = _load(args)
    suites = run_all(flip_resonant_sign=args.inject_sign_flip,
                     gamma_p_over_omega_p=cfg.gamma_p_over_omega_p)
    for suite in suites:
        print(suite.line())
    return EXIT_OK if all(s.passed for s in suites) else EXIT_VALIDATION


def cmd_point(args) -> int:
    cfg = _load(args)
    geom = _geometry(cfg)
    try:
        engine = PairInteraction(geom, _pair(cfg, args.dz), tol=cfg.tol_wire,
                                 nmax=cfg.azimuthal_order,
                                 dz_refs=(0.0, args.dz))
        result = engine.at(args.dz)
        fit = None
        try:
            fit = fit_plasmon_lorentzian(geom, cfg.rho_1, OMEGA_A, nmax=engine.nmax)
        except FitError:
            pass
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE

    levels = dicke_levels(result)
    markov = markov_diagnostic(result, args.dz, cfg.gamma0_abs)
    out = {
        "dz": args.dz,
        "gamma11_over_gamma0": result.gamma11,
        "gamma12_over_gamma0": result.gamma12,
        "gamma12_over_gamma11": result.gamma12_over_gamma11,
        "shift12": {"resonant": result.shift12_resonant,
                    "integral": result.shift12_integral,
                    "total": result.shift12_total,
                    "total_over_gamma11": result.shift12_total_over_gamma11},
        "shift11": {"resonant": result.shift11_resonant,
                    "integral": result.shift11_integral,
                    "total": result.shift11_total},
        "dicke": {"symmetric_decay": levels.symmetric_decay,
                  "symmetric_shift": levels.symmetric_shift,
                  "antisymmetric_decay": levels.antisymmetric_decay,
                  "antisymmetric_shift": levels.antisymmetric_shift,
                  "superradiance_factor": levels.superradiance_factor},
        "markov": {"bandwidth": markov.bandwidth, "max_rate": markov.max_rate,
                   "warn": markov.warn},
        "converged": result.converged,
    }
    if fit is not None:
        ap = analytic_approximations(fit, args.dz)
        out["approximation"] = {
            "gamma11_over_gamma0": ap.gamma11_over_gamma0,
            "gamma12_over_gamma11": ap.gamma12_over_gamma11,
            "shift12_over_gamma11": ap.shift12_over_gamma11,
        }
    _emit(json.dumps(out, indent=2, sort_keys=True) + "\n", cfg.output_path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wireqed", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help=f"JSON config file (schema {SCHEMA_TAG})")
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--format", choices=["csv", "json"], help="output format")
        sp.add_argument("--tol", type=float, help="wire quadrature tolerance")

    sp = sub.add_parser("sweep", help="distance sweep of rates and shifts")
    common(sp)
    sp.add_argument("--threads", type=int, default=1,
                    help="parallel workers for spectral-table construction")
    sp.set_defaults(fn=cmd_sweep)

    sp = sub.add_parser("dispersion", help="plasmon spectrum and Lorentzian fit")
    common(sp)
    sp.add_argument("--omega-over-omega-a", type=float, default=1.0)
    sp.add_argument("--n-points", type=int, default=300)
    sp.add_argument("--synthetic", metavar="A,GAMMA,KZPL",
                    help="fit a synthetic two-Lorentzian model instead of the wire")
    sp.set_defaults(fn=cmd_dispersion)

    sp = sub.add_parser("validate", help="run built-in validation suites")
    common(sp)
    sp.add_argument("--inject-sign-flip", action="store_true",
                    help=argparse.SUPPRESS)  # mutation hook for tests
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("point", help="full report at one separation")
    common(sp)
    sp.add_argument("--dz", type=float, required=True)
    sp.set_defaults(fn=cmd_point)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except WireQEDError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
