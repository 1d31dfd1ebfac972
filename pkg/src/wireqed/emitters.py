"""Decay rates, level shifts, plasmon-resonance fits and collective structure
for a pair of two-level emitters near the wire.

Everything dimensionful cancels against the free-space rate: with c = 1 and
lengths in vacuum wavelengths,

    Gamma0(omega)          = omega^3 / (3 pi)            (reduced units)
    Gamma_mn / Gamma0      = (6 pi / omega) Im[d1 . G(r_m, r_n, omega) . d2]
    shift_resonant/Gamma0  = (3 pi / omega) Re[d1 . Gmed(omega) . d2]
    shift_integral/Gamma0  = (3 / omega^3) int dk k^2 Re[d1 . Gmed(ik) . d2]
                                               * omega / (k^2 + omega^2)

Rates use the full tensor (vacuum + scattered); shifts use the scattered
part only, which keeps them finite without any ultraviolet regulator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .errors import DomainError, FitError
from .frequencies import OMEGA_A, SpectralPoint
from .green_vacuum import green_vacuum_cyl, green_vacuum_im_coincident
from .green_wire import (DEFAULT_NMAX, SpectralEvaluator, WireGeometry,
                         WireSpectralTable, _auto_pole_hint, _k_window,
                         plasmon_wavenumber, settle_azimuthal_order)
from .quadrature import _GL_X, _PROJ

_COINCIDENT = 1e-12


@dataclass(frozen=True)
class EmitterPair:
    """Two emitters in cylindrical coordinates with unit dipole orientations
    given in the local (rho, phi, z) basis at each position."""

    position_1: tuple
    position_2: tuple
    dipole_1: tuple = (1.0, 0.0, 0.0)
    dipole_2: tuple = (1.0, 0.0, 0.0)
    omega_a: float = OMEGA_A

    def __post_init__(self):
        for d in (self.dipole_1, self.dipole_2):
            if abs(np.linalg.norm(np.asarray(d, float)) - 1.0) > 1e-12:
                raise DomainError(f"dipole orientation {d} is not unit-norm to 1e-12")
        if self.omega_a <= 0:
            raise DomainError("transition frequency must be positive")
        if min(self.position_1[0], self.position_2[0]) <= 0:
            raise DomainError("emitter radial coordinates must be positive")

    def with_dz(self, dz: float) -> "EmitterPair":
        r1 = self.position_1
        r2 = (self.position_2[0], self.position_2[1], r1[2] + float(dz))
        return EmitterPair(r1, r2, self.dipole_1, self.dipole_2, self.omega_a)

    @property
    def dz(self) -> float:
        return self.position_2[2] - self.position_1[2]


@dataclass
class RateShiftResult:
    """Rates and decomposed shifts, all scaled by the free-space rate.

    shift*_total = shift*_resonant + shift*_integral holds exactly by
    construction; shift11_* is the wire-induced single-emitter (Lamb) part.
    """

    gamma11: float
    gamma12: float
    shift12_resonant: float
    shift12_integral: float
    shift11_resonant: float
    shift11_integral: float
    converged: bool = True
    diagnostics: dict = field(default_factory=dict)

    @property
    def shift12_total(self):
        return self.shift12_resonant + self.shift12_integral

    @property
    def shift11_total(self):
        return self.shift11_resonant + self.shift11_integral

    @property
    def gamma12_over_gamma11(self):
        return self.gamma12 / self.gamma11

    @property
    def shift12_total_over_gamma11(self):
        return self.shift12_total / self.gamma11

    @property
    def shift12_resonant_over_gamma11(self):
        return self.shift12_resonant / self.gamma11

    @property
    def shift12_integral_over_gamma11(self):
        return self.shift12_integral / self.gamma11


@dataclass
class LorentzianFit:
    """Symmetric two-Lorentzian description of the plasmon peak in the
    radial spectral density: amplitude, half-width and center (+/- mirror)."""

    amplitude_a: float
    width_gamma: float
    center_kz_pl: float
    fit_residual: float


def _contract(tensor, d1, d2):
    return complex(np.asarray(d1, float) @ np.asarray(tensor, complex) @ np.asarray(d2, float))


def _same_site(p1, p2):
    return (abs(p1[0] - p2[0]) < _COINCIDENT and abs(p1[1] - p2[1]) < _COINCIDENT
            and abs(p1[2] - p2[2]) < _COINCIDENT)


def _same_column(p1, p2):
    return abs(p1[0] - p2[0]) < _COINCIDENT and abs(p1[1] - p2[1]) < _COINCIDENT


class PairInteraction:
    """Shared spectral tables for one geometry; cheap per-separation results.

    Building this object performs every expensive wavenumber integration:
    a real-frequency table at omega_a plus one table per imaginary-frequency
    node.  ``at(dz)`` then produces a full RateShiftResult through analytic
    phase moments only, which is what makes dense distance sweeps and
    oscillation-phase measurements affordable.
    """

    def __init__(self, geom: WireGeometry, pair: EmitterPair, *, tol=1e-6,
                 nmax=None, kappa_budget=420, dz_refs=(0.0, 0.5, 2.0, 4.0),
                 parallel=None):
        if min(pair.position_1[0], pair.position_2[0]) <= geom.radius:
            raise DomainError("emitters must sit outside the wire")
        if not _same_column(pair.position_1, pair.position_2):
            raise DomainError("pair tables require emitters on one axial line; "
                              "use wire_green directly for general geometry")
        self.geom = geom
        self.pair = pair
        self.tol = float(tol)
        w = pair.omega_a
        self.omega_a = w
        rho = pair.position_1[0]
        self.rho = rho

        point = SpectralPoint.real_axis(w)
        if nmax is None:
            nmax, _ = settle_azimuthal_order(geom, point, rho, rho, 0.0)
        self.nmax = nmax
        hint = _auto_pole_hint(geom, point)
        k_start, gap, hint = _k_window(geom, point, rho, rho, hint)
        self.pole_hint = hint
        self.gap = gap

        ev = SpectralEvaluator(geom, point, rho, rho, 0.0, nmax=nmax)
        self.table_res = WireSpectralTable(ev, tol=tol, pole_hint=hint,
                                           k_start=k_start, tail_scale=gap,
                                           budget=60000, phase_ref=0.0)
        self._real_ok = self.table_res.panels_ok and ev.tail_ratio <= 1e-10
        self._res_coincident = None

        self._kappa_engine = _ImagAxisEngine(
            geom, rho, w, tol=tol, nmax=nmax, gap=gap,
            dz_refs=tuple(dz_refs), table_budget=kappa_budget, parallel=parallel)

    # -- pieces ---------------------------------------------------------

    def medium_tensor_resonant(self, dz):
        """G^med(r1, r2, omega_a) in cylindrical components, plus error."""
        if dz == 0.0:
            if self._res_coincident is None:
                self._res_coincident = self.table_res.integrate(0.0)
            return self._res_coincident
        return self.table_res.integrate(dz)

    def at(self, dz: float) -> RateShiftResult:
        w = self.omega_a
        pair = self.pair
        d1 = np.asarray(pair.dipole_1, float)
        d2 = np.asarray(pair.dipole_2, float)

        gmed_12, err12 = self.medium_tensor_resonant(dz)
        gmed_11, err11 = self.medium_tensor_resonant(0.0)

        gamma11 = 1.0 + (6.0 * math.pi / w) * _contract(gmed_11, d1, d1).imag
        if abs(dz) < _COINCIDENT:
            gvac_im = green_vacuum_im_coincident(w) * float(d1 @ d2)
        else:
            p1 = (self.rho, 0.0, 0.0)
            p2 = (self.rho, 0.0, -dz)  # tensor taken from r1 toward r2
            gvac_im = _contract(green_vacuum_cyl(p1, p2, w).value, d1, d2).imag
        gamma12 = (6.0 * math.pi / w) * (gvac_im + _contract(gmed_12, d1, d2).imag)

        shift12_res = (3.0 * math.pi / w) * _contract(gmed_12, d1, d2).real
        shift11_res = (3.0 * math.pi / w) * _contract(gmed_11, d1, d1).real

        i12, i11, ierr, iconv = self._kappa_engine.integrals(dz, d1, d2)
        shift12_int = (3.0 / w**3) * i12
        shift11_int = (3.0 / w**3) * i11

        scale = max(1.0, abs(gamma11) * w / (6.0 * math.pi))
        res_ok = (err12 + err11) <= 100.0 * self.tol * scale
        return RateShiftResult(
            gamma11=gamma11, gamma12=gamma12,
            shift12_resonant=shift12_res, shift12_integral=shift12_int,
            shift11_resonant=shift11_res, shift11_integral=shift11_int,
            converged=bool(self._real_ok and res_ok and iconv),
            diagnostics={
                "resonant_tensor_err": err12 + err11,
                "kappa_err": ierr,
                "kappa_nodes": self._kappa_engine.n_nodes,
                "nmax": self.nmax,
            },
        )


def _kappa_table_job(job):
    """Build one frozen imaginary-frequency spectral table.

    Module-level with picklable arguments and result, so sweep drivers can
    run it in worker processes; identical arithmetic regardless of worker
    count keeps outputs bit-reproducible.
    """
    geom, rho, kappa, tol, nmax, gap = job
    point = SpectralPoint.imaginary_axis(kappa)
    ev = SpectralEvaluator(geom, point, rho, rho, 0.0, nmax=nmax)
    k_start, _, _ = _k_window(geom, point, rho, rho, None)
    table = WireSpectralTable(ev, tol=tol, k_start=k_start, tail_scale=gap,
                              budget=30000, phase_ref=0.0)
    return table.frozen()


class _ImagAxisEngine:
    """t-substituted imaginary-axis integral with one kz table per node.

    Panels live in t = kappa / (omega_a + kappa); each Gauss node carries a
    frozen WireSpectralTable at i*kappa(t).  Refinement is driven by the
    Legendre-coefficient decay of the weighted tensor integrand at a few
    reference separations, which bounds the error for every separation.
    """

    def __init__(self, geom, rho, omega_a, *, tol, nmax, gap, dz_refs,
                 table_budget=420, parallel=None):
        self.geom = geom
        self.rho = rho
        self.w = omega_a
        self.tol = tol
        self.nmax = nmax
        self.gap = gap
        kap_cut = max(6.0 * omega_a, 20.0 / max(gap, 1e-6))
        self.t_cut = kap_cut / (omega_a + kap_cut)
        self.table_budget = table_budget
        self.n_nodes = 0
        self._parallel = parallel
        self.panels = []
        self.tail_bound_factor = math.exp(-kap_cut * gap)

        self._coincident = None
        seeds = [0.0, 2e-3, 1e-2, 0.04, 0.12, 0.25, 0.45, 0.65, 0.82, 0.93]
        breaks = sorted({t for t in seeds if t < self.t_cut} | {self.t_cut})
        for a, b in zip(breaks[:-1], breaks[1:]):
            self.panels.append(self._build_panel(a, b))
        self._refine(dz_refs)

    def _build_tables(self, kappas):
        jobs = [(self.geom, self.rho, float(k), self.tol, self.nmax, self.gap)
                for k in kappas]
        if self._parallel is not None:
            return list(self._parallel(_kappa_table_job, jobs))
        return [_kappa_table_job(job) for job in jobs]

    def _build_panel(self, a, b):
        half, mid = 0.5 * (b - a), 0.5 * (b + a)
        t = mid + half * _GL_X
        kap = self.w * t / (1.0 - t)
        weight = self.w**2 * t**2 / ((1.0 - t) ** 2 * (t**2 + (1.0 - t) ** 2))
        tables = self._build_tables(kap)
        self.n_nodes += len(kap)
        return {"a": a, "b": b, "half": half, "weight": weight, "tables": tables}

    def _tensor_values(self, panel, dz):
        vals = np.empty((len(panel["tables"]), 9))
        for i, tab in enumerate(panel["tables"]):
            ten, _ = tab.integrate(dz)
            vals[i] = panel["weight"][i] * ten.real.reshape(9)
        return vals

    def _panel_coeffs(self, panel, dz):
        return _PROJ @ self._tensor_values(panel, dz)

    def _panel_err(self, panel, dz):
        coef = self._panel_coeffs(panel, dz)
        return 4.0 * panel["half"] * float(np.abs(coef[-3:]).sum(axis=0).max())

    def _refine(self, dz_refs):
        while self.n_nodes + 32 <= self.table_budget * 16:
            errs = [max(self._panel_err(p, dz) for dz in dz_refs) for p in self.panels]
            scale = max(1.0, max(float(np.abs(self.integral_tensor(dz)[0]).max())
                                 for dz in dz_refs))
            if sum(errs) <= 0.5 * self.tol * scale:
                break
            i = int(np.argmax(errs))
            p = self.panels.pop(i)
            m = 0.5 * (p["a"] + p["b"])
            self.panels.append(self._build_panel(p["a"], m))
            self.panels.append(self._build_panel(m, p["b"]))
            self._coincident = None

    def integral_tensor(self, dz):
        if dz == 0.0 and self._coincident is not None:
            return self._coincident
        total = np.zeros(9)
        err = 0.0
        for p in self.panels:
            coef = self._panel_coeffs(p, dz)
            total = total + 2.0 * p["half"] * coef[0]
            err += 4.0 * p["half"] * float(np.abs(coef[-3:]).sum(axis=0).max())
        out = (total.reshape(3, 3), err)
        if dz == 0.0:
            self._coincident = out
        return out

    def integrals(self, dz, d1, d2):
        t12, e12 = self.integral_tensor(dz)
        t11, e11 = self.integral_tensor(0.0)
        i12 = float(d1 @ t12 @ d2)
        i11 = float(d1 @ t11 @ d1)
        err = e12 + e11
        scale = max(1.0, abs(i12), abs(i11))
        return i12, i11, err, err <= 100.0 * self.tol * scale


def decay_rates(geom: WireGeometry, pair: EmitterPair, *, tol=1e-6, nmax=None):
    """(gamma11, gamma12) scaled by the free-space rate.

    Uses the full tensor, vacuum plus scattered part, at the transition
    frequency.  Coincident positions reproduce gamma12 = gamma11 exactly.
    """
    w = pair.omega_a
    p1, p2 = pair.position_1, pair.position_2
    d1 = np.asarray(pair.dipole_1, float)
    d2 = np.asarray(pair.dipole_2, float)
    point = SpectralPoint.real_axis(w)
    from .green_wire import wire_green

    g11 = wire_green(geom, p1, p1, point, tol=tol,
                     nmax=nmax or DEFAULT_NMAX)
    gamma11 = 1.0 + (6.0 * math.pi / w) * _contract(g11.value, d1, d1).imag

    if _same_site(p1, p2):
        if np.allclose(d1, d2, atol=1e-14):
            return gamma11, gamma11
        gvac_im = green_vacuum_im_coincident(w) * float(d1 @ d2)
        gmed = g11.value
    else:
        gvac_im = _contract(green_vacuum_cyl(p1, p2, w).value, d1, d2).imag
        gmed = wire_green(geom, p1, p2, point, tol=tol,
                          nmax=nmax or DEFAULT_NMAX).value
    gamma12 = (6.0 * math.pi / w) * (gvac_im + _contract(gmed, d1, d2).imag)
    return gamma11, gamma12


def dipole_shift(geom: WireGeometry, pair: EmitterPair, *, tol=1e-6,
                 nmax=None, kappa_budget=420) -> RateShiftResult:
    """Full decomposed result (rates, dipole-dipole shift, wire Lamb shift)
    for one emitter pair; see PairInteraction for sweeping separations."""
    engine = PairInteraction(geom, pair, tol=tol, nmax=nmax,
                             kappa_budget=kappa_budget,
                             dz_refs=(0.0, max(abs(pair.dz), 0.02)))
    return engine.at(pair.dz)


# -- plasmon resonance fit and analytic approximations -------------------


def fit_two_lorentzian(kz, values, guess) -> LorentzianFit:
    """Least-squares fit of A/(1+(k-kc)^2/g^2) + A/(1+(k+kc)^2/g^2)."""
    kz = np.asarray(kz, float)
    y = np.asarray(values, float)

    def model(p):
        amp, gam, kc = p
        return amp / (1 + (kz - kc) ** 2 / gam**2) + amp / (1 + (kz + kc) ** 2 / gam**2)

    sol = least_squares(lambda p: model(p) - y, x0=np.asarray(guess, float),
                        bounds=([0.0, 1e-12, 0.0], [np.inf, np.inf, np.inf]),
                        xtol=1e-14, ftol=1e-14, gtol=1e-14)
    resid = float(np.linalg.norm(model(sol.x) - y) / np.linalg.norm(y))
    amp, gam, kc = (float(v) for v in sol.x)
    return LorentzianFit(amplitude_a=amp, width_gamma=gam, center_kz_pl=kc,
                         fit_residual=resid)


def fit_plasmon_lorentzian(geom: WireGeometry, rho: float, omega: float, *,
                           nmax=None, n_samples=360) -> LorentzianFit:
    """Fit the symmetric two-Lorentzian model to Im G~_rr(rho, rho, omega; kz).

    The fit window [omega, 4 * kz_peak] excludes the radiative continuum
    kz < omega that the model does not describe.  Initial guesses are the
    sampled peak location, its half width at half maximum, and the peak
    value.  Raises FitError when the spectrum has no bound-mode maximum
    beyond the light line.
    """
    w = float(omega)
    point = SpectralPoint.real_axis(w)
    if nmax is None:
        nmax, _ = settle_azimuthal_order(geom, point, rho, rho, 0.0)
    ev = SpectralEvaluator(geom, point, rho, rho, 0.0, nmax=nmax)

    try:
        k_guess, width_guess = plasmon_wavenumber(geom, w)
    except FitError:
        # fall back to a scan with local refinement around the maximum
        scan = w * np.geomspace(1.003, 40.0, 200)
        im_scan = ev(scan)[:, 0, 0, 0].imag
        ipk = int(np.argmax(im_scan))
        if ipk in (0, len(scan) - 1) or im_scan[ipk] <= 0:
            raise FitError("no interior spectral maximum beyond the light line; "
                           "no bound plasmon to fit")
        k_guess = float(scan[ipk])
        width_guess = float(scan[ipk + 1] - scan[ipk])
        for _ in range(4):
            local = k_guess + width_guess * np.linspace(-2.0, 2.0, 41)
            local = local[local > w]
            im_loc = ev(local)[:, 0, 0, 0].imag
            j = int(np.argmax(im_loc))
            k_guess = float(local[j])
            above = local[im_loc > 0.5 * im_loc[j]]
            width_guess = max(0.5 * (above[-1] - above[0]), 1e-4 * w)
    peak = float(ev(np.asarray([k_guess]))[0, 0, 0, 0].imag)
    if peak <= 0 or not k_guess > w:
        raise FitError("no bound-mode peak beyond the light line")

    window = np.linspace(1.0001 * w, 4.0 * k_guess, n_samples // 2)
    dense = k_guess + width_guess * np.linspace(-15, 15, n_samples // 2)
    kz = np.unique(np.concatenate([window, dense[(dense > w) & (dense < 4 * k_guess)]]))
    vals = ev(kz)[:, 0, 0, 0].imag
    fit = fit_two_lorentzian(kz, vals, (peak, width_guess, k_guess))
    if not fit.center_kz_pl > w:
        raise FitError(f"fitted center {fit.center_kz_pl} is inside the light cone")
    return fit


@dataclass
class ApproxRates:
    """Single-resonance analytic approximations, reported as ratios."""

    gamma11_over_gamma0: float
    gamma12_over_gamma11: float
    shift12_over_gamma11: float


def analytic_approximations(fit: LorentzianFit, dz: float,
                            omega_a: float = OMEGA_A) -> ApproxRates:
    """Plasmon-channel rates and shift from the fitted Lorentzian.

    gamma11 ~ (12 pi^2 A gamma / omega) Gamma0;
    gamma12/gamma11 = exp(-gamma dz) cos(kpl dz);
    shift12/gamma11 = -(1/2) exp(-gamma dz) sin(kpl dz), lagging the decay
    coupling by a quarter period.
    """
    if dz < 0:
        raise DomainError("separation must be nonnegative")
    a, gam, kpl = fit.amplitude_a, fit.width_gamma, fit.center_kz_pl
    envelope = math.exp(-gam * dz)
    return ApproxRates(
        gamma11_over_gamma0=12.0 * math.pi**2 * a * gam / omega_a,
        gamma12_over_gamma11=envelope * math.cos(kpl * dz),
        shift12_over_gamma11=-0.5 * envelope * math.sin(kpl * dz),
    )


# -- collective structure and validity diagnostics -----------------------


@dataclass
class DickeLevels:
    """Symmetric / antisymmetric channel decay rates and shifts (per Gamma0)."""

    symmetric_decay: float
    symmetric_shift: float
    antisymmetric_decay: float
    antisymmetric_shift: float
    superradiance_factor: float


def dicke_levels(result: RateShiftResult) -> DickeLevels:
    """Collective singly-excited channels: decays Gamma11 +/- Gamma12 and
    level shifts +/- shift12."""
    g11, g12 = result.gamma11, result.gamma12
    s12 = result.shift12_total
    sub = g11 - g12
    factor = math.inf if sub < 1e-12 * g11 else (g11 + g12) / sub
    return DickeLevels(
        symmetric_decay=g11 + g12,
        symmetric_shift=s12,
        antisymmetric_decay=sub,
        antisymmetric_shift=-s12,
        superradiance_factor=factor,
    )


@dataclass
class MarkovDiagnostic:
    bandwidth: float
    max_rate: float
    warn: bool


def markov_diagnostic(result: RateShiftResult, dz: float,
                      gamma0_abs: float) -> MarkovDiagnostic:
    """Retardation-bandwidth check of the Markov approximation.

    The reservoir correlation seen by a separated pair has spectral width
    c / dz = 1 / dz; when the computed couplings (converted to absolute
    frequency units through ``gamma0_abs``, the physical free-space rate)
    exceed a tenth of it, the flat-reservoir assumption is strained.
    Exactly at threshold no warning is raised (strict inequality).
    """
    if dz <= 0:
        raise DomainError("diagnostic needs dz > 0")
    bandwidth = 1.0 / dz
    max_rate = max(abs(result.gamma12), abs(result.shift12_total)) * gamma0_abs
    return MarkovDiagnostic(bandwidth=bandwidth, max_rate=max_rate,
                            warn=bool(max_rate > 0.1 * bandwidth))
