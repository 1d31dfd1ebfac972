"""Built-in validation suites: the contour-rotation equivalence theorem on
closed-form causal models, Kramers-Kronig residuals, Wronskian sweeps and
free-space normalization.  These run in seconds and back the ``validate``
CLI command; the expensive wire-level closure checks live in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bessel import bessel_jh
from .frequencies import OMEGA_A, SpectralPoint
from .green_vacuum import free_space_rate, green_vacuum, green_vacuum_im_coincident
from .material import DrudeModel, permittivity
from .quadrature import imag_axis_integrate, kk_check, pv_shift_oracle


@dataclass(frozen=True)
class ResonanceModel:
    """Sum of causal resonances c_j / (w_j^2 - w^2 - i g_j w).

    Analytic in the upper half-plane, real on the imaginary axis, with
    large-frequency plateau f_inf = lim w^2 G(w) = -sum(c_j).  A vanishing
    plateau (zero-sum amplitudes) mimics a medium-minus-vacuum difference,
    for which the rotated shift formula needs no arc correction.
    """

    amplitudes: tuple
    centers: tuple
    widths: tuple

    def __call__(self, w: complex) -> complex:
        return sum(c / (w0 * w0 - w * w - 1j * g * w)
                   for c, w0, g in zip(self.amplitudes, self.centers, self.widths))

    def imag_axis(self, kappa: float) -> float:
        return float(sum(c / (w0 * w0 + kappa * kappa + g * kappa)
                         for c, w0, g in zip(self.amplitudes, self.centers, self.widths)))

    @property
    def arc_limit(self) -> float:
        return -float(sum(self.amplitudes))


EQUIVALENCE_MODELS = (
    ResonanceModel((1.3,), (2.0,), (0.3,)),
    ResonanceModel((1.3, 0.7), (2.0, 5.0), (0.3, 0.8)),
    ResonanceModel((1.3, -0.5, 0.9), (2.0, 5.0, 9.0), (0.3, 0.8, 0.2)),
    ResonanceModel((1.0, -1.0), (2.0, 6.0), (0.4, 0.4)),  # zero-sum: no arc term
)


def rotated_shift(model, omega_a: float, tol: float = 1e-10) -> float:
    """Shift integrand via the imaginary-axis route:
    pi w^2 Re G(w) + int dk k^2 G(ik) w/(k^2+w^2)  [- arc plateau]."""
    res = math.pi * omega_a**2 * complex(model(omega_a)).real
    rep = imag_axis_integrate(model.imag_axis, omega_a, tol=tol)
    return res + rep.value - 0.5 * math.pi * model.arc_limit


def pv_shift(model, omega_a: float, tol: float = 1e-10) -> float:
    """The same quantity by brute force: PV int w^2 Im G/(w - w_a) dw."""
    return pv_shift_oracle(lambda w: complex(model(w)).imag, omega_a, tol=tol)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.name}: residual {self.residual:.3e} "
                f"(tolerance {self.tolerance:.1e}) {self.detail}".rstrip())


def equivalence_suite(omega_a=3.3, tol=1e-6, flip_resonant_sign=False):
    """Imaginary-axis route against the principal-value oracle for the
    built-in causal models.  ``flip_resonant_sign`` is a mutation hook used
    by tests to prove the suite would catch a sign error."""
    results = []
    for i, model in enumerate(EQUIVALENCE_MODELS, start=1):
        res_term = math.pi * omega_a**2 * complex(model(omega_a)).real
        if flip_resonant_sign:
            res_term = -res_term
        rep = imag_axis_integrate(model.imag_axis, omega_a, tol=1e-10)
        rotated = res_term + rep.value - 0.5 * math.pi * model.arc_limit
        pv = pv_shift(model, omega_a)
        rel = abs(rotated - pv) / abs(pv)
        tag = "zero-sum" if model.arc_limit == 0 else f"{len(model.amplitudes)} resonance(s)"
        results.append(SuiteResult(
            name=f"equivalence model {i} ({tag})", passed=rel < tol,
            residual=rel, tolerance=tol,
            detail=f"pv={pv:+.9g} rotated={rotated:+.9g}"))
    return results


def kk_suite(tol=1e-4, gamma_p_over_omega_p=0.002):
    """Weighted Kramers-Kronig closure on a causal resonance and on the
    metal permittivity model.  A lossless metal has Im eps = 0 and is
    reported as a documented degenerate skip, not a failure."""
    results = []
    w0, g = 2.0, 0.1
    wa = 1.0
    model = ResonanceModel((1.0,), (w0,), (g,))
    rep = kk_check(lambda s: model(s.value), wa, arc_limit=model.arc_limit, tol=1e-8)
    results.append(SuiteResult(
        name="kramers-kronig causal resonance", passed=rep.residual < tol,
        residual=rep.residual, tolerance=tol))

    drude = DrudeModel(eps_inf=1.0, omega_p=4.0 * OMEGA_A,
                       gamma_p=gamma_p_over_omega_p * 4.0 * OMEGA_A)
    if drude.gamma_p == 0.0:
        results.append(SuiteResult(
            name="kramers-kronig drude permittivity", passed=True, residual=float("nan"),
            tolerance=tol, detail="skipped: lossless material has Im eps = 0 (degenerate)"))
        return results

    def eps_med(s):
        return permittivity(drude, s) - drude.eps_inf

    rep2 = kk_check(eps_med, 1.7 * OMEGA_A, arc_limit=-drude.omega_p**2, tol=1e-8)
    if rep2.degenerate:
        results.append(SuiteResult(
            name="kramers-kronig drude permittivity", passed=True, residual=float("nan"),
            tolerance=tol, detail="skipped: degenerate (zero imaginary part)"))
    else:
        results.append(SuiteResult(
            name="kramers-kronig drude permittivity", passed=rep2.residual < tol,
            residual=rep2.residual, tolerance=tol))
    return results


def wronskian_suite(tol=1e-10, n_points=200, seed=20260808):
    """J_n H'_n - J'_n H_n against 2i/(pi z) on a randomized upper-half-plane
    grid of orders and magnitudes."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_points):
        n = int(rng.integers(0, 21))
        r = float(np.exp(rng.uniform(np.log(0.01), np.log(50.0))))
        phase = float(rng.uniform(0.0, np.pi))
        z = r * complex(np.cos(phase), np.sin(phase))
        if abs(z.imag) > 200.0:
            continue
        val = bessel_jh(n, z)
        target = 2j / (math.pi * z)
        worst = max(worst, abs(val.wronskian() - target) / abs(target))
    return [SuiteResult(name="wronskian randomized sweep", passed=worst < tol,
                        residual=worst, tolerance=tol)]


def normalization_suite():
    """Free-space rate: exact w^3 scaling and the coincident-point limit of
    the transverse imaginary part, Richardson-extrapolated in separation."""
    results = []
    ratio = free_space_rate(2.0 * OMEGA_A) / free_space_rate(OMEGA_A)
    res = abs(ratio - 8.0) / 8.0
    results.append(SuiteResult(name="rate scaling w^3", passed=res < 1e-12,
                               residual=res, tolerance=1e-12))

    w = OMEGA_A
    target = green_vacuum_im_coincident(w)

    def im_xx(r):
        g = green_vacuum(np.array([0.0, 0.0, r]), np.zeros(3), SpectralPoint.real_axis(w))
        return g.value[0, 0].imag

    # deviation is O((wr)^2): two-point Richardson removes it
    f1, f2 = im_xx(1e-3), im_xx(0.5e-3)
    extrap = (4.0 * f2 - f1) / 3.0
    res2 = abs(extrap - target) / target
    results.append(SuiteResult(name="coincident-point limit w/(6 pi)",
                               passed=res2 < 1e-6, residual=res2, tolerance=1e-6))
    return results


def run_all(flip_resonant_sign=False, gamma_p_over_omega_p=0.002):
    suites = []
    suites += equivalence_suite(flip_resonant_sign=flip_resonant_sign)
    suites += kk_suite(gamma_p_over_omega_p=gamma_p_over_omega_p)
    suites += wronskian_suite()
    suites += normalization_suite()
    return suites
