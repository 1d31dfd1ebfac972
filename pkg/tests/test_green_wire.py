import numpy as np
import pytest

from wireqed import (ConvergenceError, DomainError, DrudeModel, FitError, OMEGA_A,
                     SpectralPoint, WireGeometry, green_vacuum_im_coincident,
                     plasmon_wavenumber, wire_green, wire_spectral_green)
from wireqed.green_wire import SpectralEvaluator

REAL = SpectralPoint.real_axis(OMEGA_A)
IMAG = SpectralPoint.imaginary_axis(OMEGA_A)


def test_geometry_validation():
    with pytest.raises(DomainError):
        WireGeometry(radius=0.0, model=DrudeModel())
    with pytest.warns(UserWarning):
        WireGeometry(radius=0.6, model=DrudeModel())
    geom = WireGeometry(radius=0.01, model=DrudeModel())
    with pytest.raises(DomainError):
        wire_green(geom, (0.005, 0.0, 0.0), (0.015, 0.0, 0.0), REAL)


def test_vanishing_scatterer_limit():
    geom = WireGeometry(radius=1e-6, model=DrudeModel())
    g = wire_green(geom, (0.05, 0.0, 0.0), (0.05, 0.0, 0.25), REAL, tol=1e-6)
    assert np.max(np.abs(g.value)) < 1e-8


def test_spectral_reciprocity_random_draws(default_geom):
    rng = np.random.default_rng(42)
    for _ in range(6):
        rho1 = float(rng.uniform(0.012, 0.05))
        rho2 = float(rng.uniform(0.012, 0.05))
        dphi = float(rng.uniform(-np.pi, np.pi))
        kz = float(rng.uniform(0.1, 4.0)) * OMEGA_A
        s = REAL if rng.random() < 0.5 else IMAG
        fwd = wire_spectral_green(default_geom, rho1, rho2, dphi, s, kz) \
            + wire_spectral_green(default_geom, rho1, rho2, dphi, s, -kz)
        rev = wire_spectral_green(default_geom, rho2, rho1, -dphi, s, kz) \
            + wire_spectral_green(default_geom, rho2, rho1, -dphi, s, -kz)
        scale = np.max(np.abs(fwd))
        assert np.max(np.abs(fwd - rev.T)) <= 1e-10 * scale


def test_rr_component_even_in_kz(default_geom):
    for kz in (0.4 * OMEGA_A, 2.3 * OMEGA_A, 7.0 * OMEGA_A):
        plus = wire_spectral_green(default_geom, 0.016, 0.021, 0.7, REAL, kz)
        minus = wire_spectral_green(default_geom, 0.016, 0.021, 0.7, REAL, -kz)
        assert abs(plus[0, 0] - minus[0, 0]) <= 1e-12 * abs(plus[0, 0])
        assert abs(plus[2, 2] - minus[2, 2]) <= 1e-12 * abs(plus[2, 2])


def test_branch_point_evaluation_does_not_blow_up(default_geom):
    val = wire_spectral_green(default_geom, 0.015, 0.015, 0.0, REAL, OMEGA_A)
    assert np.all(np.isfinite(val))


def test_imaginary_axis_reality(default_geom):
    for dz, kap in ((0.0, OMEGA_A), (0.5, OMEGA_A), (0.25, 3.0 * OMEGA_A)):
        g = wire_green(default_geom, (0.015, 0.0, 0.0), (0.015, 0.0, dz),
                       SpectralPoint.imaginary_axis(kap), tol=1e-6)
        norm = np.max(np.abs(g.value))
        assert np.max(np.abs(g.value.imag)) <= 1e-8 * norm


def test_plasmon_pole_signature(default_geom):
    kp, width = plasmon_wavenumber(default_geom, OMEGA_A)
    assert kp > OMEGA_A          # bound mode, slower than light
    assert width > 0.0           # ohmic loss gives it a finite lifetime

    ev = SpectralEvaluator(default_geom, REAL, 0.015, 0.015, 0.0, nmax=30)
    kz = np.linspace(1.01 * OMEGA_A, 8.0 * OMEGA_A, 400)
    im = ev(kz)[:, 0, 0, 0].imag
    ipk = int(np.argmax(im))
    assert abs(kz[ipk] - kp) < 4.0 * width
    # single dominant maximum: nothing else comes within a tenth of the peak
    away = np.abs(kz - kz[ipk]) > 10.0 * width
    assert im[away].max() < 0.1 * im[ipk]


def test_no_bound_mode_for_transparent_wire():
    geom = WireGeometry(radius=0.01,
                        model=DrudeModel(eps_inf=1.0, omega_p=0.1, gamma_p=0.01))
    with pytest.raises(FitError):
        plasmon_wavenumber(geom, OMEGA_A)


def test_azimuthal_convergence(default_geom):
    # compare the two order ladders on one shared quadrature grid so the
    # truncation effect is isolated from panel-placement differences
    from numpy.polynomial.legendre import leggauss

    x16, w16 = leggauss(16)
    breaks = np.concatenate([
        np.linspace(0.0, 2.0 * OMEGA_A, 25),
        np.geomspace(2.0 * OMEGA_A, 60.0 * OMEGA_A, 40),
    ])
    for s, dz in [(REAL, 0.5), (IMAG, 0.02)]:
        ev_lo = SpectralEvaluator(default_geom, s, 0.015, 0.015, 0.0, nmax=30)
        ev_hi = SpectralEvaluator(default_geom, s, 0.015, 0.015, 0.0, nmax=40)
        tot_lo = np.zeros((3, 3), complex)
        tot_hi = np.zeros((3, 3), complex)
        for aa, bb in zip(breaks[:-1], breaks[1:]):
            half, mid = 0.5 * (bb - aa), 0.5 * (bb + aa)
            nodes = mid + half * x16
            phase = np.exp(1j * nodes * dz)
            for ev, acc in ((ev_lo, tot_lo), (ev_hi, tot_hi)):
                vals = ev(nodes)
                acc += half * np.einsum(
                    "k,kij->ij", w16 * phase, vals[:, 0]) + half * np.einsum(
                    "k,kij->ij", w16 * np.conj(phase), vals[:, 1])
        scale = np.max(np.abs(tot_hi))
        assert np.max(np.abs(tot_lo - tot_hi)) <= 1e-8 * scale


def test_azimuthal_tail_failure_raises():
    # emitter close enough to the surface that the series still has a
    # 1e-7-level tail at the n = 40 ceiling
    geom = WireGeometry(radius=0.01, model=DrudeModel())
    with pytest.raises(ConvergenceError):
        wire_green(geom, (0.012, 0.0, 0.0), (0.012, 0.0, 0.1), REAL)


def test_purcell_enhancement_and_regression(default_geom):
    g = wire_green(default_geom, (0.015, 0.0, 0.0), (0.015, 0.0, 0.0), REAL, tol=1e-6)
    purcell = 1.0 + 6.0 * np.pi / OMEGA_A * g.value[0, 0].imag
    assert purcell > 5.0
    # frozen regression value for the default geometry and material
    assert purcell == pytest.approx(317.0257617993, rel=1e-6)


def test_total_coincident_imaginary_part_positive(default_geom):
    # scattered part alone has no sign constraint; the total must be passive
    g = wire_green(default_geom, (0.015, 0.0, 0.0), (0.015, 0.0, 0.0), REAL, tol=1e-6)
    for i in range(3):
        total = green_vacuum_im_coincident(OMEGA_A) + g.value[i, i].imag
        assert total > 0.0


def test_report_attached(default_geom):
    g = wire_green(default_geom, (0.015, 0.0, 0.0), (0.015, 0.0, 1.0), REAL, tol=1e-6)
    assert g.converged
    assert g.report.nodes_used > 0
    assert g.report.abs_error_estimate >= 0.0
