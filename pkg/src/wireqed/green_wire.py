"""Scattered dyadic Green's tensor of an infinite metallic cylinder.

Both points outside the wire.  The tensor is assembled from cylindrical
vector waves M, N indexed by azimuthal order n and axial wavenumber kz,
with outgoing radial functions H_n^(1)(eta rho) outside and regular J_n
inside, joined by 2x2 hybrid-mode reflection coefficients per order from
the 4x4 tangential-continuity system at rho = a.

Normalization convention (pinned by the free-space expansion reproducing
the closed-form vacuum tensor, see tests):

    G(r1, r2) = (i / 8 pi) sum_n int dkz (1 / eta^2)
                [ V_M(r1) (x) Mt(r2) + V_N(r1) (x) Nt(r2) ]
                e^{i n (phi1 - phi2)} e^{i kz (z1 - z2)}

with field vectors M = (i n Z / rho, -eta Z', 0),
N = (i kz eta Z' / k, -n kz Z / (k rho), eta^2 Z / k) and source vectors
Mt, Nt equal to M, N with the sign of every explicitly imaginary component
coefficient flipped (the analytic continuation of phase conjugation).
The radial wavenumber branch is Im(eta) >= 0 everywhere, which makes every
field outgoing or decaying and the imaginary-axis tensor purely real.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .bessel import N_MAX, jh_orders, safe_min_arg
from .errors import ConvergenceError, DomainError, FitError, OverflowGuardError
from .frequencies import SpectralPoint, as_spectral_point
from .green_vacuum import DyadicGreen
from .material import DrudeModel, permittivity
from .quadrature import QuadratureReport, build_spectral_panels

DEFAULT_NMAX = 15


@dataclass(frozen=True)
class WireGeometry:
    """Wire radius (units of the vacuum wavelength) and its metal."""

    radius: float
    model: DrudeModel

    def __post_init__(self):
        if self.radius <= 0.0:
            raise DomainError(f"wire radius must be positive, got {self.radius}")
        if self.radius >= 0.5:
            warnings.warn(
                f"radius {self.radius} is not sub-wavelength; the plasmon "
                "approximation layer may not apply", stacklevel=3)


def _radial_wavenumber(k2, kz):
    """sqrt(k^2 - kz^2) on the Im >= 0 branch, vectorized."""
    eta = np.sqrt(np.asarray(k2, complex) - np.asarray(kz, complex) ** 2)
    flip = eta.imag < 0.0
    return np.where(flip, -eta, eta)


class SpectralEvaluator:
    """Vectorized scattered-spectrum evaluation at fixed geometry and frequency.

    Calling with an array of nonnegative kz nodes returns the tensor
    integrand for both signs of kz, shape (n_nodes, 2, 3, 3), in the local
    cylindrical bases of the two points.  The exp(i kz dz) phase and the
    kz integral itself belong to the caller.
    """

    def __init__(self, geom: WireGeometry, s, rho1, rho2, dphi, nmax=DEFAULT_NMAX):
        if not 1 <= nmax <= N_MAX:
            raise DomainError(f"azimuthal order must be in 1..{N_MAX}, got {nmax}")
        if min(rho1, rho2) <= geom.radius:
            raise DomainError("both points must lie outside the wire")
        self.geom = geom
        self.s = as_spectral_point(s)
        self.rho1 = float(rho1)
        self.rho2 = float(rho2)
        self.dphi = float(dphi)
        self.nmax = int(nmax)
        self.eps2 = permittivity(geom.model, self.s)
        self.k1 = self.s.value
        self.k2 = self.s.value * np.sqrt(self.eps2 + 0j)
        self._tail_abs = 0.0   # largest |n| = nmax term seen anywhere
        self._scale = 0.0      # largest |tensor| seen anywhere

        n_signed = np.arange(-self.nmax, self.nmax + 1)
        self._n_signed = n_signed
        self._reflect = np.where((np.abs(n_signed) % 2 == 1) & (n_signed < 0), -1.0, 1.0)
        self._phase_n = np.exp(1j * n_signed * self.dphi)

    @property
    def tail_ratio(self):
        """|n| = nmax contribution relative to the spectrum's global scale.

        Relative-to-local-sum ratios are meaningless deep in the evanescent
        tail where the tensor underflows; what matters for the integral is
        the edge term against the dominant part of the spectrum.
        """
        return self._tail_abs / self._scale if self._scale > 0 else 0.0

    def _ladders(self, kz):
        a = self.geom.radius
        eta1 = _radial_wavenumber(self.k1**2, kz)
        eta2 = _radial_wavenumber(self.k2**2, kz)
        # Nodes too close to the branch point are poison twice over: the
        # high-order ladder overflows (H_n ~ (2/eta a)^n), and the solved
        # reflection amplitudes scale as eta1^2 so roundoff in them is
        # amplified like 1/eta1^4 in the assembled tensor.  The spectrum
        # approaches its branch limit as eta1^2 log(eta1), so clamping the
        # radial wavenumber at the floor below only perturbs the integral
        # at the 1e-10 level while keeping every node signal-dominated.
        floor = max(safe_min_arg(self.nmax + 1) / a,
                    1e-3 * max(abs(self.k1), 1.0), 1e-12)
        bad = np.abs(eta1) < floor
        if np.any(bad):
            # constant directional clamp: propagating side stays real, the
            # evanescent side stays on +i, so panels inside the window see a
            # flat function instead of noise
            direction = np.where(np.abs(kz) <= abs(self.k1), 1.0 + 0j, 1j)
            eta1 = np.where(bad, floor * direction, eta1)
        j1a, h1a, j1ap, h1ap = jh_orders(self.nmax, eta1 * a)
        j2a, _, j2ap, _ = jh_orders(self.nmax, eta2 * a)
        _, hr1, _, hr1p = jh_orders(self.nmax, eta1 * self.rho1)
        _, hr2, _, hr2p = jh_orders(self.nmax, eta1 * self.rho2)
        return eta1, eta2, (j1a, j1ap, h1a, h1ap, j2a, j2ap), (hr1, hr1p, hr2, hr2p)

    def _solve(self, kz_signed, eta1, eta2, wall):
        """Reflection coefficients for orders 0..nmax at signed kz nodes.

        Returns array (K, nmax+1, 2, 2): [[R_MM, R_MN], [R_NM, R_NN]].
        """
        j1a, j1ap, h1a, h1ap, j2a, j2ap = wall
        a = self.geom.radius
        k1, k2 = self.k1, self.k2
        nn = np.arange(self.nmax + 1)[None, :]
        kz = np.asarray(kz_signed)[:, None]
        e1 = np.asarray(eta1)[:, None]
        e2 = np.asarray(eta2)[:, None]
        J1, J1p = j1a.T, j1ap.T  # (K, n)
        H1, H1p = h1a.T, h1ap.T
        J2, J2p = j2a.T, j2ap.T
        K, NN = J1.shape

        A = np.zeros((K, NN, 4, 4), complex)
        B = np.zeros((K, NN, 4, 2), complex)
        cpl = nn * kz  # coupling strength n*kz
        # rows: E_z, H_z, E_phi, H_phi continuity; cols: (a_M, b_N, c_M, d_N)
        A[..., 0, 1] = e1**2 / k1 * H1
        A[..., 0, 3] = -(e2**2) / k2 * J2
        A[..., 1, 0] = e1**2 * H1
        A[..., 1, 2] = -(e2**2) * J2
        A[..., 2, 0] = -e1 * H1p
        A[..., 2, 1] = -cpl / (k1 * a) * H1
        A[..., 2, 2] = e2 * J2p
        A[..., 2, 3] = cpl / (k2 * a) * J2
        A[..., 3, 0] = -cpl / a * H1
        A[..., 3, 1] = -k1 * e1 * H1p
        A[..., 3, 2] = cpl / a * J2
        A[..., 3, 3] = k2 * e2 * J2p

        B[..., 0, 1] = -(e1**2) / k1 * J1
        B[..., 1, 0] = -(e1**2) * J1
        B[..., 2, 0] = e1 * J1p
        B[..., 2, 1] = cpl / (k1 * a) * J1
        B[..., 3, 0] = cpl / a * J1
        B[..., 3, 1] = k1 * e1 * J1p

        X = np.linalg.solve(A, B)
        # scattered amplitudes are the (a_M, b_N) rows
        R = np.empty((K, NN, 2, 2), complex)
        R[..., 0, 0] = X[..., 0, 0]   # R_MM
        R[..., 0, 1] = X[..., 0, 1]   # R_MN
        R[..., 1, 0] = X[..., 1, 0]   # R_NM
        R[..., 1, 1] = X[..., 1, 1]   # R_NN
        return R

    def __call__(self, kz_nodes):
        kz = np.asarray(kz_nodes, float)
        if np.any(kz < 0.0):
            raise DomainError("evaluator nodes must be nonnegative; signs are internal")
        eta1, eta2, wall, outside = self._ladders(kz)
        Rp = self._solve(kz, eta1, eta2, wall)    # orders 0..nmax at +kz
        Rm = self._solve(-kz, eta1, eta2, wall)   # orders 0..nmax at -kz

        hr1, hr1p, hr2, hr2p = outside
        ns = self._n_signed                      # (M,) signed orders
        absn = np.abs(ns)
        refl = self._reflect[:, None]            # (-1)^n for negative odd orders
        phase = self._phase_n[:, None]

        H1 = hr1[absn] * refl                    # (M, K) H_n(eta1 rho1)
        H1p = hr1p[absn] * refl
        H2 = hr2[absn] * refl
        H2p = hr2p[absn] * refl

        out = np.empty((kz.size, 2, 3, 3), complex)
        for side, (sgn, Rpos) in enumerate((( +1.0, Rp), (-1.0, Rm))):
            kzs = sgn * kz[None, :]              # signed kz, (1, K)
            # coefficients: order n<0 at +kz equals order |n| at -kz
            Rother = Rm if sgn > 0 else Rp
            Rsel = np.where((ns < 0)[:, None, None, None],
                            Rother[:, absn].transpose(1, 0, 2, 3),
                            Rpos[:, absn].transpose(1, 0, 2, 3))  # (M, K, 2, 2)

            nsk = ns[:, None]
            M1 = np.stack([1j * nsk / self.rho1 * H1, -eta1[None, :] * H1p,
                           np.zeros_like(H1)])                       # (3, M, K)
            N1 = np.stack([1j * kzs * eta1[None, :] * H1p / self.k1,
                           -nsk * kzs * H1 / (self.k1 * self.rho1),
                           eta1[None, :] ** 2 * H1 / self.k1])
            Mt = np.stack([-1j * nsk / self.rho2 * H2, -eta1[None, :] * H2p,
                           np.zeros_like(H2)])
            Nt = np.stack([-1j * kzs * eta1[None, :] * H2p / self.k1,
                           -nsk * kzs * H2 / (self.k1 * self.rho2),
                           eta1[None, :] ** 2 * H2 / self.k1])

            VM = Rsel[None, :, :, 0, 0] * M1 + Rsel[None, :, :, 1, 0] * N1  # (3, M, K)
            VN = Rsel[None, :, :, 0, 1] * M1 + Rsel[None, :, :, 1, 1] * N1

            pref = (1j / (8.0 * np.pi)) * phase / eta1[None, :] ** 2  # (M, K)
            Tn = (np.einsum("imk,jmk->mkij", VM, Mt)
                  + np.einsum("imk,jmk->mkij", VN, Nt)) * pref[:, :, None, None]
            keep = self._monotone_mask(Tn, absn, eta1)
            Tn = Tn * keep[:, :, None, None]
            T = Tn.sum(axis=0)
            out[:, side] = T

            edge = (absn == self.nmax)
            self._tail_abs = max(self._tail_abs, float(np.max(np.abs(Tn[edge]))))
            self._scale = max(self._scale, float(np.max(np.abs(T))))
        if not np.all(np.isfinite(out)):
            raise OverflowGuardError(
                "spectral tensor evaluation lost finiteness; the requested "
                "(geometry, frequency, kz) reach beyond the representable range")
        return out

    def _monotone_mask(self, Tn, absn, eta1):
        """Suppress azimuthal orders past the roundoff floor near the
        branch ring.

        Within a few clamp floors of eta1 = 0 the wall-solve columns span
        hundreds of decades and high orders come out as amplified roundoff;
        there the genuine multipole profile decays superexponentially past
        the turning point, so any rebound of the per-node order profile is
        noise and everything from the first rebound outward is zeroed.
        Away from the ring the profile may rebound legitimately (a resonant
        multipole of the surface-mode ladder), so those nodes are never
        touched -- amputating a resonance would break causality.
        """
        ring = np.abs(eta1) < 0.03 * max(abs(self.k1), 1.0)
        if not np.any(ring):
            return np.ones((absn.size, eta1.size), bool)
        mags = np.abs(Tn).max(axis=(2, 3))          # (M, K)
        nmax1 = self.nmax + 1
        nprof = np.zeros((nmax1, mags.shape[1]))
        np.add.at(nprof, absn, mags)
        floor_prev = np.vstack([np.full((1, nprof.shape[1]), np.inf),
                                np.minimum.accumulate(nprof, axis=0)[:-1]])
        rebound = nprof > 30.0 * floor_prev
        head = np.abs(eta1)[None, :] * max(self.rho1, self.rho2) + 4.0
        rebound &= np.arange(nmax1)[:, None] > head
        rebound &= ring[None, :]
        noisy = np.maximum.accumulate(rebound, axis=0)
        return ~noisy[absn]


def wire_spectral_green(geom: WireGeometry, rho1: float, rho2: float, dphi: float,
                        s, kz, nmax: int = DEFAULT_NMAX, tail_tol: float = 1e-10):
    """Scattered spectrum G~(kz) at fixed radial/azimuthal geometry.

    Accepts scalar or array kz of either sign and returns the 3x3 tensor(s)
    in local cylindrical components.  The azimuthal series is extended
    automatically (up to N_MAX) until the |n| = nmax term falls below
    ``tail_tol`` of the partial sum; failure to converge raises.
    """
    kz_arr = np.atleast_1d(np.asarray(kz, float))
    n = int(nmax)
    while True:
        ev = SpectralEvaluator(geom, s, rho1, rho2, dphi, nmax=n)
        vals = ev(np.abs(kz_arr))
        side = (kz_arr < 0).astype(int)
        out = vals[np.arange(kz_arr.size), side]
        if ev.tail_ratio <= tail_tol:
            break
        if n >= N_MAX:
            raise ConvergenceError(
                f"azimuthal series still has tail ratio {ev.tail_ratio:.2e} at n = {n}",
                {"nmax": n, "tail_ratio": ev.tail_ratio})
        n = min(2 * n, N_MAX)
    return out[0] if np.isscalar(kz) or np.ndim(kz) == 0 else out


def plasmon_wavenumber(geom: WireGeometry, omega: float, *, scan_max_ratio=None):
    """Locate the fundamental (n = 0, TM) guided plasmon pole at real omega.

    Returns (kz_pl, width): the real part of the complex pole of the
    reflection coefficients and its imaginary part (the propagation decay
    rate, which doubles as the Lorentzian width of the spectral peak).
    Raises FitError when no bound mode exists for the given permittivity.
    """
    w = float(omega)
    eps2 = permittivity(geom.model, SpectralPoint.real_axis(w))
    k1, k2 = w, w * np.sqrt(eps2 + 0j)
    a = geom.radius
    if scan_max_ratio is None:
        # near the eps -> -1 accumulation the mode index diverges like
        # kz a ~ 1/|eps + 1|; stretch the scan accordingly
        x_est = 1.0 / max(abs(eps2 + 1.0), 1e-3) + 5.0
        scan_max_ratio = max(60.0, 3.0 * x_est / (w * a))

    def terms(kz):
        kz = np.atleast_1d(np.asarray(kz, complex))
        e1 = _radial_wavenumber(k1**2, kz)
        e2 = _radial_wavenumber(k2**2, kz)
        j2, _, j2p, _ = jh_orders(0, e2 * a)
        _, h1, _, h1p = jh_orders(0, e1 * a)
        t1 = (e1**2 / k1) * h1[0] * k2 * e2 * j2p[0]
        t2 = (e2**2 / k2) * j2[0] * k1 * e1 * h1p[0]
        return t1, t2

    def det(kz):
        t1, t2 = terms(kz)
        return t1 - t2

    # both terms die exponentially at large kz, so the root search scans the
    # determinant normalized by their magnitude scale
    scan = w * np.geomspace(1.002, scan_max_ratio, 300)
    t1, t2 = terms(scan)
    mags = np.abs(t1 - t2) / (np.abs(t1) + np.abs(t2))
    i0 = int(np.argmin(mags))
    if i0 in (0, len(scan) - 1) or mags[i0] > 0.3:
        raise FitError("no interior minimum of the TM0 dispersion function; "
                       "no bound plasmon for this permittivity")
    kz = complex(scan[i0])
    for _ in range(60):
        h = 1e-7 * abs(kz)
        d, dplus, dminus = det(np.array([kz, kz + h, kz - h]))
        dp = (dplus - dminus) / (2 * h)
        if dp == 0:
            break
        step = d / dp
        if abs(step) > 0.25 * abs(kz):
            step *= 0.25 * abs(kz) / abs(step)
        kz = complex(kz - step)
        if abs(step) < 1e-13 * abs(kz):
            break
    if not (kz.real > w and abs(kz.imag) < kz.real):
        raise FitError(f"TM0 root search landed at {kz}, not a bound mode")
    return float(kz.real), float(abs(kz.imag))


def _auto_pole_hint(geom, s):
    point = as_spectral_point(s)
    if point.is_imaginary:
        return None
    # the fundamental bound mode needs Re eps < -1; above the surface-mode
    # accumulation there is nothing to seed
    eps2 = permittivity(geom.model, point)
    if eps2.real >= -1.0:
        return None
    try:
        kp, width = plasmon_wavenumber(geom, point.omega)
        return kp, max(width, 1e-4 * point.omega)
    except (FitError, OverflowGuardError):
        return None


def _k_window(geom, point, rho1, rho2, pole_hint):
    """Starting tail boundary, envelope decay rate and a usable pole hint.

    A guided mode whose transverse fields have already decayed to nothing at
    the emitters (huge kz near the mode-index divergence) is dropped from
    the seeding: it only inflates the window, and near the overflow guard
    of the special functions it would push nodes out of range entirely.
    """
    from .bessel import OVERFLOW_GUARD

    gap = (rho1 - geom.radius) + (rho2 - geom.radius)
    sabs = abs(point.value)
    if pole_hint is not None and (pole_hint[0] - sabs) * gap > 30.0:
        pole_hint = None
    k_start = 3.0 * sabs + 10.0
    if pole_hint is not None:
        k_start = max(k_start, 1.2 * (pole_hint[0] + 6.0 * pole_hint[1]))
    eps2 = permittivity(geom.model, point)
    k_start = max(k_start, 1.3 * abs(np.sqrt(eps2 + 0j)) * sabs)
    arg_scale = max(rho1, rho2, geom.radius * abs(np.sqrt(eps2 + 0j)))
    k_start = min(k_start, 0.8 * OVERFLOW_GUARD / arg_scale)
    return k_start, gap, pole_hint


def settle_azimuthal_order(geom, s, rho1, rho2, dphi, nmax=DEFAULT_NMAX,
                           tail_tol=1e-10):
    """Smallest order ladder whose |n| = N term is negligible, by probing a
    handful of spectrum nodes instead of building a full quadrature table."""
    point = as_spectral_point(s)
    sabs = max(abs(point.value), 1.0)
    probe = np.array([0.2, 0.7, 1.2, 2.5, 6.0]) * sabs
    n = int(nmax)
    while True:
        ev = SpectralEvaluator(geom, point, rho1, rho2, dphi, nmax=n)
        ev(probe)
        if ev.tail_ratio <= tail_tol or n >= N_MAX:
            return n, ev.tail_ratio
        n = min(2 * n, N_MAX)


def wire_green(geom: WireGeometry, p1, p2, s, *, tol: float = 1e-6,
               nmax: int = DEFAULT_NMAX, pole_hint="auto",
               budget: int = 60000) -> DyadicGreen:
    """kz integral of the scattered spectrum between two cylindrical points.

    Parameters
    ----------
    p1, p2 : (rho, phi, z)
        Cylindrical coordinates, both with rho > radius.
    s : SpectralPoint or number
        Real or imaginary frequency.
    pole_hint : "auto", None, or (kz_pl, width)
        Plasmon-pole panel seeding for real frequencies.

    Returns a cylindrical-frame DyadicGreen whose ``report`` carries the
    quadrature diagnostics; an unconverged integral raises ConvergenceError
    with those diagnostics attached.
    """
    point = as_spectral_point(s)
    rho1, phi1, z1 = p1
    rho2, phi2, z2 = p2
    dz = float(z1) - float(z2)
    hint = _auto_pole_hint(geom, point) if pole_hint == "auto" else pole_hint
    k_start, gap, hint = _k_window(geom, point, rho1, rho2, hint)

    n, _ = settle_azimuthal_order(geom, point, rho1, rho2, phi1 - phi2, nmax=nmax)
    while True:
        ev = SpectralEvaluator(geom, point, rho1, rho2, phi1 - phi2, nmax=n)
        table = WireSpectralTable(ev, tol=tol, pole_hint=hint, k_start=k_start,
                                  tail_scale=gap, budget=budget, phase_ref=dz)
        if ev.tail_ratio <= 1e-10:
            break
        if n >= N_MAX:
            raise ConvergenceError(
                f"azimuthal series tail {ev.tail_ratio:.2e} exceeds 1e-10 at n = {n}",
                {"nmax": n})
        n = min(2 * n, N_MAX)

    tensor, abs_err = table.integrate(dz)
    scale = max(1.0, float(np.abs(tensor).max()))
    report = QuadratureReport(
        value=None, abs_error_estimate=abs_err, nodes_used=table.nodes_used,
        converged=bool(table.panels_ok and abs_err <= tol * scale),
        diagnostics={"n_panels": table.n_panels, "tail_bound": table.tail_bound,
                     "nmax": ev.nmax, "k_start": k_start})
    if not report.converged:
        raise ConvergenceError(
            "kz quadrature for the wire tensor did not converge",
            {"nodes_used": report.nodes_used, **report.diagnostics})
    return DyadicGreen(value=tensor, frame="cylindrical", report=report,
                       converged=report.converged)


@dataclass
class FrozenSpectralTable:
    """Plain-array snapshot of a spectral table; picklable, so quadrature
    drivers can fan table construction out to worker processes."""

    halves: np.ndarray        # (P,)
    mids: np.ndarray          # (P,)
    coefs: np.ndarray         # (P, 16, 2, 9)
    panel_err: float
    tail_bound: float
    panels_ok: bool
    nodes_used: int

    def integrate(self, dz: float):
        """(3x3 tensor, abs error) of int_{-inf}^{inf} G~(kz) e^{i kz dz} dkz."""
        from .quadrature import moments_for

        mom = moments_for(float(dz) * self.halves)  # (16, P)
        vec = np.einsum("p,kp,pkc->c", self.halves * np.exp(1j * dz * self.mids),
                        mom, self.coefs[:, :, 0, :])
        vec = vec + np.einsum("p,kp,pkc->c", self.halves * np.exp(-1j * dz * self.mids),
                              np.conj(mom), self.coefs[:, :, 1, :])
        return vec.reshape(3, 3), self.panel_err + self.tail_bound


class WireSpectralTable:
    """Frozen kz-panel tabulation of a scattered spectrum at one frequency.

    Build once, then ``integrate(dz)`` for any number of separations: the
    separation only enters through analytic phase moments, so each call
    costs a few matrix-vector products instead of new Bessel evaluations.
    """

    def __init__(self, evaluator: SpectralEvaluator, *, tol, pole_hint=None,
                 k_start=None, tail_scale=None, k_max=None, budget=60000,
                 phase_ref=0.0):
        self.evaluator = evaluator
        point = evaluator.s
        branch = None if point.is_imaginary else abs(point.omega)
        fpanel = lambda kz: evaluator(kz).reshape(len(kz), 2, 9)
        ps, tail_bound, ok = build_spectral_panels(
            fpanel, 2, 9, tol=tol, pole_hint=pole_hint, branch_point=branch,
            tail_scale=tail_scale, k_start=k_start, k_max=k_max, budget=budget,
            phase_for_blocks=phase_ref)
        self._ps = ps
        self.tail_bound = float(tail_bound)
        self.panels_ok = bool(ok)
        self.nodes_used = ps.nodes_used
        self.n_panels = len(ps.panels)

    def integrate(self, dz: float):
        """(3x3 tensor, abs error) of int_{-inf}^{inf} G~(kz) e^{i kz dz} dkz."""
        vec = self._ps.integral(float(dz))
        return vec.reshape(3, 3), self._ps.err + self.tail_bound

    def frozen(self) -> FrozenSpectralTable:
        halves, mids, coefs = self._ps._freeze()
        return FrozenSpectralTable(
            halves=halves, mids=mids, coefs=coefs, panel_err=self._ps.err,
            tail_bound=self.tail_bound, panels_ok=self.panels_ok,
            nodes_used=self.nodes_used)
