"""Cylindrical Bessel and Hankel functions of integer order, complex argument.

The wire Green's tensor needs J_n, H_n^(1) and their derivatives for
arguments anywhere in the closed upper half-plane: real for propagating
radial waves, purely imaginary on the imaginary frequency axis, and general
complex inside the lossy metal.  Evaluation is delegated to the AMOS
routines behind scipy.special; this module adds the order ladder, the
derivative recurrence f' = (f_{n-1} - f_{n+1})/2, negative-order reflection
J_{-n} = (-1)^n J_n, and explicit domain/overflow guards.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError, OverflowGuardError

#: Largest azimuthal order the wire series will ever request.
N_MAX = 40

#: Arguments beyond this magnitude risk overflow in the unscaled routines.
OVERFLOW_GUARD = 1.0e3


@dataclass(frozen=True)
class CylFunValue:
    """J_n, H_n^(1) and derivatives at a single (order, argument) pair."""

    order: int
    argument: complex
    j: complex
    h1: complex
    jprime: complex
    h1prime: complex

    def wronskian(self) -> complex:
        """J_n h1' - J_n' h1; equals 2i/(pi z) for any valid argument."""
        return self.j * self.h1prime - self.jprime * self.h1


def safe_min_arg(order: int) -> float:
    """Smallest |z| for which H_order(z) stays below ~1e280.

    From the small-argument growth |H_n(z)| ~ (n-1)! (2/|z|)^n / pi; the
    bound is vanishingly small for low orders and only bites for deep
    ladders evaluated next to a branch point.
    """
    import math

    m = max(int(order), 1)
    return 2.0 * math.exp(-(280.0 * math.log(10.0) - math.lgamma(m)) / m)


def _check_argument(z: complex) -> complex:
    z = complex(z)
    if z == 0:
        raise DomainError("Bessel argument z = 0 is outside the domain")
    if abs(z) >= OVERFLOW_GUARD:
        raise OverflowGuardError(f"|z| = {abs(z):.3g} exceeds the overflow guard {OVERFLOW_GUARD:g}")
    return z


def jh_orders(nmax: int, z):
    """J, H^(1) and derivatives for all orders 0..nmax at argument(s) z.

    Parameters
    ----------
    nmax : int
        Highest order required, 0 <= nmax <= N_MAX.
    z : complex or complex ndarray
        Argument(s); z = 0 is rejected.

    Returns
    -------
    j, h, jp, hp : ndarray, shape (nmax+1,) + shape(z)
    """
    if not 0 <= nmax <= N_MAX:
        raise DomainError(f"order ladder must satisfy 0 <= nmax <= {N_MAX}, got {nmax}")
    zarr = np.atleast_1d(np.asarray(z, dtype=complex))
    if np.any(zarr == 0):
        raise DomainError("Bessel argument z = 0 is outside the domain")
    if np.any(np.abs(zarr) >= OVERFLOW_GUARD):
        raise OverflowGuardError("Bessel argument exceeds the overflow guard")

    orders = np.arange(nmax + 2, dtype=float)[:, None]
    j = special.jv(orders, zarr[None, :])
    h = special.hankel1(orders, zarr[None, :])
    if not (np.all(np.isfinite(j)) and np.all(np.isfinite(h))):
        raise OverflowGuardError("Bessel evaluation overflowed the representable range")

    # f'_n = (f_{n-1} - f_{n+1}) / 2 with f_{-1} = -f_1
    jp = np.empty_like(j[: nmax + 1])
    hp = np.empty_like(h[: nmax + 1])
    jp[0] = -j[1]
    hp[0] = -h[1]
    jp[1:] = (j[: nmax] - j[2: nmax + 2]) / 2.0
    hp[1:] = (h[: nmax] - h[2: nmax + 2]) / 2.0

    shape = (nmax + 1,) + np.shape(z)
    return (j[: nmax + 1].reshape(shape), h[: nmax + 1].reshape(shape),
            jp.reshape(shape), hp.reshape(shape))


def bessel_jh(order: int, z: complex) -> CylFunValue:
    """J_n(z), H_n^(1)(z) and their derivatives for one integer order.

    Negative orders are reflected through J_{-n} = (-1)^n J_n (and the same
    relation for H^(1) and the derivatives).
    """
    n = int(order)
    if abs(n) > N_MAX:
        raise DomainError(f"|order| = {abs(n)} exceeds N_MAX = {N_MAX}")
    z = _check_argument(z)

    j, h, jp, hp = jh_orders(abs(n), np.array([z]))
    sign = -1.0 if (n < 0 and n % 2 != 0) else 1.0
    return CylFunValue(
        order=n,
        argument=z,
        j=sign * complex(j[abs(n), 0]),
        h1=sign * complex(h[abs(n), 0]),
        jprime=sign * complex(jp[abs(n), 0]),
        h1prime=sign * complex(hp[abs(n), 0]),
    )
