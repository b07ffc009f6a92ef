"""Radiating dipole-dipole coupling kernels.

The interaction between two fluctuating dipoles splits into two radial
amplitudes multiplying the usual orientational tensors: a "D" amplitude for
the traceless part and a "Delta" amplitude for the isotropic part.  Both are
evaluated here on the imaginary frequency axis, where the wave equation
denominator k^2 - w^2 turns into k^2 + kappa^2 and everything is real and
exponentially screened.

Internally hbar = c = 1; kappa is an inverse length and the r-space
amplitudes carry 1/length^3.

Conventions fixed here (and relied on everywhere else):

* k-space:  psi_D(k) = -(4 pi/3) k^2/(k^2+kappa^2) e^{-lam k}
            psi_Delta(k) = (4 pi/3) (2 k^2/(k^2+kappa^2) - (2+theta)) e^{-lam k}
* theta = -2 removes the contact term and kills the longitudinal mode;
  all energy computations use that choice.
* r-space closed forms (theta = -2, lam = 0):
            psi_D(r) = (1 + kappa r + (kappa r)^2/3) e^{-kappa r} / r^3
            psi_Delta(r) = -(2/3) kappa^2 e^{-kappa r} / r
  The Delta amplitude is negative for kappa > 0; only its square enters the
  pair energy, so the sign convention is fixed by the inverse transform.

The closed forms are never taken on faith: ``oracle_inverse_transform``
recovers them by direct numerical inversion of the k-space kernels
(order-0 radial transform for Delta, order-2 for D), subdividing at the
oscillation zeros and accelerating the alternating interval sums.
"""

from __future__ import annotations

from typing import Literal, NamedTuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import spherical_jn

from .numerics import QuadratureError, wynn_epsilon

THETA_TRANSVERSE = -2.0

FOUR_PI_3 = 4.0 * np.pi / 3.0


class KernelPair(NamedTuple):
    psi_d: float
    psi_delta: float


class CouplingEigenvalues(NamedTuple):
    f_par: float
    f_perp: float


class OracleValue(NamedTuple):
    value: float
    error_estimate: float


def _check_finite(**vals) -> None:
    for name, v in vals.items():
        if not np.all(np.isfinite(v)):
            raise ValueError(f"{name} must be finite, got {v!r}")


def k_space_kernels(k, kappa: float, theta: float = THETA_TRANSVERSE,
                    lam: float = 0.0) -> KernelPair:
    """Fourier-space coupling amplitudes at imaginary wavenumber ``kappa``.

    ``lam`` is the exponential wave-number damping e^{-lam k}; lam = 0 is
    the bare interaction.  ``k`` may be an array.
    """
    _check_finite(k=k, kappa=kappa, theta=theta, lam=lam)
    k = np.asarray(k, float)
    if np.any(k <= 0.0):
        raise ValueError("k must be positive")
    if kappa < 0.0 or lam < 0.0:
        raise ValueError("kappa and lam must be non-negative")
    prop = k * k / (k * k + kappa * kappa)
    damp = np.exp(-lam * k)
    psi_d = -FOUR_PI_3 * prop * damp
    psi_delta = FOUR_PI_3 * (2.0 * prop - (2.0 + theta)) * damp
    if psi_d.ndim == 0:
        return KernelPair(float(psi_d), float(psi_delta))
    return KernelPair(psi_d, psi_delta)


def r_space_kernels(r, kappa) -> KernelPair:
    """Real-space coupling amplitudes (closed forms, contact term excluded).

    Static limit: psi_D -> 1/r^3, psi_Delta -> 0.  Both decay as
    e^{-kappa r} at large kappa r.  ``r`` and ``kappa`` may be arrays of
    compatible shape.
    """
    _check_finite(r=r, kappa=kappa)
    r = np.asarray(r, float)
    kappa = np.asarray(kappa, float)
    if np.any(r <= 0.0):
        raise ValueError("r must be positive (pairs never touch)")
    if np.any(kappa < 0.0):
        raise ValueError("kappa must be non-negative")
    x = kappa * r
    screen = np.exp(-x)
    psi_d = (1.0 + x + x * x / 3.0) * screen / r**3
    psi_delta = -(2.0 / 3.0) * kappa * kappa * screen / r
    if psi_d.ndim == 0:
        return KernelPair(float(psi_d), float(psi_delta))
    return KernelPair(psi_d, psi_delta)


def coupling_eigenvalues(pair: KernelPair) -> CouplingEigenvalues:
    """Orientational eigencouplings of the dipole tensors.

    f_par: both moments along the separation axis (weight 2 psi_D + psi_Delta);
    f_perp: both transverse and parallel to each other (psi_Delta - psi_D).
    They satisfy f_par^2 + 2 f_perp^2 = 3 (2 psi_D^2 + psi_Delta^2).
    """
    return CouplingEigenvalues(2.0 * pair.psi_d + pair.psi_delta,
                               pair.psi_delta - pair.psi_d)


def squared_invariant(pair: KernelPair):
    """The rotational invariant 2 psi_D^2 + psi_Delta^2 entering the pair energy."""
    return 2.0 * pair.psi_d ** 2 + pair.psi_delta ** 2


def spherical_jn_zeros(l: int, n: int) -> np.ndarray:
    """First ``n`` positive zeros of the spherical Bessel function j_l."""
    zeros = []
    f = lambda t: spherical_jn(l, t)
    x = 0.5 if l == 0 else l + 1.0  # j_l(x) > 0 on (0, first zero)
    fx = f(x)
    step = np.pi / 4.0
    while len(zeros) < n:
        x2 = x + step
        fx2 = f(x2)
        if fx * fx2 < 0.0:
            zeros.append(brentq(f, x, x2, xtol=1e-14, rtol=8.9e-16))
        x, fx = x2, fx2
    return np.asarray(zeros)


def oracle_inverse_transform(
    kappa: float,
    r: float,
    component: Literal["D", "Delta"],
    *,
    lam: float = 0.0,
    tol: float = 1e-6,
    intervals: int = 72,
) -> OracleValue:
    """Numerically invert the k-space kernels to r-space (theta = -2).

    Independent check of :func:`r_space_kernels`: the Delta component uses
    the order-0 radial transform, the D component the order-2 one,

        psi_Delta(r) = +(1/2 pi^2) Int k^2 psi_Delta(k) j_0(k r) dk
        psi_D(r)     = -(1/2 pi^2) Int k^2 psi_D(k) j_2(k r) dk,

    where at lam = 0 the integrals exist only as Abel limits.  The k axis
    is cut at the zeros of j_l(k r) and the alternating sequence of
    interval integrals is summed with Wynn's epsilon algorithm.

    Returns the value and an error estimate; raises
    :class:`~vdwsphere.numerics.QuadratureError` if the estimate exceeds
    ``tol`` (absolute, on the accelerated sum).
    """
    _check_finite(kappa=kappa, r=r, lam=lam)
    if r <= 0.0:
        raise ValueError("r must be positive")
    if kappa < 0.0 or lam < 0.0:
        raise ValueError("kappa and lam must be non-negative")
    if component == "D":
        l, sign = 2, -1.0
        amp = lambda k: -FOUR_PI_3 * k * k / (k * k + kappa * kappa) * np.exp(-lam * k)
    elif component == "Delta":
        l, sign = 0, 1.0
        amp = lambda k: FOUR_PI_3 * 2.0 * k * k / (k * k + kappa * kappa) * np.exp(-lam * k)
    else:
        raise ValueError(f"component must be 'D' or 'Delta', got {component!r}")

    edges = np.concatenate([[0.0], spherical_jn_zeros(l, intervals) / r])
    integrand = lambda k: k * k * amp(k) * spherical_jn(l, k * r)
    parts = np.empty(len(edges) - 1)
    for i, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
        v, _ = quad(integrand, a, b, epsabs=1e-13, epsrel=1e-12, limit=200)
        parts[i] = v
    accel, err = wynn_epsilon(np.cumsum(parts))
    scale = 1.0 / (2.0 * np.pi**2)
    value, err = sign * scale * accel, scale * err
    if err > tol:
        raise QuadratureError(
            f"inverse transform error {err:.2e} above tolerance {tol:.2e} "
            f"(kappa={kappa}, r={r}, component={component})")
    return OracleValue(value, err)
