"""Mutual free energy of two polarizable particles.

Three routes to the same quantity cross-validate each other:

* finite-temperature Matsubara sum over the squared r-space kernels,
    -beta F = (3/2) sum_K alpha^2 (2 psi_D^2 + psi_Delta^2);
* the T = 0 closed form F = -23 alpha^2 / (4 pi r^7) (hbar = c = 1) and its
  quadrature twin, the kappa integral of the same squared-kernel bracket;
* a T = 0 wave-number-space double integral with exponential damping
  e^{-lam(k+k')}, whose angular content reduces to spherical Bessel
  functions, extrapolated lam -> 0.

The k-space integrand after angular reduction is

    F(r, lam) = -(2 alpha^2 / 3 pi^2) II dk dk' k^3 k'^3/(k+k')
                e^{-lam(k+k')} [ j2(kr) j2(k'r) + 2 j0(kr) j0(k'r) ],

evaluated by composite Gauss panels on the (k, k') square with order
refinement.  Rewriting 1/(k+k') as an integral over a second damping
parameter collapses the same object to the closed form implemented in
:func:`damped_pair_law`; the two agree to quadrature accuracy, and both are
checked in the test suite against a low-precision direct quadrature of the
angular-unreduced integrand.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import spherical_jn

from .kernels import r_space_kernels, squared_invariant
from .matsubara import ThermalState, matsubara_sum, zero_T_integral
from .numerics import QuadratureError, gauss_panels, richardson_extrapolate

PAIR_LAW_COEFF = 23.0 / (4.0 * np.pi)  # |F| r^7 / alpha^2 at T = 0


@dataclass(frozen=True)
class Medium:
    """Constant polarizability alpha, number density rho, contact weight theta."""

    alpha: float
    rho: float = 0.0
    theta: float = -2.0

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and self.alpha >= 0.0):
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if not (np.isfinite(self.rho) and self.rho >= 0.0):
            raise ValueError(f"rho must be >= 0, got {self.rho}")
        if self.gamma >= 1.0:
            raise ValueError(
                f"gamma = 4 pi rho alpha = {self.gamma:.4f} >= 1 leaves the "
                "dilute regime")

    @property
    def gamma(self) -> float:
        return 4.0 * np.pi * self.rho * self.alpha


@dataclass(frozen=True)
class PairEnergy:
    value: float
    route: str
    error_estimate: float


def pair_free_energy(r: float, medium: Medium, state: ThermalState,
                     rtol: float = 1e-10) -> PairEnergy:
    """Finite-temperature pair free energy by adaptive Matsubara summation."""
    if r <= 0.0:
        raise ValueError("r must be positive")
    a2 = medium.alpha ** 2

    def summand(k):
        return a2 * squared_invariant(r_space_kernels(r, np.abs(k)))

    s = matsubara_sum(summand, state, rtol=rtol)
    scale = 3.0 / (2.0 * state.beta)
    return PairEnergy(-scale * s.value, "r-space-sum", scale * s.truncation_error_estimate)


def pair_energy_T0(r: float, alpha: float) -> PairEnergy:
    """Zero-temperature closed form, F = -23 alpha^2 / (4 pi r^7)."""
    if r <= 0.0:
        raise ValueError("r must be positive")
    if alpha < 0.0:
        raise ValueError("alpha must be non-negative")
    return PairEnergy(-PAIR_LAW_COEFF * alpha**2 / r**7, "r-space-T0-closed", 0.0)


def pair_energy_T0_numeric(r: float, alpha: float, tol: float = 1e-10) -> PairEnergy:
    """Zero-temperature pair energy as the kappa integral of the kernel bracket.

    Must reproduce :func:`pair_energy_T0` within ``tol``; kept as an
    independent quadrature route, not a re-derivation of the closed form.
    """
    if r <= 0.0:
        raise ValueError("r must be positive")

    def summand(kappa):
        return 1.5 * alpha**2 * squared_invariant(r_space_kernels(r, kappa))

    value, qres = zero_T_integral(summand, tol, scale=1.0 / r, full_output=True)
    return PairEnergy(-value, "r-space-T0-numeric", qres.error_estimate / np.pi)


# --- damped k-space route ---------------------------------------------------

# Taylor coefficients of the damped-law bracket B(x)/x^7 around x = 0, where
# B(x) = (23/32) atan(x) - N(x)/(480 (1+x^2)^5); even powers x^{2m}, m = 0...
_BRACKET_SERIES = np.array([
    3 / 7, -20 / 9, 78 / 11, -228 / 13, 553 / 15, -1176 / 17, 2268 / 19,
    -4056 / 21, 297.0, -10956 / 25, 16874 / 27, -25116 / 29, 36309 / 31,
    -51184 / 33, 70584 / 35, -95472 / 37, 126939 / 39, -166212 / 41,
])


def _schwinger_bracket_over_x7(x):
    """B(x)/x^7, stable for all x >= 0 (series below x = 0.25)."""
    x = np.asarray(x, float)
    small = x < 0.25
    xs = np.where(small, 0.0, x)
    x2 = x * x
    num = xs * (345.0 + x2 * (1610.0 + x2 * (2944.0 + x2 * (2390.0 + x2 * 1095.0))))
    with np.errstate(invalid="ignore", divide="ignore"):
        closed = (23.0 / 32.0 * np.arctan(xs) - num / (480.0 * (1.0 + x2) ** 5)) \
            / np.where(small, 1.0, xs) ** 7
    series = np.polynomial.polynomial.polyval(np.where(small, x2, 0.0), _BRACKET_SERIES)
    return np.where(small, series, closed)


def damped_pair_law(r, lam: float, alpha: float = 1.0):
    """Closed form of the T = 0 pair energy with wave-number damping e^{-lam k}.

    Obtained from the k-space double integral by trading 1/(k+k') for an
    integral over the damping parameter; reduces to the bare pair law as
    lam -> 0 and stays finite at r = 0 (value -48 alpha^2/(7 pi^2 lam^7)).
    ``r`` may be an array.
    """
    if lam <= 0.0:
        raise ValueError("lam must be positive")
    r = np.asarray(r, float)
    if np.any(r < 0.0):
        raise ValueError("r must be non-negative")
    out = -16.0 * alpha**2 / np.pi**2 * _schwinger_bracket_over_x7(r / lam) / lam**7
    return float(out) if out.ndim == 0 else out


def _kspace_quadrature(r: float, alpha: float, lam: float, order: int) -> float:
    """Panel-Gauss evaluation of the reduced (k, k') double integral."""
    kmax = 45.0 / lam
    dk = min(np.pi / r, 0.5 / lam)
    edges = np.linspace(0.0, kmax, max(8, int(np.ceil(kmax / dk))) + 1)
    k, w = gauss_panels(edges, order)
    damp = w * k**3 * np.exp(-lam * k)
    a0 = damp * spherical_jn(0, k * r)
    a2 = damp * spherical_jn(2, k * r)
    total = 0.0
    chunk = 2048
    for i0 in range(0, len(k), chunk):
        sl = slice(i0, min(i0 + chunk, len(k)))
        inv = 1.0 / (k[sl, None] + k[None, :])
        total += a2[sl] @ inv @ a2 + 2.0 * (a0[sl] @ inv @ a0)
    return -2.0 * alpha**2 / (3.0 * np.pi**2) * total


def kspace_pair_energy(r: float, alpha: float, lam: float,
                       tol: float = 1e-8) -> PairEnergy:
    """T = 0 pair energy from the damped k-space double integral.

    2D composite Gauss quadrature with order refinement until two
    consecutive refinements agree within ``tol`` (relative).  The lam = 0
    value is only reachable by extrapolation; see
    :func:`kspace_pair_energy_lambda0`.
    """
    if r <= 0.0 or lam <= 0.0:
        raise ValueError("r and lam must be positive")
    orders = (8, 12, 16, 22)
    prev = _kspace_quadrature(r, alpha, lam, orders[0])
    for order in orders[1:]:
        cur = _kspace_quadrature(r, alpha, lam, order)
        err = abs(cur - prev)
        if err <= tol * max(abs(cur), 1e-300):
            return PairEnergy(cur, "k-space", err)
        prev = cur
    raise QuadratureError(
        f"k-space quadrature not converged at order {orders[-1]} "
        f"(r={r}, lam={lam}, last change {err:.2e})")


def kspace_pair_energy_lambda0(r: float, alpha: float,
                               lams: tuple[float, ...] | None = None,
                               tol: float = 1e-8) -> PairEnergy:
    """lam -> 0 limit of the k-space route by Richardson extrapolation.

    Defaults to geometric damping values (0.1, 0.05, 0.025) * r and the
    error orders (1, 3) implied by the odd small-lam structure of the
    damped law.
    """
    if lams is None:
        lams = (0.1 * r, 0.05 * r, 0.025 * r)
    samples = []
    qerr = 0.0
    for lam in sorted(lams, reverse=True):
        pe = kspace_pair_energy(r, alpha, lam, tol)
        samples.append((lam, pe.value))
        qerr = max(qerr, pe.error_estimate)
    limit, rerr = richardson_extrapolate(samples, order_hypothesis=(1.0, 3.0))
    return PairEnergy(limit, "k-space", rerr + qerr)
