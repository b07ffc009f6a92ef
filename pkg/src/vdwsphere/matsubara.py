"""Matsubara frequency grids, summation engine, and the T -> 0 limit.

Thermal equilibrium sums run over the even imaginary frequencies
K_n = 2 pi n / beta, n = 0, +-1, +-2, ... (hbar = c = 1, so beta carries
units of length and K_n of inverse length).  The n = 0 term enters with
full weight; that choice reproduces the classical high-temperature limit
where only the static term survives.

The engine sums symmetrically with adaptive truncation.  The tail beyond
the truncation index is estimated from a two-parameter power fit c/K^p
over the final decade of terms; with ``tail_policy="power"`` (default) the
estimated tail is added to the sum, with ``"none"`` it is only reported as
the truncation error.  The power fit is a documented heuristic and carries
its own error bar.  Term evaluation is vectorised (summand callables
receive numpy arrays of K >= 0) and blocks are reduced with numpy's
pairwise summation in a fixed order, so results are bit-for-bit
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np
from scipy.special import zeta

from .numerics import integrate_adaptive

MAX_INDEX_HARD_CAP = 10_000_000


class ConvergenceError(RuntimeError):
    """The adaptive sum did not converge within the index cap."""


@dataclass(frozen=True)
class ThermalState:
    """Inverse temperature and truncation policy for Matsubara sums."""

    beta: float
    max_index: int = MAX_INDEX_HARD_CAP
    tail_policy: Literal["power", "none"] = "power"

    def __post_init__(self):
        if not (np.isfinite(self.beta) and self.beta > 0.0):
            raise ValueError(f"beta must be positive and finite, got {self.beta}")
        if self.max_index > MAX_INDEX_HARD_CAP:
            raise ValueError(f"max_index exceeds hard cap {MAX_INDEX_HARD_CAP}")

    def frequency(self, n) -> np.ndarray:
        """Matsubara frequency K_n = 2 pi n / beta."""
        return 2.0 * np.pi * np.asarray(n, float) / self.beta


@dataclass(frozen=True)
class SumResult:
    value: float
    truncation_error_estimate: float
    terms_used: int


def oscillator_sum_closed(beta: float, hbar_omega0: float) -> float:
    """Closed form of sum_K w0^2/(w0^2 + K^2) for a harmonic mode.

    Equals (beta w0/2) coth(beta w0/2); -> 1 as beta w0 -> 0 and
    -> beta w0/2 for beta w0 >> 1 (overflow-safe via tanh saturation).
    """
    if beta <= 0.0:
        raise ValueError("beta must be positive")
    if hbar_omega0 < 0.0:
        raise ValueError("hbar_omega0 must be non-negative")
    x = 0.5 * beta * hbar_omega0
    if x == 0.0:
        return 1.0
    return x / np.tanh(x)


def _fit_power_tail(state: ThermalState, f: Callable, n_lo: int, n_hi: int):
    """Fit |f(K)| ~ c K^-p over indices [n_lo, n_hi]; return (log_c, p, rms)."""
    idx = np.unique(np.geomspace(max(n_lo, 1), n_hi, 96).astype(np.int64))
    terms = np.abs(np.asarray(f(state.frequency(idx)), float))
    keep = terms > 0.0
    if np.count_nonzero(keep) < 8:
        return None  # terms numerically dead; tail is zero
    logk = np.log(state.frequency(idx[keep]))
    logt = np.log(terms[keep])
    A = np.column_stack([np.ones_like(logk), -logk])
    coef, *_ = np.linalg.lstsq(A, logt, rcond=None)
    rms = float(np.sqrt(np.mean((A @ coef - logt) ** 2)))
    return float(coef[0]), float(coef[1]), rms


def _power_sum(state: ThermalState, fit, n_from: int, n_to: int | None) -> float:
    """2 sum_{n_from < n <= n_to} c K_n^-p under the fitted power law (in logs)."""
    log_c, p, _ = fit
    z = zeta(p, n_from + 1) - (zeta(p, n_to + 1) if n_to is not None else 0.0)
    if z <= 0.0:
        return 0.0
    log_s = np.log(2.0) + log_c - p * np.log(2.0 * np.pi / state.beta) + np.log(z)
    if log_s > 700.0:
        raise ConvergenceError(f"tail estimate overflows (log {log_s:.1f})")
    return float(np.exp(log_s))


def matsubara_sum(f: Callable, state: ThermalState, rtol: float = 1e-10) -> SumResult:
    """Adaptive symmetric Matsubara sum of an even, decaying summand.

    ``f`` must accept numpy arrays of K >= 0 and decay at least as K^-2.
    The tail beyond the truncation is extrapolated from the power fit; its
    uncertainty is measured by fitting one decade back and comparing the
    prediction for the newest block against the exactly summed block.
    Non-convergence within ``state.max_index`` raises
    :class:`ConvergenceError` with diagnostics.
    """
    term0 = float(np.asarray(f(state.frequency(np.array([0.0]))), float).ravel()[0])
    partial = term0
    n_done = 0
    n_next = 64
    stages = 0
    eps = np.finfo(float).eps
    while True:
        n_hi = min(n_next, state.max_index)
        block = np.arange(n_done + 1, n_hi + 1, dtype=np.int64)
        block_sum = 2.0 * float(np.sum(np.asarray(f(state.frequency(block)), float)))
        n_prev, n_done = n_done, n_hi
        partial += block_sum
        stages += 1

        fit = _fit_power_tail(state, f, n_done // 10, n_done)
        if fit is None:
            tail, tail_err = 0.0, 0.0
        else:
            if fit[1] <= 1.02:
                raise ConvergenceError(
                    f"tail exponent p={fit[1]:.3f} <= 1 at N={n_done}: "
                    "summand does not decay fast enough")
            tail = _power_sum(state, fit, n_done, None)
            # split-sample check: predict the newest block from the decade
            # before it, compare against the exact block sum
            fit_back = _fit_power_tail(state, f, max(n_prev // 10, 1), n_prev)
            if fit_back is not None and fit_back[1] > 1.02 and n_prev > 0:
                predicted = _power_sum(state, fit_back, n_prev, n_done)
                bias = abs(predicted - block_sum) / max(abs(block_sum),
                                                        np.finfo(float).tiny)
            else:
                bias = 1.0
            tail_err = tail * min(1.0, 3.0 * bias + np.expm1(2.0 * fit[2]))

        if state.tail_policy == "power":
            value = partial + tail
            err = tail_err + 8.0 * eps * abs(partial)
        else:
            value = partial
            err = tail + tail_err + 8.0 * eps * abs(partial)
        scale = max(abs(value), np.finfo(float).tiny)
        if stages >= 2 and err <= rtol * scale:
            return SumResult(value, err, n_done)
        if n_done >= state.max_index:
            raise ConvergenceError(
                f"no convergence at N={n_done}: value={value:.6e}, "
                f"error={err:.3e}, target={rtol * scale:.3e}, tail={tail:.3e}")
        n_next *= 4


def zero_T_integral(g: Callable, tol: float = 1e-10, *, scale: float = 1.0,
                    full_output: bool = False):
    """beta -> infinity limit of (1/beta) sum_K g(kappa): (1/pi) Int_0^inf g dkappa.

    ``scale`` declares the decay scale of g for the semi-infinite mapping
    kappa = scale * t/(1-t).
    """
    res = integrate_adaptive(lambda k: g(k), [(0.0, np.inf)], tol, tail_scale=scale)
    value = res.value / np.pi
    if full_output:
        return value, res
    return value
