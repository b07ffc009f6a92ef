"""Shared numerical infrastructure.

Adaptive quadrature (1D via QUADPACK, 2D/3D by nesting), Richardson
extrapolation, weighted linear least squares, Wynn's epsilon algorithm for
accelerating alternating sequences, and seeded RNG construction for the
Monte Carlo test oracles.

All routines are deterministic: identical inputs and tolerances produce
bit-identical results.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad


class QuadratureError(RuntimeError):
    """Quadrature failed to reach the requested tolerance."""


class FitError(RuntimeError):
    """Least-squares fit is rank deficient or otherwise unusable."""


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    cells_evaluated: int


@dataclass(frozen=True)
class FitResult:
    coefficients: np.ndarray
    condition_number: float
    residual_norm: float
    singular_values: np.ndarray


def _map_semi_infinite(lo: float, scale: float):
    """Map (lo, inf) to t in (0, 1) via x = lo + scale*t/(1-t)."""

    def fwd(t):
        return lo + scale * t / (1.0 - t)

    def jac(t):
        return scale / (1.0 - t) ** 2

    return fwd, jac


def _quad_1d(f, lo, hi, epsabs, epsrel, scale, points=None, limit=400):
    if np.isinf(hi):
        fwd, jac = _map_semi_infinite(lo, scale)
        g = lambda t: f(fwd(t)) * jac(t)
        val, err, info = quad(g, 0.0, 1.0, epsabs=epsabs, epsrel=epsrel,
                              limit=limit, full_output=True)[:3]
    else:
        kw = {"points": points} if points else {}
        val, err, info = quad(f, lo, hi, epsabs=epsabs, epsrel=epsrel,
                              limit=limit, full_output=True, **kw)[:3]
    return val, err, int(info["last"])


def integrate_adaptive(
    f: Callable,
    domain: Sequence[tuple[float, float]],
    tol: float = 1e-10,
    *,
    tail_scale: float | Sequence[float] = 1.0,
    points: Sequence[float] | None = None,
    limit: int = 400,
) -> QuadratureResult:
    """Adaptively integrate ``f`` over a 1- to 3-dimensional box.

    ``domain`` is a sequence of (lo, hi) pairs, one per dimension; an upper
    bound of ``inf`` is mapped to (0, 1) via x = lo + s*t/(1-t) with the
    declared scale ``tail_scale`` (per dimension if a sequence is given).
    ``points`` marks known awkward spots of a finite 1D integrand.

    The tolerance is interpreted as a relative target with an absolute
    floor of the same magnitude.  Raises :class:`QuadratureError` when the
    achieved error estimate exceeds the target by more than a factor 10
    (the partial result and its honest error bar ride along in the
    exception).
    """
    dims = list(domain)
    if not 1 <= len(dims) <= 3:
        raise ValueError(f"domain must be 1-3 dimensional, got {len(dims)}")
    scales = np.broadcast_to(np.asarray(tail_scale, float), (len(dims),))

    cells = [0]

    def nest(level: int, coords: tuple) -> tuple[float, float]:
        lo, hi = dims[level]
        eps_here = tol / (3.0 ** (len(dims) - 1))
        if level == len(dims) - 1:
            g = lambda x: f(*coords, x) if coords else f(x)
            val, err, n = _quad_1d(g, lo, hi, eps_here, eps_here, scales[level],
                                   points=points if not coords else None,
                                   limit=limit)
            cells[0] += n
            return val, err
        inner_err = [0.0]

        def g(x):
            v, e = nest(level + 1, coords + (x,))
            inner_err[0] = max(inner_err[0], e)
            return v

        val, err, n = _quad_1d(g, lo, hi, eps_here, eps_here, scales[level],
                               limit=limit)
        cells[0] += n
        width = (hi - lo) if np.isfinite(hi) else scales[level] * 20.0
        return val, err + abs(width) * inner_err[0]

    value, err = nest(0, ())
    result = QuadratureResult(value, err, cells[0])
    if err > 10.0 * tol * max(abs(value), 1.0):
        raise QuadratureError(
            f"quadrature error {err:.3e} exceeds tolerance {tol:.3e} "
            f"(value {value:.6e}, cells {cells[0]})")
    return result


def richardson_extrapolate(
    samples: Sequence[tuple[float, float]],
    order_hypothesis: Sequence[float],
) -> tuple[float, float]:
    """Extrapolate samples (h, value) to h -> 0.

    ``order_hypothesis`` lists the error-term exponents to eliminate; with
    n samples at geometrically spaced h, up to n-1 orders can be removed by
    solving v(h) = L + sum_j c_j h^p_j exactly.  The error estimate is the
    shift of the limit when the coarsest sample is dropped; non-monotone
    approach of the samples toward the limit raises ``ValueError``.
    """
    pts = sorted(samples, key=lambda s: -s[0])
    if len(pts) < 3:
        raise ValueError("need at least 3 samples")
    orders = list(order_hypothesis)
    if len(orders) > len(pts) - 1:
        raise ValueError("more orders than samples can resolve")
    hs = np.array([p[0] for p in pts])
    ratios = hs[:-1] / hs[1:]
    if not np.allclose(ratios, ratios[0], rtol=1e-6):
        raise ValueError("samples must be geometrically spaced in h")

    def solve(sub):
        h = np.array([p[0] for p in sub])
        v = np.array([p[1] for p in sub])
        m = len(orders)
        cols = [np.ones_like(h)] + [h ** p for p in orders[: len(sub) - 1]]
        A = np.column_stack(cols[: min(len(sub), m + 1)])
        sol, *_ = np.linalg.lstsq(A, v, rcond=None)
        return sol[0]

    limit = solve(pts)
    limit_drop = solve(pts[1:])
    err = abs(limit - limit_drop)

    gaps = np.abs(np.array([p[1] for p in pts]) - limit)
    if np.any(np.diff(gaps) > gaps[:-1] * 1.5 + 10 * err):
        raise ValueError("non-monotone convergence toward the extrapolated limit")
    return float(limit), float(err)


def linear_fit(
    basis: Sequence[Callable[[np.ndarray], np.ndarray]],
    samples: Sequence[tuple[float, float]],
    weights: np.ndarray | None = None,
) -> FitResult:
    """Weighted least squares with per-column normalisation.

    ``basis`` holds callables evaluated on the sample abscissae.  Columns
    are scaled to unit norm before solving so the reported condition number
    reflects geometry, not units.  Raises :class:`FitError` on rank
    deficiency.
    """
    samples = list(samples)
    if len(samples) <= len(basis):
        raise FitError(f"need more samples ({len(samples)}) than basis "
                       f"functions ({len(basis)})")
    x = np.array([s[0] for s in samples], float)
    y = np.array([s[1] for s in samples], float)
    w = np.ones_like(y) if weights is None else np.asarray(weights, float)
    A = np.column_stack([np.asarray(b(x), float) for b in basis]) * w[:, None]
    yw = y * w
    col_scale = np.linalg.norm(A, axis=0)
    if np.any(col_scale == 0.0):
        raise FitError("zero basis column (rank deficient)")
    As = A / col_scale
    sv = np.linalg.svd(As, compute_uv=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else np.inf
    if sv[-1] < 1e3 * np.finfo(float).eps * sv[0] * max(As.shape):
        raise FitError(f"ill-conditioned fit, condition number {cond:.3e}")
    coef, _, rank, _ = np.linalg.lstsq(As, yw, rcond=None)
    if rank < len(basis):
        raise FitError(f"rank deficient fit (rank {rank} < {len(basis)})")
    resid = float(np.linalg.norm(As @ coef - yw))
    return FitResult(coef / col_scale, cond, resid, sv)


def wynn_epsilon(partial_sums: Sequence[float]) -> tuple[float, float]:
    """Accelerate a (possibly oscillation-divergent) sequence of partial sums.

    Wynn's epsilon algorithm; returns the deepest stable even-column entry
    and the spread of the last few estimates as an error measure.  Entries
    destroyed by vanishing differences are dropped rather than propagated.
    """
    cur = np.asarray(partial_sums, dtype=float)
    prev = np.zeros(len(cur) + 1)
    estimates = [cur[-1]]
    for m in range(1, len(partial_sums)):
        d = cur[1:] - cur[:-1]
        with np.errstate(divide="ignore", invalid="ignore"):
            nxt = prev[1:len(cur)] + 1.0 / d
        ok = np.isfinite(nxt)
        if not np.any(ok):
            break
        prev, cur = cur, nxt[: np.max(np.nonzero(ok)) + 1]
        if not np.all(np.isfinite(cur)):
            cur = cur[np.isfinite(cur)]
        if len(cur) == 0:
            break
        if m % 2 == 0:
            estimates.append(cur[-1])
    if len(estimates) >= 3:
        tail = estimates[-3:]
        err = max(abs(tail[-1] - tail[-2]), abs(tail[-2] - tail[-3]))
    elif len(estimates) == 2:
        err = abs(estimates[-1] - estimates[-2])
    else:
        err = np.inf
    return float(estimates[-1]), float(err)


def gauss_panels(edges: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes/weights on the panels given by ``edges``."""
    x, w = np.polynomial.legendre.leggauss(order)
    lo = edges[:-1, None]
    hi = edges[1:, None]
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    nodes = (mid + half * x[None, :]).ravel()
    weights = (half * w[None, :]).ravel()
    return nodes, weights


def sampling_rng(seed: int) -> np.random.Generator:
    """Seeded generator for Monte Carlo oracles (tests only, never shipped numbers)."""
    return np.random.default_rng(seed)
