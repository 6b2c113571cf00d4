"""Classical solutions of the flat-plate similarity equation, used as oracles.

Two independent routes to f''' + (1/2) f f'' = 0 with f(0) = f'(0) = 0 and
f'(inf) = 1:

* a wall power series whose integer coefficients A_k obey an exact recurrence,
  valid inside its finite convergence region near the wall;
* fixed-step classical RK4 integration of the initial-value problem, wrapped
  in a bisection shoot on the wall curvature sigma = f''(0).

The two agree to well below 1e-6 where both apply, which is what makes them
usable as cross-checks for the trained network.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .profiles import SolutionProfile

__all__ = [
    "SeriesCoefficients",
    "SeriesNotConvergedError",
    "IntegrationError",
    "BracketError",
    "series_coefficients",
    "series_eval",
    "series_tail_estimate",
    "rk4_profile",
    "shoot",
]

TAIL_TOLERANCE = 1e-9  # truncation gate: |last term| vs |partial sum|


class SeriesNotConvergedError(RuntimeError):
    """Partial sum rejected: the last term is too large relative to the sum."""


class IntegrationError(RuntimeError):
    """RK4 state stopped being finite."""


class BracketError(RuntimeError):
    """Shooting bracket invalid or bisection failed to converge."""


@dataclass(frozen=True)
class SeriesCoefficients:
    """Integer wall-series coefficients, optionally tagged with the sigma they serve."""

    a: tuple[int, ...]
    sigma: float | None = None


def series_coefficients(k_max: int) -> SeriesCoefficients:
    """A_0..A_k_max by the exact recurrence, in unbounded integer arithmetic.

    A_0 = A_1 = 1 and
        A_k = sum_{r=0}^{k-1} C(3k-1, 3r) A_r A_{k-r-1}.
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    a = [1, 1]
    for k in range(2, k_max + 1):
        a.append(sum(math.comb(3 * k - 1, 3 * r) * a[r] * a[k - r - 1] for r in range(k)))
    return SeriesCoefficients(a=tuple(a[: k_max + 1]))


def _series_terms(sigma: float, eta: float, k_max: int) -> list[float]:
    coeffs = series_coefficients(k_max).a
    terms = []
    for k, a_k in enumerate(coeffs):
        # exact rational prefactor, converted to float once
        prefactor = float(Fraction((-1) ** k * a_k, 2**k * math.factorial(3 * k + 2)))
        terms.append(prefactor * sigma ** (k + 1) * eta ** (3 * k + 2))
    return terms


def series_eval(sigma: float, eta: float, k_max: int) -> float:
    """Partial sum f(eta) = sum_k (-1/2)^k A_k sigma^(k+1) eta^(3k+2) / (3k+2)!.

    Raises SeriesNotConvergedError when the final term exceeds 1e-9 of the
    partial sum in magnitude (the series has a finite convergence region; do
    not trust it far from the wall).
    """
    if eta < 0.0:
        raise ValueError("eta must be non-negative")
    terms = _series_terms(sigma, eta, k_max)
    total = math.fsum(terms)
    tail = abs(terms[-1])
    if not math.isfinite(total) or tail > TAIL_TOLERANCE * abs(total):
        raise SeriesNotConvergedError(
            f"series tail {tail:.3e} exceeds {TAIL_TOLERANCE:.0e} of |sum| at eta = {eta}")
    return total


def series_tail_estimate(sigma: float, eta: float, k_max: int) -> float:
    """Magnitude of the k_max term: the truncation estimate behind series_eval's gate."""
    if eta < 0.0:
        raise ValueError("eta must be non-negative")
    return abs(_series_terms(sigma, eta, k_max)[-1])


def rk4_profile(sigma0: float, eta_max: float, step: float = 1e-3) -> SolutionProfile:
    """Integrate (f, f', f'') from (0, 0, sigma0) with fixed-step classical RK4.

    Emits a row at every grid point i*step (plus eta_max itself when the step
    does not divide it exactly).
    """
    sigma0 = float(sigma0)
    if not math.isfinite(sigma0) or sigma0 < 0.0:
        raise ValueError("sigma0 must be finite and non-negative")
    if not (math.isfinite(eta_max) and eta_max > 0.0):
        raise ValueError("eta_max must be positive")
    if not (math.isfinite(step) and step > 0.0):
        raise ValueError("step must be positive")

    n_full = int(math.floor(eta_max / step + 1e-12))
    remainder = eta_max - n_full * step
    has_tail = remainder > 1e-12 * max(1.0, eta_max)
    count = n_full + 1 + (1 if has_tail else 0)

    eta = np.empty(count)
    f_col = np.empty(count)
    fp_col = np.empty(count)
    fpp_col = np.empty(count)
    f, g, h = 0.0, 0.0, sigma0
    eta[0], f_col[0], fp_col[0], fpp_col[0] = 0.0, f, g, h
    idx = 1
    step_sizes = [step] * n_full + ([remainder] if has_tail else [])
    for i, dt in enumerate(step_sizes):
        f, g, h = _rk4_step(f, g, h, dt)
        if not math.isfinite(f + g + h):
            raise IntegrationError(f"state non-finite near eta = {idx * step}")
        eta[idx] = (i + 1) * step if idx <= n_full else eta_max
        f_col[idx], fp_col[idx], fpp_col[idx] = f, g, h
        idx += 1
    return SolutionProfile(eta=eta, f=f_col, fp=fp_col, fpp=fpp_col)


def _rk4_step(f: float, g: float, h: float, dt: float) -> tuple[float, float, float]:
    # y' = (g, h, -f h / 2), classical four-stage step
    half = 0.5 * dt
    k1f, k1g, k1h = g, h, -0.5 * f * h
    f2, g2, h2 = f + half * k1f, g + half * k1g, h + half * k1h
    k2f, k2g, k2h = g2, h2, -0.5 * f2 * h2
    f3, g3, h3 = f + half * k2f, g + half * k2g, h + half * k2h
    k3f, k3g, k3h = g3, h3, -0.5 * f3 * h3
    f4, g4, h4 = f + dt * k3f, g + dt * k3g, h + dt * k3h
    k4f, k4g, k4h = g4, h4, -0.5 * f4 * h4
    sixth = dt / 6.0
    return (
        f + sixth * (k1f + 2.0 * k2f + 2.0 * k3f + k4f),
        g + sixth * (k1g + 2.0 * k2g + 2.0 * k3g + k4g),
        h + sixth * (k1h + 2.0 * k2h + 2.0 * k3h + k4h),
    )


def _far_slope(sigma0: float, eta_far: float, step: float) -> float:
    """f'(eta_far) for the IVP started at curvature sigma0 (no row storage)."""
    n_full = int(math.floor(eta_far / step + 1e-12))
    remainder = eta_far - n_full * step
    f, g, h = 0.0, 0.0, sigma0
    for _ in range(n_full):
        f, g, h = _rk4_step(f, g, h, step)
    if remainder > 1e-12 * max(1.0, eta_far):
        f, g, h = _rk4_step(f, g, h, remainder)
    if not math.isfinite(f + g + h):
        raise IntegrationError(f"state non-finite integrating to eta = {eta_far}")
    return g


def shoot(eta_far: float = 10.0, tol: float = 1e-10, step: float = 1e-3) -> float:
    """Wall curvature sigma = f''(0) by bisection on f'(eta_far) - 1.

    The bracket is fixed at sigma in [0.1, 1.0]; f'(eta_far) is increasing in
    sigma, so a valid problem gives opposite signs at the ends.
    """
    if eta_far < 8.0:
        raise ValueError("eta_far must be at least 8 for a far-field slope to make sense")
    if not (math.isfinite(tol) and tol > 0.0):
        raise ValueError("tol must be positive")
    if not (math.isfinite(step) and step > 0.0):
        raise ValueError("step must be positive")
    lo, hi = 0.1, 1.0
    g_lo = _far_slope(lo, eta_far, step) - 1.0
    g_hi = _far_slope(hi, eta_far, step) - 1.0
    if g_lo >= 0.0 or g_hi <= 0.0:
        raise BracketError(
            f"bracket [{lo}, {hi}] does not straddle the target slope "
            f"(ends give {g_lo:+.3e}, {g_hi:+.3e})")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        g_mid = _far_slope(mid, eta_far, step) - 1.0
        if abs(g_mid) <= tol:
            return mid
        if g_mid < 0.0:
            lo = mid
        else:
            hi = mid
    raise BracketError(f"bisection failed to reach |f'({eta_far}) - 1| <= {tol}")
