"""Closed-form rounding constants and the q-vs-p tradeoff curve.

Everything here is computed from scratch; no constant is hard-coded.  The
basic object is the sign-correlation function K(t) = (2/pi) arcsin(t) of
Gaussian hyperplane rounding.  The worst-case edge ratios

    R_A(t) = (1 + K(t)) / (1 + t)                       (pure-z rounding)
    R_B(t) = (1 + t^2 K(t)) / (1 + t)                   (field-matched rounding)
    R_C(t; q) = (1 + ((1 - q^2) + q^2 t^2) K(t)) / (1 + t)   (interpolated)

are minimized over t in [0, 1]; R_C reduces to R_A at q = 0 and to R_B at
q = 1.  The balanced scaling q* solves beta(q) = (1 + q) / 2, and the
resulting guarantee as a function of the edge share p of the relaxation
value is Q(p, q) = p beta(q) + (1 - p)(1 + q)/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "CurvePoint",
    "k_of_t",
    "r_a",
    "r_b",
    "alpha_gw",
    "beta_of_q",
    "q_star",
    "warmup_ratio",
    "two_candidate_gamma",
    "p_star",
    "q_value",
    "q_opt_for_p",
    "q_opt_curve",
    "constants_summary",
]

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
GRID_POINTS = 2001
GOLDEN_WIDTH = 1e-10


def k_of_t(t):
    """Expected sign product (2/pi) arcsin(t) of hyperplane rounding; odd in t."""
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0):
        raise ValueError("k_of_t requires |t| <= 1")
    out = (2.0 / np.pi) * np.arcsin(t)
    return float(out) if out.ndim == 0 else out


def _r_interp(t, q: float):
    return (1.0 + ((1.0 - q * q) + q * q * np.asarray(t) ** 2) * k_of_t(t)) / (1.0 + np.asarray(t))


def r_a(t):
    """Worst-case edge ratio of pure-z rounding at correlation t."""
    return _r_interp(t, 0.0)


def r_b(t):
    """Worst-case edge ratio of the field-matched rounding at correlation t."""
    return _r_interp(t, 1.0)


def _golden_min(f, a: float, b: float, width: float) -> tuple[float, float]:
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > width:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    mid = 0.5 * (a + b)
    return mid, f(mid)


def _grid_golden_min(f, a: float, b: float, grid: int, width: float) -> tuple[float, float]:
    """Grid scan to bracket the global minimum, then golden-section refinement."""
    ts = np.linspace(a, b, grid)
    k = int(np.argmin(f(ts)))
    lo = ts[max(k - 1, 0)]
    hi = ts[min(k + 1, grid - 1)]
    return _golden_min(lambda t: float(f(t)), float(lo), float(hi), width)


@lru_cache(maxsize=None)
def beta_of_q(q: float, grid: int = GRID_POINTS) -> tuple[float, float]:
    """(min over t in [0,1] of R_C(t; q), argmin t).

    beta_of_q(0) is the hyperplane-rounding constant ~0.878567 and
    beta_of_q(1) ~0.716775 with argmin t ~0.58.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    argmin, val = _grid_golden_min(lambda t: _r_interp(t, q), 0.0, 1.0, grid, GOLDEN_WIDTH)
    return val, argmin


def alpha_gw() -> tuple[float, float]:
    """(min of R_A over [0, 1], argmin t); value ~0.878567."""
    return beta_of_q(0.0)


@lru_cache(maxsize=None)
def q_star(tol: float = 1e-8) -> float:
    """Root of beta(q) = (1 + q)/2 by bisection; ~0.6312.

    The bracket is valid because beta(0) - 1/2 > 0 and beta(1) - 1 < 0.
    """
    lo, hi = 0.0, 1.0
    if not (beta_of_q(lo)[0] > (1 + lo) / 2 and beta_of_q(hi)[0] < (1 + hi) / 2):
        raise RuntimeError("bisection bracket failed; beta(q) is off")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if beta_of_q(mid)[0] > (1.0 + mid) / 2.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def warmup_ratio(alpha: float | None = None) -> float:
    """Guarantee 1 - 1/(4 alpha) of the best-of-two warm-up; ~0.7154457."""
    if alpha is None:
        alpha = alpha_gw()[0]
    return 1.0 - 1.0 / (4.0 * alpha)


def p_star(alpha: float | None = None, beta: float | None = None) -> float:
    """Edge share where the two candidate guarantees cross."""
    if alpha is None:
        alpha = alpha_gw()[0]
    if beta is None:
        beta = beta_of_q(1.0)[0]
    return 0.5 / (alpha + 0.5 - beta)


def two_candidate_gamma(alpha: float | None = None, beta: float | None = None) -> float:
    """Best-of-two guarantee 1/2 + (alpha - 1/2) / (2 (alpha + 1/2 - beta)); ~0.786016.

    Identical to 1 - (1 - beta) p_star; both forms are evaluated and must
    agree to 1e-12.
    """
    if alpha is None:
        alpha = alpha_gw()[0]
    if beta is None:
        beta = beta_of_q(1.0)[0]
    gamma = 0.5 + 0.5 * (alpha - 0.5) / (alpha + 0.5 - beta)
    alt = 1.0 - (1.0 - beta) * p_star(alpha, beta)
    if abs(gamma - alt) > 1e-12:
        raise RuntimeError(f"crossing identity violated: {gamma} vs {alt}")
    return gamma


def q_value(p: float, q: float) -> float:
    """Guaranteed ratio Q(p, q) = p beta(q) + (1 - p)(1 + q)/2."""
    return p * beta_of_q(q)[0] + (1.0 - p) * (1.0 + q) / 2.0


def q_opt_for_p(p: float, width: float = 1e-6) -> tuple[float, float]:
    """(argmax over q in [0, 1] of Q(p, .), max value).

    Q(p, .) is concave (a minimum of functions affine in q^2 plus an affine
    term), so golden-section search plus an endpoint comparison suffices.
    """
    q_in, val_in = _golden_min(lambda q: -q_value(p, q), 0.0, 1.0, width)
    best_q, best_v = q_in, -val_in
    for q_end in (0.0, 1.0):
        v = q_value(p, q_end)
        if v >= best_v:
            best_q, best_v = q_end, v
    return best_q, best_v


@dataclass(frozen=True)
class CurvePoint:
    p: float
    q_opt: float
    ratio: float


def q_opt_curve(grid: int = 1001) -> list[CurvePoint]:
    """Optimal scaling and resulting guarantee on a uniform p grid.

    The curve sits at q_opt = 1 for small p, leaves 1 near p ~ 0.602, passes
    through q* near p ~ 0.7094, and its minimum ratio equals beta(q*).
    """
    if grid < 2:
        raise ValueError("grid must be >= 2")
    points = []
    for p in np.linspace(0.0, 1.0, grid):
        q, v = q_opt_for_p(float(p))
        points.append(CurvePoint(float(p), q, v))
    return points


def constants_summary() -> dict:
    """All headline constants in one flat mapping."""
    a, ta = alpha_gw()
    b, tb = beta_of_q(1.0)
    qs = q_star()
    return {
        "alpha_gw": a,
        "alpha_gw_argmin_t": ta,
        "beta": b,
        "beta_argmin_t": tb,
        "q_star": qs,
        "ratio_c": beta_of_q(qs)[0],
        "gamma_warmup": warmup_ratio(),
        "gamma_two": two_candidate_gamma(),
        "p_star": p_star(),
    }
