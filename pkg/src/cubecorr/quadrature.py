"""Adaptive Simpson quadrature over [0, inf) with explicit tail truncation."""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass, replace


class QuadratureError(RuntimeError):
    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved error estimate {achieved:.3e})")
        self.achieved = achieved


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for the semi-infinite integrals.

    The truncation horizon is ``max(min_horizon, log(scale / eps) + 1)`` where
    ``scale`` bounds the integrand by ``scale * exp(-t)`` and ``eps`` is the
    absolute tolerance, so the discarded tail stays below ``eps``.
    """

    rel_tol: float = 1e-9
    abs_floor: float = 1e-15
    min_horizon: float = 40.0
    max_depth: int = 50
    panels: int = 32
    min_depth: int = 4

    def tightened(self, factor: float = 10.0) -> QuadratureSpec:
        return replace(self, rel_tol=self.rel_tol / factor, abs_floor=self.abs_floor / factor)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error: float
    horizon: float
    evaluations: int
    tolerance: float


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
    max_depth: int = 50,
    min_depth: int = 0,
) -> tuple[float, float, int]:
    """Integrate ``f`` over [a, b] to absolute tolerance ``tol``.

    Every interval is bisected at least ``min_depth`` times, since the
    Richardson error estimate is unreliable before the step is small.
    Returns (value, error estimate, evaluations). Raises QuadratureError if an
    interval at ``max_depth`` still misses its share of the tolerance.
    """
    if a == b:
        return 0.0, 0.0, 0
    fa, fm, fb = f(a), f((a + b) / 2), f(b)
    evals = 3
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    total = 0.0
    err = 0.0
    while stack:
        lo, hi, flo, fmid, fhi, s, eps, depth = stack.pop()
        mid = (lo + hi) / 2
        fl, fr = f((lo + mid) / 2), f((mid + hi) / 2)
        evals += 2
        left = (mid - lo) / 6 * (flo + 4 * fl + fmid)
        right = (hi - mid) / 6 * (fmid + 4 * fr + fhi)
        delta = left + right - s
        if depth >= min_depth and abs(delta) <= 15 * eps:
            total += left + right + delta / 15
            err += abs(delta) / 15
        elif depth >= max_depth:
            raise QuadratureError(f"no convergence on [{lo:.6g}, {hi:.6g}] at depth {depth}", err + abs(delta) / 15)
        else:
            stack.append((mid, hi, fmid, fr, fhi, right, eps / 2, depth + 1))
            stack.append((lo, mid, flo, fl, fmid, left, eps / 2, depth + 1))
    return total, err, evals


def integrate_half_line(
    f: Callable[[float], float],
    scale: float,
    spec: QuadratureSpec = QuadratureSpec(),
) -> QuadratureResult:
    """Integral of ``f`` over [0, inf), where ``|f(t)| <= scale * exp(-t)``.

    The tolerance is relative to ``scale``. The range [0, T] is cut into
    geometrically growing panels since these integrands live near t = 0.
    """
    eps = max(spec.rel_tol * abs(scale), spec.abs_floor)
    horizon = spec.min_horizon
    if scale > 0:
        horizon = max(horizon, math.log(abs(scale) / eps) + 1.0)
    edges = [0.0] + [horizon * (2.0 ** (k - spec.panels + 1)) for k in range(spec.panels)]
    # the tail beyond T takes at most exp(-1) * eps; panels share the rest
    budget = eps * (1 - math.exp(-1.0))
    total = err = 0.0
    evals = 0
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e, k = adaptive_simpson(f, lo, hi, budget * (hi - lo) / horizon, spec.max_depth, spec.min_depth)
        total += v
        err += e
        evals += k
    return QuadratureResult(total, err, horizon, evals, eps)
