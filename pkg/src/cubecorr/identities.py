"""Semigroup identities checked by quadrature against exact spectral sums.

Each check evaluates both sides by independent routes: the left side from
the Fourier spectrum of f and g, the right side from derivative tables
integrated numerically in t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .core import (
    CubeError,
    CubeFunction,
    covariance,
    fourier_transform,
    inner_product,
    level_weight_cross,
    popcounts,
    same_dimension,
    subset_mask,
)
from .inequalities import InequalityReport, _plain, level_d_constant
from .operators import (
    coordinate_sign,
    derivative,
    higher_derivative,
    noise_operator,
    restrict,
    signed_second,
)
from .quadrature import QuadratureSpec, integrate_half_line

QUAD_AGREE = 1e-8
ALGEBRAIC_AGREE = 1e-12
DEFAULT_QUAD = QuadratureSpec()


@dataclass
class IdentityReport:
    identity_id: str
    lhs: float
    rhs: float
    tolerance: float
    params: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def error(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def agrees(self) -> bool:
        return self.error <= self.tolerance

    @property
    def status(self) -> str:
        return "agrees" if self.agrees else "disagrees"

    def to_dict(self) -> dict:
        return {
            "identity_id": self.identity_id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "error": self.error,
            "tolerance": self.tolerance,
            "agrees": self.agrees,
            "status": self.status,
            "params": _plain(self.params),
            "extra": _plain(self.extra),
        }


def _level_sums(n: int, cross: np.ndarray) -> np.ndarray:
    """Collapse a per-subset vector to per-level totals."""
    return np.bincount(popcounts(n), weights=cross, minlength=n + 1)


def _noise_pairing(levels: np.ndarray, t: float) -> float:
    """sum_k levels[k] exp(-t k), i.e. sum over pairs of <a, P_t b>."""
    return float(np.dot(levels, np.exp(-t * np.arange(levels.size))))


def _derivative_cross(f: CubeFunction, g: CubeFunction, order: int) -> np.ndarray:
    """sum over |T| = order of spec(d_T f)[S] * spec(d_T g)[S], per subset S."""
    total = np.zeros(f.size)
    for T in combinations(range(1, f.n + 1), order):
        a = fourier_transform(higher_derivative(f, T)).coeffs
        b = fourier_transform(higher_derivative(g, T)).coeffs
        total += a * b
    return total


def kernel_checks(n: int, d: int = 2, quad: QuadratureSpec = DEFAULT_QUAD) -> list[dict]:
    """Per-level kernel integrals against the beta-function closed form.

    For m = d..n: int (1-e^-t)^(d-1) e^-t e^(-t(m-d)) dt = (d-1)!(m-d)!/m!.
    """
    rows = []
    for m in range(d, n + 1):
        res = integrate_half_line(
            lambda t, m=m: (1 - math.exp(-t)) ** (d - 1) * math.exp(-t * (m - d + 1)), 1.0, quad
        )
        exact = math.factorial(d - 1) * math.factorial(m - d) / math.factorial(m)
        rows.append({"m": m, "quadrature": res.value, "exact": exact, "error": abs(res.value - exact)})
    return rows


def check_heat_identity_partial(
    f: CubeFunction, g: CubeFunction, quad: QuadratureSpec = DEFAULT_QUAD, agree_tol: float = QUAD_AGREE
) -> IdentityReport:
    """W>=2 = (1/8) sum_{i<j} int (1-e^-t) e^-t E[d_ij f P_t d_ij g] dt."""
    n = same_dimension(f, g)
    lhs = level_weight_cross(fourier_transform(f), fourier_transform(g), 2)
    levels = _level_sums(n, _derivative_cross(f, g, 2))
    scale = float(np.abs(levels).sum()) / 8

    def integrand(t):
        return (1 - math.exp(-t)) * math.exp(-t) * _noise_pairing(levels, t) / 8

    res = integrate_half_line(integrand, scale, quad)
    return IdentityReport(
        "heat-partial",
        lhs,
        res.value,
        agree_tol * max(1.0, scale),
        extra={"quad_error": res.error, "horizon": res.horizon, "kernel": kernel_checks(n, 2, quad)},
    )


def check_heat_identity_D(
    f: CubeFunction, g: CubeFunction, quad: QuadratureSpec = DEFAULT_QUAD, agree_tol: float = QUAD_AGREE
) -> IdentityReport:
    """W>=2 = (1/8) sum_{i<j} int (e^t - 1) E[D_ij f P_t D_ij g] dt.

    D_ij f only has Fourier weight on sets containing i and j; the computed
    spectra are projected onto that support, since roundoff at low levels
    would otherwise be amplified by the growing kernel.
    """
    n = same_dimension(f, g)
    lhs = level_weight_cross(fourier_transform(f), fourier_transform(g), 2)
    cross = np.zeros(f.size)
    off_support = 0.0
    masks = np.arange(f.size)
    for i, j in combinations(range(1, n + 1), 2):
        e = subset_mask((i, j))
        support = (masks & e) == e
        a = fourier_transform(signed_second(f, i, j)).coeffs
        b = fourier_transform(signed_second(g, i, j)).coeffs
        off_support = max(off_support, float(np.abs(a[~support]).max()), float(np.abs(b[~support]).max()))
        cross[support] += a[support] * b[support]
    levels = _level_sums(n, cross)
    scale = float(np.abs(levels).sum()) / 8

    def integrand(t):
        # (e^t - 1) e^(-tk) = e^(-t(k-1)) - e^(-tk), written without overflow
        ks = np.arange(levels.size)
        return float(np.dot(levels, np.exp(-t * (ks - 1)) - np.exp(-t * ks))) / 8

    res = integrate_half_line(integrand, scale, quad)
    return IdentityReport(
        "heat-D",
        lhs,
        res.value,
        agree_tol * max(1.0, scale),
        extra={"quad_error": res.error, "horizon": res.horizon, "off_support_max": off_support},
    )


def check_level_d_identity(
    f: CubeFunction, g: CubeFunction, d: int, quad: QuadratureSpec = DEFAULT_QUAD, agree_tol: float = QUAD_AGREE
) -> IdentityReport:
    """W>=d = (d/4^d) sum_{|T|=d} int (1-e^-t)^(d-1) e^-t <d_T f, P_t d_T g> dt."""
    n = same_dimension(f, g)
    if not 2 <= d <= n:
        raise CubeError(f"level d={d} out of range 2..{n}")
    lhs = level_weight_cross(fourier_transform(f), fourier_transform(g), d)
    levels = _level_sums(n, _derivative_cross(f, g, d))
    weight = d / 4**d
    scale = weight * float(np.abs(levels).sum())

    def integrand(t):
        return weight * (1 - math.exp(-t)) ** (d - 1) * math.exp(-t) * _noise_pairing(levels, t)

    res = integrate_half_line(integrand, scale, quad)
    return IdentityReport(
        "level-d",
        lhs,
        res.value,
        agree_tol * max(1.0, scale),
        params={"d": d},
        extra={"quad_error": res.error, "horizon": res.horizon, "beta": kernel_checks(n, d, quad)},
    )


# -- kernel claim -------------------------------------------------------------

def kernel_integral(R: float, quad: QuadratureSpec = DEFAULT_QUAD, d: int = 2) -> float:
    """int_0^inf (1-e^-t)^(d-1) e^-t R^(-tanh(t/2)) dt; d = 2 gives I(R)."""
    if not R >= 1:
        raise CubeError(f"kernel needs R >= 1, got {R}")
    L = math.log(R)
    res = integrate_half_line(
        lambda t: (1 - math.exp(-t)) ** (d - 1) * math.exp(-t - L * math.tanh(t / 2)), 1.0, quad
    )
    return res.value


def kernel_bound_check(R: float, quad: QuadratureSpec = DEFAULT_QUAD) -> InequalityReport:
    """I(R) <= 9 / (1 + log R); the sharper constant's kernel form rides along."""
    value = kernel_integral(R, quad)
    L = math.log(R)
    sharp = (1 + math.sqrt(8)) / 2 / (1 + L)
    return InequalityReport(
        "kernel",
        True,
        value,
        9 / (1 + L),
        "upper",
        params={"R": R, "L": L},
        extra={"sharp_rhs": sharp, "sharp_slack": sharp - value},
    )


def level_d_kernel_check(R: float, d: int, quad: QuadratureSpec = DEFAULT_QUAD) -> InequalityReport:
    """(d/4^d) J_d(R) <= C_d / (1 + log R): the one-dimensional step behind the level-d bound."""
    value = d / 4**d * kernel_integral(R, quad, d)
    return InequalityReport(
        "level-d-kernel", True, value, level_d_constant(d) / (1 + math.log(R)), "upper", params={"R": R, "d": d}
    )


# -- barrier identity ---------------------------------------------------------

def check_barrier_identity(
    f: CubeFunction, g: CubeFunction, i: int, j: int, s: float, t: float, agree_tol: float = 1e-10
) -> IdentityReport:
    """<D_ij f, P_t D_ij g> = 4 <D_i P_s f, P_(t-2s) D_j P_s g>.

    The right side is evaluated as 4 <sigma_i d_i(P_s f), P_(t-2s)(sigma_j d_j(P_s g))>
    with sigma_i = (-1)^(x_i + 1). The twisted form
    4 <chi_ij d_i(P_s f), P_(t-2s) d_j(P_s g)>, which moves sigma_j outside
    the semigroup, is reported alongside; it coincides with the identity
    when t = 2s.
    """
    n = same_dimension(f, g)
    if i == j:
        raise CubeError("barrier identity needs i != j")
    if not 0 <= s <= t / 2:
        raise CubeError(f"need 0 <= s <= t/2, got s={s}, t={t}")
    lhs = inner_product(signed_second(f, i, j), noise_operator(signed_second(g, i, j), t))

    grad_f = derivative(noise_operator(f, s), i)
    grad_g = derivative(noise_operator(g, s), j)
    smoothed_g = noise_operator(grad_g, t - 2 * s)
    sig_i, sig_j = coordinate_sign(n, i), coordinate_sign(n, j)
    signed_g = noise_operator(CubeFunction(n, sig_j * grad_g.values), t - 2 * s)
    rhs = 4 * float(np.mean(sig_i * grad_f.values * signed_g.values))

    chi = sig_i * sig_j
    twisted_product = chi * grad_f.values * smoothed_g.values
    twisted = 4 * float(np.mean(twisted_product))
    return IdentityReport(
        "barrier",
        lhs,
        rhs,
        agree_tol * max(1.0, abs(lhs)),
        params={"i": i, "j": j, "s": s, "t": t},
        extra={
            "twisted_rhs": twisted,
            "twisted_agrees": abs(twisted - lhs) <= agree_tol * max(1.0, abs(lhs)),
            "min_grad_f": float(grad_f.values.min()),
            "min_smoothed_grad_g": float(smoothed_g.values.min()),
            "min_twisted_product": float(twisted_product.min()),
        },
    )


# -- restriction decomposition --------------------------------------------------

def check_restriction_decomposition(
    f: CubeFunction, g: CubeFunction, i: int | None = None, agree_tol: float = ALGEBRAIC_AGREE
) -> IdentityReport:
    """Cov(f,g) = Cov(f1,g1)/2 + Cov(f0,g0)/2 + (a1 - a0)(b1 - b0)/4 along x_i."""
    n = same_dimension(f, g)
    i = n if i is None else i
    f0, f1 = restrict(f, i, 0), restrict(f, i, 1)
    g0, g1 = restrict(g, i, 0), restrict(g, i, 1)
    a0, a1, b0, b1 = f0.mean(), f1.mean(), g0.mean(), g1.mean()
    rhs = 0.5 * covariance(f1, g1) + 0.5 * covariance(f0, g0) + (a1 - a0) * (b1 - b0) / 4
    lhs = covariance(f, g)
    scale = max(1.0, float(np.abs(f.values).max()) * float(np.abs(g.values).max()))
    return IdentityReport("restriction", lhs, rhs, agree_tol * scale, params={"i": i})


IDENTITIES = {
    "heat-partial": check_heat_identity_partial,
    "heat-D": check_heat_identity_D,
    "level-d": check_level_d_identity,
    "barrier": check_barrier_identity,
    "restriction": check_restriction_decomposition,
}
