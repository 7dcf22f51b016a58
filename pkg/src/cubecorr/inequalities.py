"""Verifiers for covariance lower and upper bounds on pairs of cube functions.

Every verifier returns an :class:`InequalityReport` whose ``slack`` is
nonnegative exactly when the bound holds. A bound whose hypotheses fail is
still evaluated (useful for exhibiting failures), but its status is
``not-applicable`` rather than ``violated``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .core import (
    TOL,
    CubeError,
    CubeFunction,
    DimensionMismatch,
    check_coordinate,
    covariance,
    fourier_transform,
    level1_cross,
    level_weight_cross,
    lp_norm,
    same_dimension,
)
from .operators import higher_derivative, noise_operator, signed_second
from .structure import (
    NotApplicable,
    classify_modularity,
    influences,
    is_antipodal,
    is_increasing,
    matching_modularity,
    second_derivatives,
)

SATISFY_TOL = 1e-9
C2_IMPROVED = (1 + math.sqrt(8)) / 16


@dataclass
class InequalityReport:
    bound_id: str
    applicable: bool
    lhs: float
    rhs: float
    direction: str  # "lower": lhs >= rhs, "upper": lhs <= rhs
    params: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    note: str = ""

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs if self.direction == "lower" else self.rhs - self.lhs

    @property
    def tolerance(self) -> float:
        return SATISFY_TOL * max(1.0, abs(self.lhs), abs(self.rhs))

    @property
    def satisfied(self) -> bool:
        """Raw comparison, evaluated whether or not the hypotheses hold."""
        return self.slack >= -self.tolerance

    @property
    def status(self) -> str:
        if not self.applicable:
            return "not-applicable"
        return "satisfied" if self.satisfied else "violated"

    @property
    def violated(self) -> bool:
        return self.status == "violated"

    def to_dict(self) -> dict:
        return {
            "bound_id": self.bound_id,
            "applicable": self.applicable,
            "direction": self.direction,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "satisfied": self.satisfied,
            "status": self.status,
            "params": _plain(self.params),
            "extra": _plain(self.extra),
            "note": self.note,
        }


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def c_theta(theta: float) -> float:
    """(theta - theta^2 / 2) / 8."""
    return (theta - theta * theta / 2) / 8


def level_d_constant(d: int) -> float:
    """(1 + (2^d d!)^(1/d)) / 4^d."""
    return (1 + (2**d * math.factorial(d)) ** (1 / d)) / 4**d


def _both_boolean(f, g) -> bool:
    return f.kind == "boolean" and g.kind == "boolean"


def _both_increasing(f, g) -> bool:
    return is_increasing(f).holds and is_increasing(g).holds


def _modularity_params(f, g) -> tuple[bool, dict]:
    mf, mg = classify_modularity(f), classify_modularity(g)
    return matching_modularity(mf, mg), {"f_modularity": mf.label, "g_modularity": mg.label}


# -- lower bounds ------------------------------------------------------------

def verify_dream(f: CubeFunction, g: CubeFunction, guarded: bool = True) -> InequalityReport:
    """Cov(f, g) >= (1/4) sum_i Inf_i[f] Inf_i[g] for increasing boolean pairs.

    With ``guarded=False`` only monotonicity is required, which is the form
    that fails for general increasing pairs.
    """
    same_dimension(f, g)
    inc = _both_boolean(f, g) and _both_increasing(f, g)
    match, extra = _modularity_params(f, g)
    rhs = 0.25 * float(np.dot(influences(f), influences(g)))
    return InequalityReport(
        "dream" if guarded else "dream-unguarded",
        inc and (match or not guarded),
        covariance(f, g),
        rhs,
        "lower",
        extra=extra,
    )


def verify_real_level1(f: CubeFunction, g: CubeFunction) -> InequalityReport:
    """Cov(f, g) >= sum_i f^({i}) g^({i}) for matching modularity."""
    same_dimension(f, g)
    match, extra = _modularity_params(f, g)
    sf, sg = fourier_transform(f), fourier_transform(g)
    extra["level2_weight"] = level_weight_cross(sf, sg, 2)
    return InequalityReport("real-level1", match, covariance(f, g), level1_cross(sf, sg), "lower", extra=extra)


def verify_l1_influence_form(f: CubeFunction, g: CubeFunction) -> InequalityReport:
    """Cov(f, g) >= (1/4) sum_i Inf1_i[f] Inf1_i[g] for increasing, matching modularity."""
    same_dimension(f, g)
    match, extra = _modularity_params(f, g)
    rhs = 0.25 * float(np.dot(influences(f, 1), influences(g, 1)))
    return InequalityReport(
        "l1-influence", match and _both_increasing(f, g), covariance(f, g), rhs, "lower", extra=extra
    )


def _second_norms(f: CubeFunction, p: float) -> dict:
    return {pair: lp_norm(d, p) for pair, d in second_derivatives(f).items()}


def verify_strong_lower(f: CubeFunction, g: CubeFunction, theta: float = 0.5) -> InequalityReport:
    """W>=2[f, g] >= c(theta) sum_{i<j} |d_ij f|_{1-theta} |d_ij g|_{1-theta}."""
    if not 0 < theta < 1:
        raise CubeError(f"theta must lie in (0, 1), got {theta}")
    same_dimension(f, g)
    match, extra = _modularity_params(f, g)
    sf, sg = fourier_transform(f), fourier_transform(g)
    q = 1 - theta
    nf, ng = _second_norms(f, q), _second_norms(g, q)
    pair_sum = sum(nf[k] * ng[k] for k in nf)
    c = c_theta(theta)
    rhs = c * pair_sum
    lvl1 = level1_cross(sf, sg)
    cov = covariance(f, g)
    extra.update(
        c_theta=c,
        covariance=cov,
        level1=lvl1,
        covariance_rhs=lvl1 + rhs,
        covariance_slack=cov - (lvl1 + rhs),
    )
    return InequalityReport(
        "strong-lower", match, level_weight_cross(sf, sg, 2), rhs, "lower", params={"theta": theta}, extra=extra
    )


def verify_dij_sufficient(f: CubeFunction, g: CubeFunction) -> InequalityReport:
    """Dream inequality under the hypothesis D_ij f >= 0 for every pair."""
    same_dimension(f, g)
    min_d = min(
        (float(signed_second(f, i, j).values.min()) for i, j in combinations(range(1, f.n + 1), 2)),
        default=0.0,
    )
    ok = _both_boolean(f, g) and _both_increasing(f, g) and min_d >= -TOL
    rhs = 0.25 * float(np.dot(influences(f), influences(g)))
    return InequalityReport("dij-sufficient", ok, covariance(f, g), rhs, "lower", extra={"min_Dij_f": min_d})


def verify_average_dream(family: Sequence[CubeFunction]) -> InequalityReport:
    """Sum over ordered pairs (diagonal included) of Cov versus (1/4) sum of I[f, g]."""
    if not family:
        raise CubeError("family must be nonempty")
    n = family[0].n
    for h in family:
        if h.n != n:
            raise DimensionMismatch(f"mixed dimensions in family: {n} vs {h.n}")
        if h.kind != "boolean" or not is_increasing(h).holds:
            raise NotApplicable("every family member must be an increasing boolean function")
    total = np.zeros(n)
    centred = []
    for h in family:
        total += influences(h)
        centred.append(h.values - h.values.mean())
    s = np.sum(centred, axis=0)
    # sum_{f,g} Cov(f,g) = Var(sum f); same for the influence double sum
    lhs = float(np.dot(s, s) / (1 << n))
    rhs = 0.25 * float(np.dot(total, total))
    return InequalityReport("average-dream", True, lhs, rhs, "lower", params={"size": len(family)})


def chvatal_type_check(f: CubeFunction, g: CubeFunction) -> InequalityReport:
    """Conjectural Cov >= (1/4) min_i Inf_i[f] when g is antipodal.

    The Harper-based bound (alpha/2) log2(1/alpha) min_i Inf_i[f] with
    alpha = E[g] is carried in ``extra``; it is a theorem only when the
    dream inequality's hypotheses hold and alpha <= 1/2.
    """
    same_dimension(f, g)
    if not _both_boolean(f, g):
        raise NotApplicable("the Chvatal-type check needs boolean f and g")
    inc = _both_increasing(f, g)
    cov = covariance(f, g)
    min_inf = float(influences(f).min())
    antipodal = is_antipodal(g).holds
    match, mods = _modularity_params(f, g)
    alpha = g.mean()
    harper_ok = inc and match and 0 < alpha <= 0.5
    harper_rhs = 0.5 * alpha * math.log2(1 / alpha) * min_inf if alpha > 0 else 0.0
    harper = InequalityReport("chvatal-harper", harper_ok, cov, harper_rhs, "lower", params={"alpha": alpha})
    return InequalityReport(
        "chvatal-conjecture",
        inc and antipodal,
        cov,
        0.25 * min_inf,
        "lower",
        extra={"g_antipodal": antipodal, "harper": harper.to_dict(), **mods},
        note="CONJECTURE: evaluated empirically, not a theorem",
    )


# -- upper bounds ------------------------------------------------------------

def verify_poincare(f: CubeFunction, g: CubeFunction) -> InequalityReport:
    """|Cov(f, g)| <= (1/4) sum_i sqrt(Inf_i[f] Inf_i[g]) with L2 influences."""
    same_dimension(f, g)
    rhs = 0.25 * float(np.sum(np.sqrt(influences(f) * influences(g))))
    return InequalityReport("poincare", True, abs(covariance(f, g)), rhs, "upper")


def verify_poincare_refined(f: CubeFunction, g: CubeFunction, i: int) -> InequalityReport:
    """|Cov| <= (1/4) sum_{j != i} sqrt(Inf_j[f] Inf_j[g]) + |f^({i}) g^({i})|."""
    n = same_dimension(f, g)
    check_coordinate(n, i)
    terms = np.sqrt(influences(f) * influences(g))
    sf, sg = fourier_transform(f), fourier_transform(g)
    e = 1 << (i - 1)
    rhs = 0.25 * float(terms.sum() - terms[i - 1]) + abs(sf.coeffs[e] * sg.coeffs[e])
    return InequalityReport(
        "poincare-refined",
        True,
        abs(covariance(f, g)),
        rhs,
        "upper",
        params={"i": i},
        extra={"poincare_rhs": 0.25 * float(terms.sum())},
    )


def log_corrected_sum(dfs: Sequence[np.ndarray], dgs: Sequence[np.ndarray]) -> tuple[float, float]:
    """Sum of |a|_2 |b|_2 / (1 + log R) over derivative pairs, and the smallest R.

    R = (|a|_2 |b|_2) / (|a|_1 |b|_1); a pair where either table vanishes
    contributes 0.
    """
    total = 0.0
    min_r = math.inf
    for a, b in zip(dfs, dgs):
        a2, b2 = lp_norm(a, 2), lp_norm(b, 2)
        if a2 <= TOL or b2 <= TOL:
            continue
        r = (a2 * b2) / (lp_norm(a, 1) * lp_norm(b, 1))
        min_r = min(min_r, r)
        total += a2 * b2 / (1 + math.log(r))
    return total, min_r


def verify_talagrand_upper(f: CubeFunction, g: CubeFunction) -> InequalityReport:
    """|W>=2[f, g]| <= (9/8) sum_{i<j} |d_ij f|_2 |d_ij g|_2 / (1 + log R_ij)."""
    same_dimension(f, g)
    df, dg = second_derivatives(f), second_derivatives(g)
    s, min_r = log_corrected_sum(list(df.values()), [dg[k] for k in df])
    w2 = level_weight_cross(fourier_transform(f), fourier_transform(g), 2)
    return InequalityReport(
        "talagrand-upper",
        True,
        abs(w2),
        9 / 8 * s,
        "upper",
        extra={"log_sum": s, "min_R": None if math.isinf(min_r) else min_r, "c2_rhs": C2_IMPROVED * s},
    )


def verify_talagrand_window(f: CubeFunction, g: CubeFunction) -> InequalityReport:
    """|Cov - (1/4) sum Inf1_i[f] Inf1_i[g]| under the same right-hand side, increasing pairs."""
    base = verify_talagrand_upper(f, g)
    window = abs(covariance(f, g) - 0.25 * float(np.dot(influences(f, 1), influences(g, 1))))
    extra = dict(base.extra, level2_abs=base.lhs)
    return InequalityReport("talagrand-window", _both_increasing(f, g), window, base.rhs, "upper", extra=extra)


def verify_level_d_upper(f: CubeFunction, g: CubeFunction, d: int = 2) -> InequalityReport:
    """|W>=d[f, g]| <= C_d sum_{|T|=d} |d_T f|_2 |d_T g|_2 / (1 + log R_T)."""
    n = same_dimension(f, g)
    if not 2 <= d <= n:
        raise CubeError(f"level d={d} out of range 2..{n}")
    subsets = list(combinations(range(1, n + 1), d))
    dfs = [higher_derivative(f, T).values for T in subsets]
    dgs = [higher_derivative(g, T).values for T in subsets]
    s, min_r = log_corrected_sum(dfs, dgs)
    cd = level_d_constant(d)
    lhs = abs(level_weight_cross(fourier_transform(f), fourier_transform(g), d))
    extra = {"C_d": cd, "log_sum": s, "min_R": None if math.isinf(min_r) else min_r}
    if d == 2:
        extra["rhs_9_8"] = 9 / 8 * s
    return InequalityReport("level-d-upper", True, lhs, cd * s, "upper", params={"d": d}, extra=extra)


# -- hypercontractivity -------------------------------------------------------

def verify_hypercontractivity(f: CubeFunction, t: float) -> InequalityReport:
    """|P_t f|_2 <= |f|_{1 + exp(-2t)}."""
    if t < 0:
        raise CubeError(f"t must be nonnegative, got {t}")
    p = 1 + math.exp(-2 * t)
    return InequalityReport(
        "hypercontractivity", True, lp_norm(noise_operator(f, t), 2), lp_norm(f, p), "upper", params={"t": t, "p": p}
    )


def verify_reverse_hypercontractivity(f: CubeFunction, g: CubeFunction, p: float, q: float, t: float) -> InequalityReport:
    """<f, P_t g> >= |f|_p |g|_q for nonnegative f, g when exp(-2t) <= (1-p)(1-q)."""
    same_dimension(f, g)
    if not (0 < p < 1 and 0 < q < 1):
        raise CubeError(f"p and q must lie in (0, 1), got p={p}, q={q}")
    if t < 0:
        raise CubeError(f"t must be nonnegative, got {t}")
    admissible = math.exp(-2 * t) <= (1 - p) * (1 - q) + TOL
    nonneg = bool(f.values.min() >= 0 and g.values.min() >= 0)
    lhs = float(np.mean(f.values * noise_operator(g, t).values))
    return InequalityReport(
        "reverse-hypercontractivity",
        admissible and nonneg,
        lhs,
        lp_norm(f, p) * lp_norm(g, q),
        "lower",
        params={"p": p, "q": q, "t": t},
        extra={"admissible": admissible, "nonnegative": nonneg},
    )


BOUNDS = {
    "dream": verify_dream,
    "dream-unguarded": lambda f, g: verify_dream(f, g, guarded=False),
    "real-level1": verify_real_level1,
    "l1-influence": verify_l1_influence_form,
    "strong-lower": verify_strong_lower,
    "dij-sufficient": verify_dij_sufficient,
    "chvatal": chvatal_type_check,
    "poincare": verify_poincare,
    "poincare-refined": verify_poincare_refined,
    "talagrand-upper": verify_talagrand_upper,
    "talagrand-window": verify_talagrand_window,
    "level-d-upper": verify_level_d_upper,
    "hypercontractivity": lambda f, g, t: verify_hypercontractivity(f, t),
    "reverse-hypercontractivity": verify_reverse_hypercontractivity,
}

# bounds that read only f
SINGLE = {"hypercontractivity"}

# parameters each bound accepts, with defaults
BOUND_PARAMS = {
    "strong-lower": {"theta": 0.5},
    "poincare-refined": {"i": 1},
    "level-d-upper": {"d": 2},
    "hypercontractivity": {"t": 1.0},
    "reverse-hypercontractivity": {"p": 0.5, "q": 0.5, "t": 1.0},
}


def verify(bound_id: str, f: CubeFunction, g: CubeFunction | None = None, **params) -> InequalityReport:
    if bound_id not in BOUNDS:
        raise CubeError(f"unknown bound {bound_id!r}; choose from {', '.join(sorted(BOUNDS))}")
    if g is None:
        if bound_id not in SINGLE:
            raise CubeError(f"bound {bound_id!r} needs a second function g")
        g = f
    allowed = BOUND_PARAMS.get(bound_id, {})
    unknown = set(params) - set(allowed)
    if unknown:
        raise CubeError(f"bound {bound_id!r} takes no parameter(s) {', '.join(sorted(unknown))}")
    return BOUNDS[bound_id](f, g, **{**allowed, **params})
