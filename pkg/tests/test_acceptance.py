"""Acceptance suite: one test per criterion, each reported as a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the summary section at the end
lists every criterion with its measured margin.
"""

import math
import time
from itertools import combinations

import numpy as np
import pytest

from cubecorr import families as fam
from cubecorr.core import (
    covariance,
    fourier_transform,
    fwht,
    inverse_transform,
    level_weight_cross,
    lp_norm,
    make_function,
)
from cubecorr.explorer import (
    compute_features,
    evaluate_aligned,
    monotone_tables,
    monotone_tables_by_filter,
    scan_pairs,
)
from cubecorr.identities import (
    check_barrier_identity,
    check_heat_identity_D,
    check_heat_identity_partial,
    check_level_d_identity,
    check_restriction_decomposition,
    kernel_bound_check,
    kernel_integral,
)
from cubecorr.inequalities import c_theta, verify, verify_hypercontractivity, verify_reverse_hypercontractivity
from cubecorr.operators import derivative, restrict, second_derivative
from cubecorr.structure import (
    classify_modularity,
    diminishing_returns_check,
    influence,
    interaction_graph,
    is_increasing,
    lattice_check,
)

from .conftest import corpus

SEED = 20240611
AND2, OR2 = fam.and_(2), fam.or_(2)
R_GRID = [1.0, math.exp(0.5), math.e, math.e**2, math.e**4, math.e**8, math.e**16]


def random_table(n, rng):
    """Unconstrained real table drawn from a mix of shapes and scales."""
    kind = int(rng.integers(0, 5))
    size = 1 << n
    if kind == 0:
        return rng.normal(size=size)
    if kind == 1:
        return rng.normal(scale=10.0 ** rng.uniform(-3, 3), size=size)
    if kind == 2:
        return rng.integers(0, 2, size=size).astype(float)
    if kind == 3:
        return rng.standard_t(2, size=size)
    s = np.zeros(size)
    s[rng.choice(size, size=min(size, 3), replace=False)] = rng.normal(size=min(size, 3))
    return fwht(s)


def batched(pairs_by_n, bound, params=None):
    """Concatenated lhs, rhs, applicability over aligned pairs grouped by dimension."""
    out = []
    for n, (fv, gv) in sorted(pairs_by_n.items()):
        F = compute_features(np.vstack([fv, gv]), n)
        k = len(fv)
        out.append(evaluate_aligned(F, np.arange(k), k + np.arange(k), bound, params))
    return tuple(np.concatenate(p) for p in zip(*out))


def group(pairs):
    by_n = {}
    for f, g in pairs:
        fv, gv = by_n.setdefault(f.n, ([], []))
        fv.append(f.values)
        gv.append(g.values)
    return {n: (np.array(a), np.array(b)) for n, (a, b) in by_n.items()}


def worst(slack):
    return float(np.min(slack)) if len(slack) else math.inf


@pytest.mark.criterion(1, "transform round trip and Parseval; n=24 timing")
def test_transform(record_property):
    rng = np.random.default_rng(SEED)
    err_rt = err_pv = 0.0
    for _ in range(10_000):
        n = int(rng.integers(1, 13))
        f = make_function(n, random_table(n, rng))
        s = fourier_transform(f)
        back = inverse_transform(s).values
        scale = max(1.0, float(np.max(np.abs(f.values))))
        err_rt = max(err_rt, float(np.max(np.abs(back - f.values))) / scale)
        energy = float(np.mean(f.values**2))
        err_pv = max(err_pv, abs(energy - float(np.sum(s.coeffs**2))) / max(1.0, energy))
    big = np.random.default_rng(1).normal(size=1 << 24)
    t0 = time.perf_counter()
    f24 = make_function(24, big)
    s24 = fourier_transform(f24)
    elapsed = time.perf_counter() - t0
    assert abs(s24.coeffs[0] - big.mean()) < 1e-12
    record_property("detail", f"round trip {err_rt:.1e}, Parseval {err_pv:.1e}, n=24 in {elapsed:.1f}s")
    assert err_rt <= 1e-12 and err_pv <= 1e-12 and elapsed < 60


@pytest.mark.criterion(2, "AND2 worked values")
def test_and2(record_property):
    s = fourier_transform(AND2).coeffs
    assert s.tolist() == [0.25, -0.25, -0.25, 0.25]
    assert covariance(AND2, AND2) == 3 / 16
    assert influence(AND2, 1) == influence(AND2, 2) == 0.5
    dream = verify("dream", AND2, AND2)
    assert dream.rhs == 1 / 8 and dream.lhs == 3 / 16
    assert level_weight_cross(fourier_transform(AND2), fourier_transform(AND2), 2) == 1 / 16
    heat = check_heat_identity_partial(AND2, AND2)
    assert abs(heat.rhs - 1 / 16) <= 1e-8
    assert c_theta(0.5) == 3 / 64
    strong = verify("strong-lower", AND2, AND2, theta=0.5)
    assert abs(strong.rhs - 3 / 64) <= 1e-15
    record_property("detail", f"heat rhs error {abs(heat.rhs - 1 / 16):.1e}")


@pytest.mark.criterion(3, "exhaustive monotone scans with matching modularity, n <= 5")
def test_exhaustive_dream(record_property):
    summary = []
    for n in range(0, 6):
        r = scan_pairs(n, "increasing,matching", "dream", allow_large=(n == 5))
        summary.append(f"n={n}:{r.pairs_examined}")
        assert r.violations == 0, r.to_dict()
        assert r.min_slack is None or r.min_slack >= -1e-9
    record_property("detail", "pairs " + " ".join(summary) + ", 0 violations")


@pytest.mark.criterion(4, "unguarded inequality fails at (AND2, OR2) with slack -1/16")
def test_unguarded_failure(record_property):
    r = scan_pairs(2, "increasing", "dream-unguarded")
    assert r.min_slack == -1 / 16 and r.violations > 0
    pair = {r.argmin["f_id"], r.argmin["g_id"]}
    tables = monotone_tables(2)
    and_id = tables.index(0b1000)
    or_id = tables.index(0b1110)
    assert pair == {and_id, or_id}
    record_property("detail", f"min slack {r.min_slack}, {r.violations} violating ordered pairs")


def matching_real_pairs(count, rng):
    pairs = []
    for k in range(count):
        n = int(rng.integers(1, 9))
        f, g = fam.matching_pair(n, rng)
        if k % 3 == 2:
            # negating both flips the sign class together and drops monotonicity
            f, g = -f, -g
        pairs.append((f, g))
    return pairs


@pytest.mark.criterion(5, "real-valued matching pairs: level-one and L1-influence lower bounds")
def test_matching_real_pairs(record_property):
    rng = np.random.default_rng(SEED + 5)
    pairs = matching_real_pairs(10_000, rng)
    by_n = group(pairs)
    details = []
    for bound in ("real-level1", "l1-influence", "strong-lower"):
        lhs, rhs, app = batched(by_n, bound)
        if bound != "l1-influence":
            assert app.all()
        m = worst((lhs - rhs)[app])
        details.append(f"{bound} min slack {m:.1e} on {int(app.sum())}")
        assert m >= -1e-9
        for k, (f, g) in enumerate(pairs[:200]):
            r = verify(bound, f, g)
            assert r.applicable == bool(app[_position(pairs, k)]) and not r.violated
    record_property("detail", "; ".join(details))


def _position(pairs, k):
    """Index of pairs[k] in the dimension-grouped concatenation used by ``batched``."""
    n = pairs[k][0].n
    before = sum(1 for f, _ in pairs if f.n < n)
    return before + sum(1 for f, _ in pairs[:k] if f.n == n)


@pytest.mark.criterion(6, "upper bounds on unconstrained random pairs; refined <= Poincare")
def test_upper_bounds(record_property):
    rng = np.random.default_rng(SEED + 6)
    pairs = []
    for _ in range(10_000):
        n = int(rng.integers(1, 9))
        pairs.append((make_function(n, random_table(n, rng)), make_function(n, random_table(n, rng))))
    by_n = group(pairs)
    details = []
    for bound in ("poincare", "talagrand-upper"):
        lhs, rhs, _ = batched(by_n, bound)
        m = worst((rhs - lhs) / np.maximum(1, np.maximum(abs(lhs), abs(rhs))))
        details.append(f"{bound} {m:.1e}")
        assert m >= -1e-9
    for d in (2, 3):
        sub = {n: v for n, v in by_n.items() if n >= d}
        lhs, rhs, _ = batched(sub, "level-d-upper", {"d": d})
        m = worst((rhs - lhs) / np.maximum(1, np.maximum(abs(lhs), abs(rhs))))
        details.append(f"level-{d} {m:.1e}")
        assert m >= -1e-9
    refined_gap = math.inf
    for n, pair in by_n.items():
        _, base, _ = batched({n: pair}, "poincare")
        for i in range(1, n + 1):
            lhs, rhs, _ = batched({n: pair}, "poincare-refined", {"i": i})
            assert np.all(rhs - lhs >= -1e-9 * np.maximum(1, abs(rhs)))
            refined_gap = min(refined_gap, worst(base - rhs))
    assert refined_gap >= -1e-12
    # the batched path is cross-checked against the per-pair verifiers on a prefix
    for f, g in pairs[:300]:
        for bound in ("poincare", "talagrand-upper"):
            assert not verify(bound, f, g).violated
        for d in range(2, min(f.n, 3) + 1):
            assert not verify("level-d-upper", f, g, d=d).violated
        for i in range(1, f.n + 1):
            assert verify("poincare-refined", f, g, i=i).rhs <= verify("poincare", f, g).rhs + 1e-12
    record_property("detail", ", ".join(details) + f", refined gap {refined_gap:.1e}")


@pytest.mark.criterion(7, "identities agree on the test corpus")
def test_identities(record_property):
    rng = np.random.default_rng(SEED + 7)
    fs = corpus()
    quad_err = alg_err = 0.0
    checked = 0
    for k, f in enumerate(fs):
        partners = [f] + [g for g in fs[k + 1 :] if g.n == f.n][:2]
        for g in partners:
            reps = [check_heat_identity_partial(f, g), check_heat_identity_D(f, g)]
            reps += [check_level_d_identity(f, g, d) for d in (2, 3) if d <= f.n]
            for r in reps:
                quad_err = max(quad_err, r.error / max(1.0, abs(r.lhs)))
            alg = [check_restriction_decomposition(f, g, i) for i in range(1, f.n + 1) if f.n >= 2]
            if f.n >= 2:
                for i, j in list(combinations(range(1, f.n + 1), 2))[:3]:
                    t = float(rng.uniform(0.05, 3))
                    alg.append(check_barrier_identity(f, g, i, j, float(rng.uniform(0, t / 2)), t))
            for r in alg:
                alg_err = max(alg_err, r.error / max(1.0, abs(r.lhs)))
            checked += 1
    record_property("detail", f"{checked} pairs, quadrature {quad_err:.1e}, algebraic {alg_err:.1e}")
    assert quad_err <= 1e-8 and alg_err <= 1e-12


@pytest.mark.criterion(8, "kernel bound on the R grid and I(1) = 1/2")
def test_kernel(record_property):
    i1 = kernel_integral(1.0)
    reps = [kernel_bound_check(R) for R in R_GRID]
    assert all(r.satisfied for r in reps)
    values = [r.lhs for r in reps]
    assert all(a >= b for a, b in zip(values, values[1:]))
    record_property("detail", f"|I(1) - 1/2| = {abs(i1 - 0.5):.1e}, min slack {min(r.slack for r in reps):.3f}")
    assert abs(i1 - 0.5) <= 1e-9


def high_level_weight(f, g):
    sf, sg = fourier_transform(f), fourier_transform(g)
    return sum(level_weight_cross(sf, sg, d) for d in range(2, f.n + 1))


@pytest.mark.criterion(9, "disjoint interaction graphs kill high levels; shared edges give the strong bound")
def test_interaction_graphs(record_property):
    rng = np.random.default_rng(SEED + 9)
    disjoint = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 9))
        f, g = fam.disjoint_interaction_pair(n, rng)
        assert classify_modularity(f).label in ("supermodular", "submodular", "modular")
        assert not interaction_graph(f).shares_edge(interaction_graph(g))
        disjoint = max(disjoint, abs(high_level_weight(f, g)))
    assert disjoint < 1e-12
    theta, margin = 0.5, math.inf
    for _ in range(1000):
        n = int(rng.integers(2, 9))
        f, g, (i, j) = fam.shared_edge_pair(n, rng)
        df, dg = second_derivative(f, i, j).values, second_derivative(g, i, j).values
        assert np.max(np.abs(df)) > 0 and np.max(np.abs(dg)) > 0
        bound = c_theta(theta) * lp_norm(df, 1 - theta) * lp_norm(dg, 1 - theta)
        margin = min(margin, high_level_weight(f, g) - bound)
    record_property("detail", f"max |W>=2| disjoint {disjoint:.1e}, min margin shared {margin:.3e}")
    assert margin >= -1e-9


@pytest.mark.criterion(10, "monotone counts 2, 3, 6, 20, 168, 7581 by two methods")
def test_enumeration(record_property):
    counts = []
    for n in range(6):
        rec, filt = monotone_tables(n), monotone_tables_by_filter(n)
        assert sorted(rec) == sorted(filt)
        counts.append(len(rec))
    record_property("detail", f"counts {counts}")
    assert counts == [2, 3, 6, 20, 168, 7581]


@pytest.mark.criterion(11, "modularity characterizations agree; restrictions keep marginal order")
def test_classifiers(record_property):
    fs = [f for f in corpus() if f.n <= 6]
    for f in fs:
        mod = classify_modularity(f, cross_check=True)
        assert mod.characterizations_agree
        assert lattice_check(f) == (mod.submodular, mod.supermodular) == diminishing_returns_check(f)
    rng = np.random.default_rng(SEED + 11)
    for k in range(1000):
        n = int(rng.integers(2, 8))
        seed = int(rng.integers(0, 2**31))
        f, sign = (fam.random_coverage(n, seed), 1) if k % 2 == 0 else (fam.random_supermodular(n, seed), -1)
        pivot = int(rng.integers(1, n + 1))
        f0, f1 = restrict(f, pivot, 0), restrict(f, pivot, 1)
        for i in range(1, n):
            assert np.all(sign * (derivative(f0, i).values - derivative(f1, i).values) >= -1e-12)
        for r in (f0, f1):
            mod = classify_modularity(r)
            assert is_increasing(r) and (mod.submodular if sign > 0 else mod.supermodular)
    record_property("detail", f"{len(fs)} corpus functions, 1000 restriction checks")


@pytest.mark.criterion(12, "hypercontractivity and reverse hypercontractivity grids")
def test_hypercontractivity(record_property):
    rng = np.random.default_rng(SEED + 12)
    fwd = math.inf
    for _ in range(10_000):
        n = int(rng.integers(1, 9))
        f = make_function(n, random_table(n, rng))
        for t in (0.1, 0.5, 1.0, 2.0):
            fwd = min(fwd, verify_hypercontractivity(f, t).slack)
    rev = math.inf
    grid = [0.1, 0.3, 0.5, 0.7, 0.9]
    checked = 0
    for p in grid:
        for q in grid:
            t_min = -0.5 * math.log((1 - p) * (1 - q))
            for t in (t_min, t_min + 0.25, t_min + 1.0):
                for _ in range(40):
                    n = int(rng.integers(1, 9))
                    f = make_function(n, np.abs(random_table(n, rng)))
                    g = make_function(n, np.abs(random_table(n, rng)))
                    r = verify_reverse_hypercontractivity(f, g, p, q, t)
                    assert r.applicable
                    rev = min(rev, r.slack)
                    checked += 1
    record_property("detail", f"forward min slack {fwd:.1e}, reverse min slack {rev:.1e} on {checked}")
    assert fwd >= -1e-10 and rev >= -1e-10
