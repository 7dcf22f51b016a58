"""Exhaustive enumeration of monotone Boolean functions and pair scans.

Scans compute per-function features once (spectrum, influences, derivative
norms, structural flags) for a whole batch of tables, then evaluate a bound
on blocks of ordered pairs with array arithmetic.
"""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .core import (
    TOL,
    CubeError,
    CubeFunction,
    covariance,
    fwht,
    make_function,
    popcounts,
)
from . import families as fam
from .inequalities import SATISFY_TOL, c_theta, level_d_constant
from .structure import cross_total_influence

MAX_ENUM_N = 5
EXEMPLAR_CAP = 100
DEFAULT_BLOCK = 256


# -- enumeration -----------------------------------------------------------------

def _check_enum_n(n: int) -> None:
    if not 0 <= n <= MAX_ENUM_N:
        raise CubeError(f"monotone enumeration is limited to 0 <= n <= {MAX_ENUM_N}, got {n}")


def monotone_tables(n: int) -> list[int]:
    """Truth tables (bit m = f at mask m) of every monotone function, ascending.

    Built recursively: a table on n coordinates is a pair (f0, f1) of
    monotone tables on n - 1 coordinates with f0 <= f1 pointwise, stacked
    along the top coordinate.
    """
    _check_enum_n(n)
    tables = [0, 1]
    for k in range(n):
        shift = 1 << k
        tables = [lo | (hi << shift) for hi in tables for lo in tables if lo & ~hi == 0]
    return sorted(tables)


def _up_masks(n: int) -> list[tuple[int, int]]:
    """(positions with x_i = 0, shift 2^i) for each coordinate."""
    out = []
    for i in range(n):
        low = 0
        for m in range(1 << n):
            if not (m >> i) & 1:
                low |= 1 << m
        out.append((low, 1 << i))
    return out


def is_monotone_table(table: int, n: int) -> bool:
    """Every point with x_i = 0 that is on keeps its neighbour with x_i = 1 on."""
    return all(((table & low) << shift) & ~table == 0 for low, shift in _up_masks(n))


def monotone_tables_by_filter(n: int) -> list[int]:
    """Independent enumeration: test candidate tables with :func:`is_monotone_table`.

    For n <= 4 every one of the 2^(2^n) tables is tested. At n = 5 the
    2^32 candidates are cut down to tables whose two halves along x_5 are
    themselves monotone (a necessary condition), and each survivor is tested
    in full.
    """
    _check_enum_n(n)
    if n <= 4:
        size = 1 << (1 << n)
        t = np.arange(size, dtype=np.uint64)
        ok = np.ones(size, dtype=bool)
        for low, shift in _up_masks(n):
            ok &= ((t & np.uint64(low)) << np.uint64(shift)) & ~t == 0
        return [int(x) for x in np.flatnonzero(ok)]
    halves = monotone_tables_by_filter(n - 1)
    shift = 1 << (n - 1)
    cand = (lo | (hi << shift) for hi in halves for lo in halves)
    return sorted(t for t in cand if is_monotone_table(t, n))


def table_to_function(table: int, n: int) -> CubeFunction:
    return make_function(n, [(table >> m) & 1 for m in range(1 << n)], "boolean")


def enumerate_monotone(n: int) -> Iterator[CubeFunction]:
    """Yield every monotone Boolean function on n coordinates exactly once."""
    for t in monotone_tables(n):
        yield table_to_function(t, n)


def monotone_count(n: int) -> int:
    return len(monotone_tables(n))


# -- batch features ---------------------------------------------------------------

@dataclass
class Features:
    """Per-function quantities for a stack of tables of one dimension."""

    n: int
    values: np.ndarray  # (N, 2^n)
    boolean: np.ndarray
    spectra: np.ndarray
    inf2: np.ndarray  # (N, n)
    inf1: np.ndarray
    level1: np.ndarray  # (N, n)
    increasing: np.ndarray
    submodular: np.ndarray
    supermodular: np.ndarray
    antipodal: np.ndarray
    min_dij: np.ndarray
    _pair_cache: dict = field(default_factory=dict)

    @property
    def count(self) -> int:
        return self.values.shape[0]

    @property
    def centred(self) -> np.ndarray:
        c = self._pair_cache.get("centred")
        if c is None:
            c = self.values - self.values.mean(axis=1, keepdims=True)
            self._pair_cache["centred"] = c
        return c

    def derivative_norms(self, order: int, p: float) -> np.ndarray:
        """(N, C(n, order)) matrix of ||d_T f||_p over |T| = order."""
        key = ("norms", order, p)
        if key not in self._pair_cache:
            tabs = _derivative_stack(self.values, self.n, order)
            a = np.abs(tabs)
            if p == 2:
                out = np.sqrt(np.mean(a * a, axis=2))
            elif p == 1:
                out = np.mean(a, axis=2)
            else:
                out = np.mean(a**p, axis=2) ** (1 / p)
            self._pair_cache[key] = out
        return self._pair_cache[key]


def _derivative_stack(values: np.ndarray, n: int, order: int) -> np.ndarray:
    """(N, C(n, order), 2^n) tables of d_T f."""
    masks = np.arange(1 << n)
    out = []
    for T in combinations(range(n), order):
        cur = values
        for k in T:
            e = 1 << k
            cur = cur[:, masks | e] - cur[:, masks & ~e]
        out.append(cur)
    if not out:
        return np.zeros((values.shape[0], 0, 1 << n))
    return np.stack(out, axis=1)


def compute_features(values: np.ndarray, n: int, boolean: Optional[np.ndarray] = None) -> Features:
    values = np.asarray(values, dtype=np.float64)
    N = values.shape[0]
    masks = np.arange(1 << n)
    if boolean is None:
        boolean = np.all((values == 0) | (values == 1), axis=1)
    spectra = fwht(values) / (1 << n)
    first = _derivative_stack(values, n, 1) if n else np.zeros((N, 0, 1))
    inf2 = np.mean(first * first, axis=2)
    inf1 = np.mean(np.abs(first), axis=2)
    increasing = np.all(first >= -TOL, axis=(1, 2)) if n else np.ones(N, bool)
    level1 = spectra[:, [1 << k for k in range(n)]] if n else np.zeros((N, 0))
    if n >= 2:
        second = _derivative_stack(values, n, 2)
        sub = np.all(second <= TOL, axis=(1, 2))
        sup = np.all(second >= -TOL, axis=(1, 2))
        signed = []
        for i, j in combinations(range(n), 2):
            ei, ej = 1 << i, 1 << j
            signed.append(values + values[:, masks ^ (ei | ej)] - values[:, masks ^ ei] - values[:, masks ^ ej])
        min_dij = np.min(np.stack(signed, axis=1), axis=(1, 2))
    else:
        sub = sup = np.ones(N, bool)
        min_dij = np.zeros(N)
    comp = masks[::-1]
    antipodal = boolean & np.all(values == 1 - values[:, comp], axis=1)
    return Features(n, values, boolean, spectra, inf2, inf1, level1, increasing, sub, sup, antipodal, min_dij)


# -- bounds over blocks of pairs --------------------------------------------------

SCAN_BOUNDS = (
    "dream",
    "dream-unguarded",
    "real-level1",
    "l1-influence",
    "strong-lower",
    "dij-sufficient",
    "chvatal",
    "poincare",
    "poincare-refined",
    "talagrand-upper",
    "talagrand-window",
    "level-d-upper",
)
LOWER = {"dream", "dream-unguarded", "real-level1", "l1-influence", "strong-lower", "dij-sufficient", "chvatal"}


def _log_corrected(a2, b2, a1, b1) -> np.ndarray:
    """sum over derivative index of a2 b2 / (1 + log(a2 b2 / (a1 b1))), zero where a table vanishes."""
    num = a2[:, None, :] * b2[None, :, :]
    den = a1[:, None, :] * b1[None, :, :]
    live = (a2[:, None, :] > TOL) & (b2[None, :, :] > TOL)
    ratio = np.where(live, num / np.where(live, den, 1.0), 1.0)
    return np.sum(np.where(live, num / (1 + np.log(ratio)), 0.0), axis=2)


def _evaluate_block(F: Features, rows: np.ndarray, cols: np.ndarray, bound: str, params: dict):
    """lhs, rhs, applicable arrays of shape (rows, cols)."""
    N = 1 << F.n
    fc, gc = F.centred[rows], F.centred[cols]
    cov = fc @ gc.T / N
    lvl1 = F.level1[rows] @ F.level1[cols].T
    inc = F.increasing[rows][:, None] & F.increasing[cols][None, :]
    boo = F.boolean[rows][:, None] & F.boolean[cols][None, :]
    match = (F.submodular[rows][:, None] & F.submodular[cols][None, :]) | (
        F.supermodular[rows][:, None] & F.supermodular[cols][None, :]
    )
    ones = np.ones_like(cov, dtype=bool)
    if bound in ("dream", "dream-unguarded"):
        rhs = 0.25 * F.inf2[rows] @ F.inf2[cols].T
        app = inc & boo & (match if bound == "dream" else ones)
        return cov, rhs, app
    if bound == "real-level1":
        return cov, lvl1, match
    if bound == "l1-influence":
        return cov, 0.25 * F.inf1[rows] @ F.inf1[cols].T, match & inc
    if bound == "strong-lower":
        q = 1 - params["theta"]
        nq = F.derivative_norms(2, q)
        return cov - lvl1, c_theta(params["theta"]) * nq[rows] @ nq[cols].T, match
    if bound == "dij-sufficient":
        app = inc & boo & (F.min_dij[rows] >= -TOL)[:, None]
        return cov, 0.25 * F.inf2[rows] @ F.inf2[cols].T, app
    if bound == "chvatal":
        rhs = np.repeat(0.25 * F.inf2[rows].min(axis=1, initial=np.inf)[:, None], len(cols), axis=1)
        return cov, rhs, inc & boo & F.antipodal[cols][None, :]
    if bound == "poincare":
        s2f, s2g = np.sqrt(F.inf2[rows]), np.sqrt(F.inf2[cols])
        return np.abs(cov), 0.25 * s2f @ s2g.T, ones
    if bound == "poincare-refined":
        k = params["i"] - 1
        s2f, s2g = np.sqrt(F.inf2[rows]), np.sqrt(F.inf2[cols])
        full = 0.25 * s2f @ s2g.T
        rhs = full - 0.25 * np.outer(s2f[:, k], s2g[:, k]) + np.abs(np.outer(F.level1[rows, k], F.level1[cols, k]))
        return np.abs(cov), rhs, ones
    if bound in ("talagrand-upper", "talagrand-window"):
        a2, a1 = F.derivative_norms(2, 2), F.derivative_norms(2, 1)
        rhs = 9 / 8 * _log_corrected(a2[rows], a2[cols], a1[rows], a1[cols])
        if bound == "talagrand-upper":
            return np.abs(cov - lvl1), rhs, ones
        window = np.abs(cov - 0.25 * F.inf1[rows] @ F.inf1[cols].T)
        return window, rhs, inc
    if bound == "level-d-upper":
        d = params["d"]
        a2, a1 = F.derivative_norms(d, 2), F.derivative_norms(d, 1)
        rhs = level_d_constant(d) * _log_corrected(a2[rows], a2[cols], a1[rows], a1[cols])
        keep = popcounts(F.n) >= d
        wd = F.spectra[rows][:, keep] @ F.spectra[cols][:, keep].T
        return np.abs(wd), rhs, ones
    raise CubeError(f"unknown bound {bound!r}; choose from {', '.join(SCAN_BOUNDS)}")


def evaluate_pairs(F: Features, bound: str, params: Optional[dict] = None):
    """Full (N, N) lhs, rhs and applicability matrices for one bound."""
    if bound not in SCAN_BOUNDS:
        raise CubeError(f"unknown bound {bound!r}; choose from {', '.join(SCAN_BOUNDS)}")
    params = _bound_params(bound, F.n, params or {})
    idx = np.arange(F.count)
    return _evaluate_block(F, idx, idx, bound, params)


def evaluate_aligned(F: Features, rows, cols, bound: str, params: Optional[dict] = None, chunk: int = 128):
    """lhs, rhs and applicability for the pairs (rows[k], cols[k]) only."""
    if bound not in SCAN_BOUNDS:
        raise CubeError(f"unknown bound {bound!r}; choose from {', '.join(SCAN_BOUNDS)}")
    rows, cols = np.asarray(rows, dtype=np.int64), np.asarray(cols, dtype=np.int64)
    if rows.shape != cols.shape:
        raise CubeError("rows and cols must have the same length")
    params = _bound_params(bound, F.n, params or {})
    parts = []
    for k in range(0, len(rows), chunk):
        lhs, rhs, app = _evaluate_block(F, rows[k : k + chunk], cols[k : k + chunk], bound, params)
        parts.append((np.diagonal(lhs), np.diagonal(rhs), np.diagonal(app)))
    if not parts:
        return np.zeros(0), np.zeros(0), np.zeros(0, bool)
    return tuple(np.concatenate(p) for p in zip(*parts))


# -- filters ---------------------------------------------------------------------

FILTER_TOKENS = {"all", "increasing", "boolean", "submodular", "supermodular", "modular", "matching", "antipodal-g"}


def parse_filter(text: str) -> list[str]:
    toks = [t.strip() for t in text.replace("∧", ",").replace("&", ",").replace("+", ",").split(",") if t.strip()]
    aliases = {"both-submodular": "submodular", "both-supermodular": "supermodular", "matching-modularity": "matching"}
    toks = [aliases.get(t, t) for t in toks] or ["all"]
    bad = [t for t in toks if t not in FILTER_TOKENS]
    if bad:
        raise CubeError(f"unknown filter token(s) {', '.join(bad)}; choose from {', '.join(sorted(FILTER_TOKENS))}")
    return toks


def _unary_mask(F: Features, toks: list[str]) -> np.ndarray:
    keep = np.ones(F.count, dtype=bool)
    for t in toks:
        if t == "increasing":
            keep &= F.increasing
        elif t == "boolean":
            keep &= F.boolean
        elif t == "submodular":
            keep &= F.submodular
        elif t == "supermodular":
            keep &= F.supermodular
        elif t == "modular":
            keep &= F.submodular & F.supermodular
    return keep


def _pair_mask(F: Features, rows: np.ndarray, cols: np.ndarray, toks: list[str]) -> np.ndarray:
    keep = np.ones((len(rows), len(cols)), dtype=bool)
    if "matching" in toks:
        keep &= (F.submodular[rows][:, None] & F.submodular[cols][None, :]) | (
            F.supermodular[rows][:, None] & F.supermodular[cols][None, :]
        )
    if "antipodal-g" in toks:
        keep &= F.antipodal[cols][None, :]
    return keep


# -- scans -----------------------------------------------------------------------

@dataclass
class ScanResult:
    bound_id: str
    filter: str
    n: int
    universe: str
    params: dict
    functions: int
    pairs_examined: int = 0
    applicable_pairs: int = 0
    min_slack: Optional[float] = None
    argmin: Optional[dict] = None
    violations: int = 0
    exemplars: list = field(default_factory=list)
    runtime_s: float = 0.0
    workers: int = 1

    def to_dict(self, with_runtime: bool = True) -> dict:
        d = {
            "bound_id": self.bound_id,
            "filter": self.filter,
            "n": self.n,
            "universe": self.universe,
            "params": self.params,
            "functions": self.functions,
            "pairs_examined": self.pairs_examined,
            "applicable_pairs": self.applicable_pairs,
            "min_slack": self.min_slack,
            "argmin": self.argmin,
            "violations": self.violations,
            "exemplars": self.exemplars,
        }
        if with_runtime:
            d["runtime_s"] = self.runtime_s
            d["workers"] = self.workers
        return d

    def csv_rows(self) -> list[dict]:
        rows = list(self.exemplars)
        if self.argmin is not None and self.argmin not in rows:
            rows.append(self.argmin)
        return rows


CSV_FIELDS = ["n", "f_id", "g_id", "bound_id", "lhs", "rhs", "slack", "satisfied"]


def _block_scan(F, rows_idx, cols_idx, bound, params, toks):
    """Scan one contiguous block of f indices against every g; pure."""
    lhs, rhs, app = _evaluate_block(F, rows_idx, cols_idx, bound, params)
    keep = _pair_mask(F, rows_idx, cols_idx, toks)
    slack = lhs - rhs if bound in LOWER else rhs - lhs
    tol = SATISFY_TOL * np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    live = keep & app
    viol = live & (slack < -tol)
    out = {"examined": int(keep.sum()), "applicable": int(live.sum()), "violations": int(viol.sum())}
    out["exemplars"] = []
    for r, c in zip(*np.nonzero(viol)):
        if len(out["exemplars"]) >= EXEMPLAR_CAP:
            break
        out["exemplars"].append(_row(F, bound, rows_idx[r], cols_idx[c], lhs[r, c], rhs[r, c], slack[r, c], False))
    out["min"] = None
    if live.any():
        masked = np.where(live, slack, np.inf)
        r, c = np.unravel_index(int(np.argmin(masked)), masked.shape)
        out["min"] = (float(slack[r, c]), _row(F, bound, rows_idx[r], cols_idx[c], lhs[r, c], rhs[r, c], slack[r, c], slack[r, c] >= -tol[r, c]))
    return out


def _row(F, bound, fi, gi, lhs, rhs, slack, ok) -> dict:
    return {
        "n": F.n,
        "f_id": int(fi),
        "g_id": int(gi),
        "bound_id": bound,
        "lhs": float(lhs),
        "rhs": float(rhs),
        "slack": float(slack),
        "satisfied": bool(ok),
    }


def scan_features(
    F: Features,
    bound: str,
    filter: str = "all",
    params: Optional[dict] = None,
    universe: str = "custom",
    workers: int = 1,
    block: int = DEFAULT_BLOCK,
) -> ScanResult:
    """Evaluate ``bound`` on every ordered pair (diagonal included) passing ``filter``."""
    if bound not in SCAN_BOUNDS:
        raise CubeError(f"unknown bound {bound!r}; choose from {', '.join(SCAN_BOUNDS)}")
    params = _bound_params(bound, F.n, params or {})
    toks = parse_filter(filter)
    t0 = time.perf_counter()
    idx = np.flatnonzero(_unary_mask(F, toks))
    res = ScanResult(bound, filter, F.n, universe, params, F.count, workers=workers)
    blocks = [idx[k : k + block] for k in range(0, len(idx), block)]
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: _block_scan(F, b, idx, bound, params, toks), blocks))
    else:
        parts = [_block_scan(F, b, idx, bound, params, toks) for b in blocks]
    # merge in block order so results do not depend on scheduling
    for part in parts:
        res.pairs_examined += part["examined"]
        res.applicable_pairs += part["applicable"]
        res.violations += part["violations"]
        room = EXEMPLAR_CAP - len(res.exemplars)
        res.exemplars.extend(part["exemplars"][:room])
        if part["min"] is not None and (res.min_slack is None or part["min"][0] < res.min_slack):
            res.min_slack, res.argmin = part["min"]
    res.runtime_s = time.perf_counter() - t0
    return res


def _bound_params(bound: str, n: int, params: dict) -> dict:
    out = {}
    if bound == "strong-lower":
        out["theta"] = float(params.get("theta", 0.5))
        if not 0 < out["theta"] < 1:
            raise CubeError("theta must lie in (0, 1)")
    elif bound == "poincare-refined":
        out["i"] = int(params.get("i", 1))
        if not 1 <= out["i"] <= n:
            raise CubeError(f"coordinate i={out['i']} out of range 1..{n}")
    elif bound == "level-d-upper":
        out["d"] = int(params.get("d", 2))
        if not 2 <= out["d"] <= n:
            raise CubeError(f"level d={out['d']} out of range 2..{n}")
    return out


def universe_tables(n: int, universe: str = "monotone", allow_large: bool = False) -> np.ndarray:
    """(N, 2^n) value stack for an exhaustive universe."""
    if universe == "monotone":
        if n == 5 and not allow_large:
            raise CubeError("the n=5 exhaustive scan (about 5.7e7 ordered pairs) needs allow_large / --allow-n5")
        tables = monotone_tables(n)
    elif universe == "boolean":
        if n > 3:
            raise CubeError("the all-boolean universe is limited to n <= 3")
        tables = list(range(1 << (1 << n)))
    else:
        raise CubeError(f"unknown universe {universe!r}; choose monotone or boolean")
    return tables_to_values(tables, n)


def tables_to_values(tables: Sequence[int], n: int) -> np.ndarray:
    t = np.asarray(tables, dtype=np.uint64)[:, None]
    return ((t >> np.arange(1 << n, dtype=np.uint64)[None, :]) & np.uint64(1)).astype(np.float64)


def sampled_values(n: int, samples: int, seed: int = 0) -> np.ndarray:
    """A seeded mixture of random monotone, coverage, supermodular and Gaussian tables."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(samples):
        s = int(rng.integers(0, 2**31))
        pick = k % 4
        if pick == 0:
            f = fam.random_monotone(n, s)
        elif pick == 1:
            f = fam.random_coverage(n, s)
        elif pick == 2:
            f = fam.random_supermodular(n, s)
        else:
            f = fam.random_real(n, np.random.default_rng(s))
        out.append(f.values)
    return np.array(out)


def scan_pairs(
    n: int,
    filter: str,
    bound: str,
    params: Optional[dict] = None,
    universe: str = "monotone",
    allow_large: bool = False,
    samples: Optional[int] = None,
    seed: int = 0,
    workers: int = 1,
) -> ScanResult:
    """Exhaustive scan over a universe of tables, or a seeded sample when ``samples`` is given."""
    if samples is not None:
        values = sampled_values(n, samples, seed)
        universe = f"sampled:{samples}:seed={seed}"
    else:
        values = universe_tables(n, universe, allow_large)
    F = compute_features(values, n)
    return scan_features(F, bound, filter, params, universe, workers)


def function_by_id(n: int, fid: int, universe: str = "monotone") -> CubeFunction:
    tables = monotone_tables(n) if universe == "monotone" else list(range(1 << (1 << n)))
    return table_to_function(tables[fid], n)


def write_csv(rows: Iterable[dict], stream, extra_fields: Sequence[str] = ()) -> None:
    w = csv.DictWriter(stream, fieldnames=CSV_FIELDS + list(extra_fields), lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow(r)


def csv_text(rows: Iterable[dict], extra_fields: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    write_csv(rows, buf, extra_fields)
    return buf.getvalue()


# -- tightness ratios -------------------------------------------------------------

RATIO_FIELDS = ["ratio_cov_I", "ratio_log", "ratio_sqrt_log"]


def tightness_row(n: int, f_id: str, g_id: str, f: CubeFunction, g: CubeFunction) -> dict:
    """Cov / I, Cov log(e/I) / I and Cov sqrt(log(2e/I)) / I for one pair."""
    cov = covariance(f, g)
    I = cross_total_influence(f, g)
    row = {"n": n, "f_id": f_id, "g_id": g_id, "bound_id": "tightness", "lhs": cov, "rhs": I, "slack": "", "satisfied": ""}
    if I <= TOL:
        row.update({k: "undefined" for k in RATIO_FIELDS})
    else:
        row["ratio_cov_I"] = cov / I
        row["ratio_log"] = cov * math.log(math.e / I) / I
        row["ratio_sqrt_log"] = cov * math.sqrt(math.log(2 * math.e / I)) / I
    return row


def tightness_scan(pairs: Iterable[tuple[str, str, CubeFunction, CubeFunction]]) -> list[dict]:
    return [tightness_row(f.n, fid, gid, f, g) for fid, gid, f, g in pairs]


def majority_sequence(ns: Iterable[int]):
    for n in ns:
        m = fam.majority(n)
        yield f"maj{n}", f"maj{n}", m, m


def tribes_sequence(configs: Iterable[tuple[int, int]]):
    """(width, count) pairs; yields tribes against dual tribes."""
    for w, c in configs:
        t = fam.tribes(w, c)
        yield f"tribes{w}x{c}", f"dual-tribes{w}x{c}", t, fam.dual(t)


def hamming_sequence(configs: Iterable[tuple[int, int]]):
    """(n, k): the radius-k Hamming ball around the all-ones point, 1{|x| >= n - k}, against its dual."""
    for n, k in configs:
        ball = fam.threshold(n, n - k)
        yield f"ball{n}_{k}", f"dual-ball{n}_{k}", ball, fam.dual(ball)

