"""Named function families and seeded random structured instances.

Random generators use numpy's PCG64 (``np.random.default_rng(seed)``), so a
given seed reproduces the same table on every platform.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .core import (
    CubeError,
    CubeFunction,
    make_function,
    parity_signs,
    popcounts,
    subset_mask,
)

FAMILIES = (
    "dictator",
    "and",
    "or",
    "majority",
    "threshold",
    "tribes",
    "dual-tribes",
    "parity",
    "linear",
    "random_monotone",
    "random_coverage",
    "random_supermodular",
)


@dataclass
class FamilySpec:
    family: str
    n: int
    coords: Optional[Sequence[int]] = None
    k: Optional[int] = None
    width: Optional[int] = None
    count: Optional[int] = None
    seed: int = 0
    universe: int = 8
    atoms: int = 6
    weights: Optional[Sequence[float]] = None
    dual: bool = False

    def to_dict(self) -> dict:
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, obj: dict) -> FamilySpec:
        unknown = set(obj) - set(cls.__dataclass_fields__)
        if unknown:
            raise CubeError(f"unknown FamilySpec field(s): {', '.join(sorted(unknown))}")
        return cls(**obj)


def _masks(n: int) -> np.ndarray:
    return np.arange(1 << n)


def _coords(n: int, coords) -> int:
    coords = range(1, n + 1) if coords is None else coords
    s = subset_mask(coords)
    if s >> n:
        raise CubeError(f"coordinates {list(coords)} exceed n={n}")
    if s == 0:
        raise CubeError("coordinate set must be nonempty")
    return s


def dictator(n: int, i: int = 1) -> CubeFunction:
    return make_function(n, (_masks(n) >> (i - 1)) & 1, "boolean")


def and_(n: int, coords=None) -> CubeFunction:
    s = _coords(n, coords)
    return make_function(n, (_masks(n) & s) == s, "boolean")


def or_(n: int, coords=None) -> CubeFunction:
    s = _coords(n, coords)
    return make_function(n, (_masks(n) & s) != 0, "boolean")


def threshold(n: int, k: int) -> CubeFunction:
    """1{sum x_i >= k}: the indicator of the complement of a Hamming ball."""
    if not 0 <= k <= n + 1:
        raise CubeError(f"threshold k={k} out of range 0..{n + 1}")
    return make_function(n, popcounts(n) >= k, "boolean")


def majority(n: int) -> CubeFunction:
    if n < 1 or n % 2 == 0:
        raise CubeError(f"majority needs odd n, got {n}")
    return threshold(n, (n + 1) // 2)


def tribes(width: int, count: int, n: Optional[int] = None) -> CubeFunction:
    """OR of ``count`` ANDs over consecutive blocks of ``width`` coordinates."""
    if width < 1 or count < 1:
        raise CubeError("tribes needs positive width and count")
    n = width * count if n is None else n
    if width * count != n:
        raise CubeError(f"tribes needs width*count = n, got {width}*{count} != {n}")
    m = _masks(n)
    hit = np.zeros(1 << n, dtype=bool)
    for b in range(count):
        block = ((1 << width) - 1) << (b * width)
        hit |= (m & block) == block
    return make_function(n, hit, "boolean")


def dual(f: CubeFunction) -> CubeFunction:
    """f*(x) = 1 - f(complement x)."""
    if f.kind != "boolean":
        raise CubeError("dual is defined for boolean functions")
    comp = (f.size - 1) ^ _masks(f.n)
    return make_function(f.n, 1.0 - f.values[comp], "boolean")


def parity(n: int, coords=None) -> CubeFunction:
    """The +-1 valued character chi_S."""
    return make_function(n, parity_signs(n, _coords(n, coords)), "real")


def linear(n: int, weights: Sequence[float]) -> CubeFunction:
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (n,):
        raise CubeError(f"linear needs {n} weights, got {w.shape}")
    bits = (_masks(n)[:, None] >> np.arange(n)) & 1
    return make_function(n, bits @ w, "real")


def random_monotone(n: int, seed: int = 0, density: Optional[float] = None) -> CubeFunction:
    """Random table repaired by upward closure (f(x) = max of the draw below x)."""
    rng = np.random.default_rng(seed)
    p = rng.uniform(0.02, 0.35) if density is None else density
    v = rng.random(1 << n) < p
    m = _masks(n)
    for k in range(n):
        e = 1 << k
        up = (m & e) != 0
        v[up] |= v[m[up] ^ e]
    return make_function(n, v, "boolean")


def random_coverage(n: int, seed: int = 0, universe: int = 8) -> CubeFunction:
    """Weighted coverage w(union of A_i over x_i = 1) / w(U): monotone submodular."""
    rng = np.random.default_rng(seed)
    sets = rng.random((n, universe)) < rng.uniform(0.15, 0.6)
    w = rng.exponential(size=universe)
    covered = np.zeros((1 << n, universe), dtype=bool)
    m = _masks(n)
    for k in range(n):
        covered |= ((m >> k) & 1).astype(bool)[:, None] & sets[k][None, :]
    vals = covered @ w / w.sum()
    return make_function(n, vals, "real")


def random_supermodular(n: int, seed: int = 0, atoms: int = 6) -> CubeFunction:
    """Nonnegative combination of AND atoms prod_{i in T} x_i, scaled into [0, 1]."""
    rng = np.random.default_rng(seed)
    m = _masks(n)
    vals = np.zeros(1 << n)
    for _ in range(atoms):
        size = int(rng.integers(1, n + 1))
        T = rng.choice(n, size=size, replace=False)
        s = int(sum(1 << int(k) for k in T))
        vals += rng.exponential() * ((m & s) == s)
    top = vals.max()
    return make_function(n, vals / top if top > 0 else vals, "real")


def atom_sum(n: int, atoms: Sequence[Sequence[int]], weights: Sequence[float]) -> CubeFunction:
    """sum_T w_T prod_{i in T} x_i for explicit 1-based atoms."""
    m = _masks(n)
    vals = np.zeros(1 << n)
    for T, w in zip(atoms, weights):
        s = subset_mask(T)
        vals += w * ((m & s) == s)
    return make_function(n, vals, "real")


def generate(spec: FamilySpec) -> CubeFunction:
    fam, n = spec.family, spec.n
    if fam == "dictator":
        coords = spec.coords or [1]
        if len(coords) != 1:
            raise CubeError("dictator takes exactly one coordinate")
        f = dictator(n, coords[0])
    elif fam == "and":
        f = and_(n, spec.coords)
    elif fam == "or":
        f = or_(n, spec.coords)
    elif fam == "majority":
        f = majority(n)
    elif fam == "threshold":
        if spec.k is None:
            raise CubeError("threshold needs k")
        f = threshold(n, spec.k)
    elif fam in ("tribes", "dual-tribes"):
        if spec.width is None:
            raise CubeError("tribes needs width")
        count = spec.count if spec.count is not None else n // spec.width
        f = tribes(spec.width, count, n)
        if fam == "dual-tribes":
            f = dual(f)
    elif fam == "parity":
        f = parity(n, spec.coords)
    elif fam == "linear":
        f = linear(n, spec.weights if spec.weights is not None else np.ones(n) / n)
    elif fam == "random_monotone":
        f = random_monotone(n, spec.seed)
    elif fam == "random_coverage":
        f = random_coverage(n, spec.seed, spec.universe)
    elif fam == "random_supermodular":
        f = random_supermodular(n, spec.seed, spec.atoms)
    else:
        raise CubeError(f"unknown family {fam!r}; choose from {', '.join(FAMILIES)}")
    if spec.dual:
        f = dual(f)
    return f


# -- random pairs with prescribed structure --------------------------------------

def matching_pair(n: int, rng: np.random.Generator, kind: Optional[str] = None) -> tuple[CubeFunction, CubeFunction]:
    """Two increasing real functions that are both sub- or both supermodular."""
    kind = kind or ("submodular" if rng.random() < 0.5 else "supermodular")
    a, b = (int(x) for x in rng.integers(0, 2**31, size=2))
    if kind == "submodular":
        return random_coverage(n, a, int(rng.integers(3, 12))), random_coverage(n, b, int(rng.integers(3, 12)))
    return random_supermodular(n, a, int(rng.integers(1, 8))), random_supermodular(n, b, int(rng.integers(1, 8)))


def disjoint_interaction_pair(n: int, rng: np.random.Generator) -> tuple[CubeFunction, CubeFunction]:
    """Supermodular pair (negated together half the time) whose interaction graphs share no edge."""
    pairs = list(combinations(range(1, n + 1), 2))
    order = rng.permutation(len(pairs))
    split = int(rng.integers(0, len(pairs) + 1))
    mine = {pairs[k] for k in order[:split]}
    theirs = [pairs[k] for k in order[split:]]
    # f: cliques drawn from its own edges, so every pair inside an atom is its own
    f_atoms = [list(p) for p in mine if rng.random() < 0.7]
    g_atoms = [list(p) for p in theirs if rng.random() < 0.5]
    f_atoms += [[i] for i in range(1, n + 1)]
    g_atoms += [[i] for i in range(1, n + 1)]
    f = atom_sum(n, f_atoms, rng.exponential(size=len(f_atoms)))
    g = atom_sum(n, g_atoms, rng.exponential(size=len(g_atoms)))
    if rng.random() < 0.5:
        f, g = -f, -g
    return f, g


def shared_edge_pair(n: int, rng: np.random.Generator) -> tuple[CubeFunction, CubeFunction, tuple[int, int]]:
    """Matching-sign pair that both interact on one chosen edge."""
    i, j = sorted(int(x) + 1 for x in rng.choice(n, size=2, replace=False))
    pairs = list(combinations(range(1, n + 1), 2))
    f_atoms = [[i, j]] + [list(p) for p in pairs if rng.random() < 0.3]
    g_atoms = [[i, j]] + [list(p) for p in pairs if rng.random() < 0.3]
    for atoms in (f_atoms, g_atoms):
        for _ in range(int(rng.integers(0, 3))):
            size = int(rng.integers(3, n + 1)) if n >= 3 else 2
            atoms.append(sorted(int(x) + 1 for x in rng.choice(n, size=size, replace=False)))
    f = atom_sum(n, f_atoms, rng.exponential(size=len(f_atoms)))
    g = atom_sum(n, g_atoms, rng.exponential(size=len(g_atoms)))
    if rng.random() < 0.5:
        f, g = -f, -g
    return f, g, (i, j)


def random_real(n: int, rng: np.random.Generator) -> CubeFunction:
    return make_function(n, rng.normal(size=1 << n), "real")
