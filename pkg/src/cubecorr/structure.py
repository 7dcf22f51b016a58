"""Structural classification: monotonicity, sub/supermodularity, antipodality,
influences and interaction graphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

import numpy as np

from .core import (
    TOL,
    CubeError,
    CubeFunction,
    fourier_transform,
    check_coordinate,
    same_dimension,
)
from .operators import derivative, second_derivative

LATTICE_MAX_N = 10


class NotApplicable(CubeError):
    """The operation is undefined for this kind of input."""


@dataclass(frozen=True)
class Verdict:
    holds: bool
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.holds


@dataclass(frozen=True)
class Modularity:
    """Sign pattern of the mixed second differences.

    ``sub_witness`` is a point (mask, i, j) where d_ij f > 0, refuting
    submodularity; ``super_witness`` one where d_ij f < 0.
    """

    submodular: bool
    supermodular: bool
    sub_witness: Optional[tuple] = None
    super_witness: Optional[tuple] = None
    lattice: Optional[tuple[bool, bool]] = None
    chain: Optional[tuple[bool, bool]] = None

    @property
    def label(self) -> str:
        if self.submodular and self.supermodular:
            return "modular"
        if self.submodular:
            return "submodular"
        if self.supermodular:
            return "supermodular"
        return "neither"

    @property
    def sign(self) -> int:
        """+1 supermodular only, -1 submodular only, 0 modular, None neither."""
        return {"modular": 0, "submodular": -1, "supermodular": 1}.get(self.label)

    @property
    def characterizations_agree(self) -> Optional[bool]:
        if self.lattice is None:
            return None
        want = (self.submodular, self.supermodular)
        return self.lattice == want and self.chain == want


def matching_modularity(a: Modularity, b: Modularity) -> bool:
    """Both submodular or both supermodular."""
    return (a.submodular and b.submodular) or (a.supermodular and b.supermodular)


def second_derivatives(f: CubeFunction) -> dict[tuple[int, int], np.ndarray]:
    """All d_ij f for i < j, keyed by the coordinate pair."""
    return {
        (i, j): second_derivative(f, i, j).values
        for i, j in combinations(range(1, f.n + 1), 2)
    }


# -- monotonicity -----------------------------------------------------------

def is_increasing(f: CubeFunction, tol: float = TOL) -> Verdict:
    """Witness ``(mask, i)``: mask has x_i = 0 and f(mask) > f(mask | e_i)."""
    for i in range(1, f.n + 1):
        d = derivative(f, i).values
        bad = np.flatnonzero(d < -tol)
        if bad.size:
            m = int(bad[0]) & ~(1 << (i - 1))
            return Verdict(False, (m, i))
    return Verdict(True)


# -- modularity -------------------------------------------------------------

def classify_modularity(f: CubeFunction, tol: float = TOL, cross_check: bool | None = None) -> Modularity:
    """Classify by the sign of every d_ij f.

    For n <= 10 (or when ``cross_check`` is forced on) the lattice inequality
    over all 4^n pairs and the diminishing-returns form are evaluated too.
    """
    sub_w = super_w = None
    for (i, j), d in second_derivatives(f).items():
        if sub_w is None:
            hi = np.flatnonzero(d > tol)
            if hi.size:
                sub_w = (int(hi[0]) & ~((1 << (i - 1)) | (1 << (j - 1))), i, j)
        if super_w is None:
            lo = np.flatnonzero(d < -tol)
            if lo.size:
                super_w = (int(lo[0]) & ~((1 << (i - 1)) | (1 << (j - 1))), i, j)
        if sub_w is not None and super_w is not None:
            break
    if cross_check is None:
        cross_check = f.n <= LATTICE_MAX_N
    lattice = chain = None
    if cross_check:
        lattice = lattice_check(f, tol)
        chain = diminishing_returns_check(f, tol)
    return Modularity(sub_w is None, super_w is None, sub_w, super_w, lattice, chain)


def lattice_check(f: CubeFunction, tol: float = TOL) -> tuple[bool, bool]:
    """(submodular, supermodular) from f(x)+f(y) versus f(x&y)+f(x|y)."""
    v = f.values
    m = np.arange(f.size)
    sub = sup = True
    # row blocks keep the pair table small
    block = max(1, (1 << 20) // f.size)
    for start in range(0, f.size, block):
        x = m[start : start + block, None]
        gap = v[x] + v[None, :] - v[x & m[None, :]] - v[x | m[None, :]]
        sub = sub and not bool((gap < -tol).any())
        sup = sup and not bool((gap > tol).any())
        if not (sub or sup):
            break
    return sub, sup


def diminishing_returns_check(f: CubeFunction, tol: float = TOL) -> tuple[bool, bool]:
    """(submodular, supermodular) from marginal gains along chains A <= B, k not in B."""
    v = f.values
    masks = np.arange(f.size)
    sub = sup = True
    for k in range(f.n):
        ek = 1 << k
        gain = v[masks | ek] - v[masks & ~ek]
        lo = gain.copy()  # min of gain over subsets
        hi = gain.copy()  # max of gain over subsets
        for b in range(f.n):
            if b == k:
                continue
            eb = 1 << b
            has = (masks & eb) != 0
            lo[has] = np.minimum(lo[has], lo[masks[has] ^ eb])
            hi[has] = np.maximum(hi[has], hi[masks[has] ^ eb])
        outside = (masks & ek) == 0
        # submodular: gain(A) >= gain(B) for every A within B
        sub = sub and bool(np.all(lo[outside] >= gain[outside] - tol))
        sup = sup and bool(np.all(hi[outside] <= gain[outside] + tol))
    return sub, sup


# -- antipodality -----------------------------------------------------------

def is_antipodal(f: CubeFunction) -> Verdict:
    """g(x) = 1 - g(complement x); witness is the first failing mask."""
    if f.kind != "boolean":
        raise NotApplicable("antipodality is only defined for boolean functions")
    comp = (f.size - 1) ^ np.arange(f.size)
    bad = np.flatnonzero(f.values != 1.0 - f.values[comp])
    if bad.size:
        return Verdict(False, (int(bad[0]),))
    return Verdict(True)


# -- influences -------------------------------------------------------------

def influence(f: CubeFunction, i: int, p: float = 2) -> float:
    """E|d_i f|^p. At p = 2 and boolean f this is the flip probability."""
    if not p > 0:
        raise CubeError(f"influence exponent must be positive, got {p}")
    check_coordinate(f.n, i)
    d = np.abs(derivative(f, i).values)
    if p == 2:
        return float(np.mean(d * d))
    if p == 1:
        return float(np.mean(d))
    return float(np.mean(d**p))


def influences(f: CubeFunction, p: float = 2) -> np.ndarray:
    return np.array([influence(f, i, p) for i in range(1, f.n + 1)])


def total_influence(f: CubeFunction, p: float = 2) -> float:
    return float(influences(f, p).sum())


def cross_total_influence(f: CubeFunction, g: CubeFunction) -> float:
    same_dimension(f, g)
    if f.kind != "boolean" or g.kind != "boolean":
        raise NotApplicable("cross-total-influence is defined for boolean pairs")
    return float(np.dot(influences(f), influences(g)))


# -- interaction graph ------------------------------------------------------

@dataclass(frozen=True)
class InteractionGraph:
    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __contains__(self, edge) -> bool:
        i, j = edge
        return (min(i, j), max(i, j)) in self.edges

    def shares_edge(self, other: InteractionGraph) -> bool:
        return bool(self.edges & other.edges)

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": sorted([list(e) for e in self.edges])}


def interaction_graph(f: CubeFunction, tol: float = TOL) -> InteractionGraph:
    edges = frozenset(
        pair for pair, d in second_derivatives(f).items() if np.max(np.abs(d)) > tol
    )
    return InteractionGraph(f.n, edges)


# -- profile ----------------------------------------------------------------

@dataclass
class StructureProfile:
    n: int
    kind: str
    increasing: Verdict
    modularity: Modularity
    antipodal: Optional[Verdict]
    influences_l2: np.ndarray
    influences_lp: dict
    total_influence: float
    interaction: InteractionGraph

    def to_dict(self) -> dict:
        mod = self.modularity
        return {
            "n": self.n,
            "kind": self.kind,
            "increasing": {"holds": self.increasing.holds, "witness": _listify(self.increasing.witness)},
            "modularity": {
                "class": mod.label,
                "submodular": mod.submodular,
                "supermodular": mod.supermodular,
                "submodular_witness": _listify(mod.sub_witness),
                "supermodular_witness": _listify(mod.super_witness),
                "characterizations_agree": mod.characterizations_agree,
            },
            "antipodal": None
            if self.antipodal is None
            else {"holds": self.antipodal.holds, "witness": _listify(self.antipodal.witness)},
            "influences_l2": [float(x) for x in self.influences_l2],
            "influences_lp": {str(p): [float(x) for x in v] for p, v in self.influences_lp.items()},
            "total_influence": self.total_influence,
            "interaction_graph": self.interaction.to_dict(),
        }


def _listify(w):
    return None if w is None else [int(x) for x in w]


def analyze(f: CubeFunction, ps: Iterable[float] = (1, 2)) -> StructureProfile:
    inf2 = influences(f, 2)
    return StructureProfile(
        n=f.n,
        kind=f.kind,
        increasing=is_increasing(f),
        modularity=classify_modularity(f),
        antipodal=is_antipodal(f) if f.kind == "boolean" else None,
        influences_l2=inf2,
        influences_lp={p: influences(f, p) for p in ps},
        total_influence=float(inf2.sum()),
        interaction=interaction_graph(f),
    )


def level_one(f: CubeFunction) -> np.ndarray:
    """Singleton Fourier coefficients f^({1}), ..., f^({n})."""
    s = fourier_transform(f)
    return np.array([s.coeffs[1 << k] for k in range(f.n)])
