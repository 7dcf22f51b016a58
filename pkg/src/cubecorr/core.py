"""Dense functions on the hypercube {0,1}^n and their Fourier-Walsh spectra.

Coordinate i (1-based) of a point x is bit (i - 1) of the mask that indexes
the value table, so ``values[m] == f(x)`` with ``x_i = (m >> (i - 1)) & 1``.
Characters are ``chi_S(x) = (-1)^popcount(S & m)``.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Literal

import numpy as np

TOL = 1e-12
DEFAULT_MAX_N = 26
MAX_N_ENV = "CUBECORR_MAX_N"

Kind = Literal["boolean", "real"]


class CubeError(ValueError):
    """Base class for invalid hypercube inputs."""


class ConstructionError(CubeError):
    pass


class ValidationError(CubeError):
    pass


class DimensionMismatch(CubeError):
    pass


def max_n() -> int:
    raw = os.environ.get(MAX_N_ENV)
    if raw is None:
        return DEFAULT_MAX_N
    try:
        return int(raw)
    except ValueError:
        raise ConstructionError(f"{MAX_N_ENV}={raw!r} is not an integer") from None


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class CubeFunction:
    """A real or Boolean valued table over {0,1}^n under the uniform measure."""

    n: int
    values: np.ndarray
    kind: Kind = "real"

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))

    @property
    def size(self) -> int:
        return 1 << self.n

    def mean(self) -> float:
        return float(self.values.mean())

    def __eq__(self, other):
        if not isinstance(other, CubeFunction):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.values, other.values)

    def __neg__(self) -> CubeFunction:
        return CubeFunction(self.n, -self.values, "real")

    def allclose(self, other: CubeFunction, atol: float = TOL) -> bool:
        return self.n == other.n and bool(np.allclose(self.values, other.values, rtol=0, atol=atol))

    def as_real(self) -> CubeFunction:
        return self if self.kind == "real" else CubeFunction(self.n, self.values, "real")

    def __repr__(self):
        if self.n <= 4:
            body = ", ".join(f"{v:g}" for v in self.values)
            return f"CubeFunction(n={self.n}, kind={self.kind!r}, values=[{body}])"
        return f"CubeFunction(n={self.n}, kind={self.kind!r})"


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Fourier-Walsh coefficients ``coeffs[S] = E[f chi_S]`` indexed by subset mask."""

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen(self.coeffs))
        if self.coeffs.shape != (1 << self.n,):
            raise ConstructionError(
                f"spectrum of dimension {self.n} needs {1 << self.n} coefficients, got {self.coeffs.shape}"
            )

    def __getitem__(self, subset) -> float:
        return float(self.coeffs[subset if isinstance(subset, (int, np.integer)) else subset_mask(subset)])

    def level(self, d: int) -> np.ndarray:
        """Coefficients with ``popcount(S) == d`` zeroed elsewhere."""
        return np.where(popcounts(self.n) == d, self.coeffs, 0.0)


def make_function(n: int, values: Iterable[float], kind: Kind = "real", *, limit: int | None = None) -> CubeFunction:
    """Validate and wrap a value table.

    Raises:
        ConstructionError: wrong length, bad dimension or unknown kind.
        ValidationError: a Boolean table holding something other than 0.0/1.0.
    """
    limit = max_n() if limit is None else limit
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise ConstructionError(f"dimension must be a nonnegative integer, got {n!r}")
    if n > limit:
        raise ConstructionError(f"dimension {n} exceeds max_n={limit}")
    if kind not in ("boolean", "real"):
        raise ConstructionError(f"unknown kind {kind!r}")
    arr = np.asarray(values, dtype=np.float64).ravel()
    if arr.shape[0] != 1 << n:
        raise ConstructionError(f"dimension {n} needs {1 << n} values, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("values must be finite")
    if kind == "boolean":
        bad = np.flatnonzero((arr != 0.0) & (arr != 1.0))
        if bad.size:
            m = int(bad[0])
            raise ValidationError(f"boolean function has value {arr[m]!r} at mask {m}")
    return CubeFunction(int(n), arr, kind)


def boolean(n: int, values: Iterable[float]) -> CubeFunction:
    return make_function(n, values, "boolean")


def real(n: int, values: Iterable[float]) -> CubeFunction:
    return make_function(n, values, "real")


def from_callable(n: int, fn, kind: Kind = "real") -> CubeFunction:
    """Tabulate ``fn(x)`` where ``x`` is a tuple ``(x_1, ..., x_n)`` of 0/1 ints."""
    vals = [fn(tuple((m >> k) & 1 for k in range(n))) for m in range(1 << n)]
    return make_function(n, vals, kind)


def constant(n: int, c: float) -> CubeFunction:
    kind = "boolean" if c in (0.0, 1.0) else "real"
    return make_function(n, np.full(1 << n, float(c)), kind)


def character(n: int, subset) -> CubeFunction:
    """The +-1 valued character chi_S."""
    s = subset if isinstance(subset, (int, np.integer)) else subset_mask(subset)
    return CubeFunction(n, parity_signs(n, int(s)), "real")


# -- bit helpers ------------------------------------------------------------

def subset_mask(coords: Iterable[int]) -> int:
    """1-based coordinate set -> bitmask."""
    m = 0
    for i in coords:
        if i < 1:
            raise CubeError(f"coordinates are 1-based, got {i}")
        m |= 1 << (i - 1)
    return m


def mask_coords(mask: int) -> tuple[int, ...]:
    return tuple(k + 1 for k in range(int(mask).bit_length()) if (mask >> k) & 1)


_POPCOUNT_CACHE: dict[int, np.ndarray] = {}


def popcounts(n: int) -> np.ndarray:
    """``popcount(m)`` for every mask ``m < 2**n`` (cached, read-only)."""
    cached = _POPCOUNT_CACHE.get(n)
    if cached is None:
        pc = np.zeros(1 << n, dtype=np.int64)
        for k in range(n):
            half = 1 << k
            pc[half : 2 * half] = pc[:half] + 1
        pc.setflags(write=False)
        if n <= 20:
            _POPCOUNT_CACHE[n] = pc
        cached = pc
    return cached


def bit_values(n: int, i: int) -> np.ndarray:
    """Coordinate x_i as a 0/1 integer array over all masks."""
    return (np.arange(1 << n) >> (i - 1)) & 1


def parity_signs(n: int, s: int) -> np.ndarray:
    return 1.0 - 2.0 * (popcounts(n)[np.arange(1 << n) & s] & 1)


def check_coordinate(n: int, i: int) -> int:
    if not isinstance(i, (int, np.integer)) or not 1 <= i <= n:
        raise CubeError(f"coordinate {i!r} out of range 1..{n}")
    return int(i)


def same_dimension(f: CubeFunction | Spectrum, g: CubeFunction | Spectrum) -> int:
    if f.n != g.n:
        raise DimensionMismatch(f"dimension mismatch: {f.n} vs {g.n}")
    return f.n


# -- transforms -------------------------------------------------------------

def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform along the last axis.

    Butterflies run from the lowest bit upward, so the summation order is fixed.
    Works on a copy; leading axes are treated as a batch.
    """
    a = np.array(values, dtype=np.float64, copy=True)
    size = a.shape[-1]
    n = size.bit_length() - 1
    if size != 1 << n:
        raise ConstructionError(f"length {size} is not a power of two")
    batch = a.shape[:-1]
    h = 1
    while h < size:
        view = a.reshape(*batch, size // (2 * h), 2, h)
        lo = view[..., 0, :].copy()
        hi = view[..., 1, :]
        view[..., 0, :] += hi
        np.subtract(lo, hi, out=view[..., 1, :])
        h *= 2
    return a


def fourier_transform(f: CubeFunction) -> Spectrum:
    return Spectrum(f.n, fwht(f.values) * (1.0 / f.size))


def inverse_transform(s: Spectrum) -> CubeFunction:
    return CubeFunction(s.n, fwht(s.coeffs), "real")


def spectrum(f: CubeFunction | Spectrum) -> Spectrum:
    return f if isinstance(f, Spectrum) else fourier_transform(f)


# -- scalar functionals -----------------------------------------------------

def expectation(f: CubeFunction) -> float:
    return f.mean()


def inner_product(f: CubeFunction, g: CubeFunction) -> float:
    same_dimension(f, g)
    return float(np.dot(f.values, g.values) / f.size)


def lp_norm(f: CubeFunction | np.ndarray, p: float) -> float:
    """(E|f|^p)^(1/p); a quasi-norm for 0 < p < 1.

    Accepts a bare value array as well, for use on derivative tables.
    """
    if not p > 0:
        raise CubeError(f"L^p exponent must be positive, got {p}")
    vals = f.values if isinstance(f, CubeFunction) else np.asarray(f, dtype=np.float64)
    a = np.abs(vals)
    top = a.max(initial=0.0)
    if top == 0:
        return 0.0
    if p == 1:
        return float(np.mean(a))
    # scaling by the largest entry keeps a**p clear of underflow and overflow
    a = a / top
    if p == 2:
        return float(top * np.sqrt(np.mean(a * a)))
    return float(top * np.mean(a**p) ** (1.0 / p))


def covariance(f: CubeFunction, g: CubeFunction) -> float:
    same_dimension(f, g)
    # centring first avoids the cancellation in E[fg] - E[f]E[g]
    fc = f.values - f.values.mean()
    gc = g.values - g.values.mean()
    return float(np.dot(fc, gc) / f.size)


def level_weight_cross(sf: Spectrum, sg: Spectrum, d: int) -> float:
    """Sum of ``sf[S] * sg[S]`` over ``|S| >= d``; empty (zero) when d > n."""
    n = same_dimension(sf, sg)
    if d < 0:
        raise CubeError(f"level threshold must be nonnegative, got {d}")
    sel = popcounts(n) >= d
    return float(np.dot(sf.coeffs[sel], sg.coeffs[sel]))


def level1_cross(sf: Spectrum, sg: Spectrum) -> float:
    """Sum over singletons of ``sf[{i}] * sg[{i}]``."""
    n = same_dimension(sf, sg)
    idx = [1 << k for k in range(n)]
    return float(np.dot(sf.coeffs[idx], sg.coeffs[idx]))


# -- serialization ----------------------------------------------------------

def function_to_json(f: CubeFunction, compact: bool = False) -> dict:
    if compact:
        if f.kind != "boolean":
            raise CubeError("bits_hex encoding needs a boolean function")
        bits = 0
        for m in np.flatnonzero(f.values):
            bits |= 1 << int(m)
        width = max(1, (f.size + 3) // 4)
        return {"n": f.n, "bits_hex": format(bits, f"0{width}x")}
    vals = [int(v) if f.kind == "boolean" else float(v) for v in f.values]
    return {"n": f.n, "kind": f.kind, "values": vals}


def function_from_json(obj: dict) -> CubeFunction:
    if not isinstance(obj, dict) or "n" not in obj:
        raise ConstructionError("function JSON needs an object with key 'n'")
    n = obj["n"]
    if "bits_hex" in obj:
        try:
            bits = int(obj["bits_hex"], 16)
        except (TypeError, ValueError):
            raise ConstructionError(f"bits_hex {obj['bits_hex']!r} is not hexadecimal") from None
        if bits >> (1 << n):
            raise ConstructionError(f"bits_hex has bits beyond mask {(1 << n) - 1}")
        vals = [(bits >> m) & 1 for m in range(1 << n)]
        return make_function(n, vals, "boolean")
    if "values" not in obj:
        raise ConstructionError("function JSON needs 'values' or 'bits_hex'")
    return make_function(n, obj["values"], obj.get("kind", "real"))


def spectrum_to_json(s: Spectrum) -> dict:
    return {"n": s.n, "coeffs": [float(c) for c in s.coeffs]}


def spectrum_from_json(obj: dict) -> Spectrum:
    if not isinstance(obj, dict) or "n" not in obj or "coeffs" not in obj:
        raise ConstructionError("spectrum JSON needs keys 'n' and 'coeffs'")
    return Spectrum(int(obj["n"]), np.asarray(obj["coeffs"], dtype=np.float64))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_function(path: str | Path) -> CubeFunction:
    return function_from_json(_read_json(path))


def load_spectrum(path: str | Path) -> Spectrum:
    return spectrum_from_json(_read_json(path))


def save_json(obj, path: str | Path) -> None:
    Path(path).write_text(dumps(obj))


def _read_json(path: str | Path):
    p = Path(path)
    try:
        text = p.read_text()
    except FileNotFoundError:
        raise ConstructionError(f"{p}: no such file") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ConstructionError(f"{p}: malformed JSON ({e.msg} at line {e.lineno})") from None
