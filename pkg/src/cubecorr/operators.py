"""Discrete derivatives, signed differences, the noise semigroup and restrictions.

All derivative-type operators return full-dimension tables that are constant
along the differentiated coordinates, so they can be evaluated at any x.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .core import (
    CubeError,
    CubeFunction,
    Spectrum,
    check_coordinate,
    fourier_transform,
    fwht,
    parity_signs,
    popcounts,
    subset_mask,
)


def _index(n: int) -> np.ndarray:
    return np.arange(1 << n)


def _distinct(n: int, i: int, j: int) -> tuple[int, int]:
    check_coordinate(n, i)
    check_coordinate(n, j)
    if i == j:
        raise CubeError(f"coordinates must differ, got i = j = {i}")
    return int(i), int(j)


def derivative(f: CubeFunction, i: int) -> CubeFunction:
    """(d_i f)(x) = f(x with x_i=1) - f(x with x_i=0)."""
    check_coordinate(f.n, i)
    e = 1 << (i - 1)
    m = _index(f.n)
    v = f.values
    return CubeFunction(f.n, v[m | e] - v[m & ~e])


def signed_difference(f: CubeFunction, i: int) -> CubeFunction:
    """(D_i f)(x) = f(x) - f(x xor e_i)."""
    check_coordinate(f.n, i)
    e = 1 << (i - 1)
    v = f.values
    return CubeFunction(f.n, v - v[_index(f.n) ^ e])


def second_derivative(f: CubeFunction, i: int, j: int) -> CubeFunction:
    i, j = _distinct(f.n, i, j)
    ei, ej = 1 << (i - 1), 1 << (j - 1)
    base = _index(f.n) & ~(ei | ej)
    v = f.values
    # grouped so that swapping i and j gives bit-identical results
    return CubeFunction(f.n, (v[base | ei | ej] + v[base]) - (v[base | ei] + v[base | ej]))


def signed_second(f: CubeFunction, i: int, j: int) -> CubeFunction:
    """D_ij f(x) = f(x) + f(x xor e_ij) - f(x xor e_i) - f(x xor e_j)."""
    i, j = _distinct(f.n, i, j)
    ei, ej = 1 << (i - 1), 1 << (j - 1)
    m = _index(f.n)
    v = f.values
    return CubeFunction(f.n, (v + v[m ^ (ei | ej)]) - (v[m ^ ei] + v[m ^ ej]))


def higher_derivative(f: CubeFunction, coords: Iterable[int]) -> CubeFunction:
    """Iterated derivative over a set of distinct coordinates."""
    coords = list(coords)
    if not coords:
        raise CubeError("coordinate set must be nonempty")
    if len(set(coords)) != len(coords):
        raise CubeError(f"repeated coordinate in {coords}")
    for i in coords:
        check_coordinate(f.n, i)
    out = f
    for i in coords:
        out = derivative(out, i)
    return out


def noise_multipliers(n: int, t: float) -> np.ndarray:
    return np.exp(-t * popcounts(n).astype(np.float64))


def noise_operator(f: CubeFunction, t: float) -> CubeFunction:
    """P_t f: multiply the Fourier coefficient at S by exp(-t |S|)."""
    if not t >= 0:
        raise CubeError(f"noise time must be nonnegative, got {t}")
    if t == 0:
        return f.as_real()
    coeffs = fwht(f.values) * (1.0 / f.size)
    return CubeFunction(f.n, fwht(coeffs * noise_multipliers(f.n, t)))


def noise_spectrum(s: Spectrum, t: float) -> Spectrum:
    if not t >= 0:
        raise CubeError(f"noise time must be nonnegative, got {t}")
    return Spectrum(s.n, s.coeffs * noise_multipliers(s.n, t))


def restrict(f: CubeFunction, i: int, b: int) -> CubeFunction:
    """Pin x_i = b and re-pack the other coordinates into dimension n - 1.

    Coordinates above i shift down by one place.
    """
    if f.n < 2:
        raise CubeError("restriction needs n >= 2")
    check_coordinate(f.n, i)
    if b not in (0, 1):
        raise CubeError(f"restriction bit must be 0 or 1, got {b!r}")
    k = i - 1
    r = np.arange(1 << (f.n - 1))
    low = r & ((1 << k) - 1)
    high = (r >> k) << (k + 1)
    src = high | (b << k) | low
    return CubeFunction(f.n - 1, f.values[src], f.kind)


def character_twist(f: CubeFunction, i: int, j: int) -> CubeFunction:
    """Pointwise product with chi_{i,j}(x) = (-1)^(x_i + x_j)."""
    i, j = _distinct(f.n, i, j)
    return CubeFunction(f.n, f.values * parity_signs(f.n, subset_mask((i, j))))


def coordinate_sign(n: int, i: int) -> np.ndarray:
    """(-1)^(x_i + 1): the pointwise factor relating D_i to d_i."""
    check_coordinate(n, i)
    return -parity_signs(n, 1 << (i - 1))


def derivative_spectrum(f: CubeFunction, coords: Iterable[int]) -> Spectrum:
    return fourier_transform(higher_derivative(f, coords))

