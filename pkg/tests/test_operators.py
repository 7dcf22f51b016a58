import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cubecorr import families as fam
from cubecorr.core import CubeError, character, constant, fourier_transform, inner_product, make_function
from cubecorr.inequalities import verify_hypercontractivity, verify_reverse_hypercontractivity
from cubecorr.operators import (
    character_twist,
    coordinate_sign,
    derivative,
    derivative_spectrum,
    higher_derivative,
    noise_operator,
    restrict,
    second_derivative,
    signed_difference,
    signed_second,
)
from cubecorr.structure import classify_modularity, is_increasing

seeds = st.integers(0, 2**32 - 1)


def rand(n, seed):
    return make_function(n, np.random.default_rng(seed).normal(size=1 << n))


def test_derivative_examples():
    assert derivative(fam.dictator(1), 1).values.tolist() == [1, 1]
    d = derivative(fam.and_(2), 1)
    assert d.values.tolist() == [0, 0, 1, 1]
    assert d.mean() == 0.5 == -2 * fourier_transform(fam.and_(2))[1]


def test_signed_difference_examples(rng):
    assert signed_difference(fam.dictator(1), 1).values.tolist() == [-1, 1]
    f = make_function(6, rng.normal(size=64))
    for i in range(1, 7):
        di = signed_difference(f, i)
        assert np.allclose(signed_difference(di, i).values, 2 * di.values, atol=1e-12)
    assert not signed_difference(constant(3, 2.0), 2).values.any()


def test_second_derivative_examples():
    assert second_derivative(fam.and_(2), 1, 2).values.tolist() == [1] * 4
    assert second_derivative(fam.or_(2), 1, 2).values.tolist() == [-1] * 4
    d = second_derivative(fam.majority(3), 1, 2).values
    assert set(d[:4]) == {1} and set(d[4:]) == {-1}
    with pytest.raises(CubeError):
        second_derivative(fam.and_(2), 1, 1)


def test_signed_second_examples(rng):
    assert signed_second(fam.and_(2), 1, 2).values.tolist() == [1, -1, -1, 1]
    only3 = make_function(3, [(m >> 2) & 1 for m in range(8)], "boolean")
    assert not signed_second(only3, 1, 2).values.any()
    for _ in range(200):
        f = make_function(8, rng.integers(0, 2, 256), "boolean")
        i, j = (int(x) + 1 for x in rng.choice(8, 2, replace=False))
        v = signed_second(f, i, j).values
        assert v.min() >= -2 and v.max() <= 2 and np.all(v == np.round(v))


def test_higher_derivative_examples(rng):
    f = make_function(6, rng.normal(size=64))
    assert np.allclose(higher_derivative(f, [1, 2]).values, second_derivative(f, 1, 2).values, atol=1e-12)
    assert higher_derivative(fam.and_(3), [1, 2, 3]).values.tolist() == [1] * 8
    n = 4
    for s in range(1 << n):
        chi = character(n, s)
        for T in combinations(range(1, n + 1), 2):
            tm = (1 << (T[0] - 1)) | (1 << (T[1] - 1))
            d = higher_derivative(chi, T)
            if tm & s != tm:
                assert not d.values.any()
            else:
                # d_T chi_S = (-2)^|T| chi_{S \ T}
                assert np.array_equal(d.values, 4 * character(n, s & ~tm).values)
    with pytest.raises(CubeError):
        higher_derivative(f, [])
    with pytest.raises(CubeError):
        higher_derivative(f, [2, 2])


def test_noise_examples(rng):
    p = noise_operator(fam.dictator(1), math.log(2))
    assert np.allclose(p.values, [0.25, 0.75], atol=1e-15)
    assert np.allclose(noise_operator(constant(4, 3.0), 2.5).values, 3.0)
    f = make_function(8, rng.normal(size=256))
    assert np.max(np.abs(noise_operator(f, 40).values - f.mean())) < 1e-12
    assert noise_operator(f, 0) == f
    with pytest.raises(CubeError):
        noise_operator(f, -0.1)


def test_restrict_examples():
    a = fam.and_(2)
    assert restrict(a, 2, 1) == fam.dictator(1)
    assert not restrict(a, 2, 0).values.any()
    f = make_function(3, np.arange(8.0))
    # x_2 pinned to 1: masks with bit 1 set, higher bit shifted down
    assert restrict(f, 2, 1).values.tolist() == [2, 3, 6, 7]
    with pytest.raises(CubeError):
        restrict(fam.dictator(1), 1, 0)


def test_restriction_of_coverage_stays_monotone_submodular():
    for seed in range(1000):
        f = fam.random_coverage(6, seed)
        for b in (0, 1):
            r = restrict(f, 6, b)
            mod = classify_modularity(r, cross_check=False)
            assert is_increasing(r).holds and mod.submodular


def test_twist_examples(rng):
    f, g = make_function(6, rng.normal(size=64)), make_function(6, rng.normal(size=64))
    assert character_twist(character_twist(f, 1, 3), 1, 3) == f
    assert character_twist(constant(6, 1.0), 2, 5) == character(6, 0b10010)
    assert inner_product(character_twist(f, 1, 2), g) == pytest.approx(inner_product(f, character_twist(g, 1, 2)), abs=1e-14)


@given(seeds)
def test_derivatives_commute(seed):
    f = rand(8, seed)
    ints = make_function(8, np.random.default_rng(seed).integers(-50, 50, 256))
    for i, j in combinations(range(1, 9), 2):
        assert np.array_equal(second_derivative(f, i, j).values, second_derivative(f, j, i).values)
        assert np.array_equal(derivative(derivative(ints, j), i).values, derivative(derivative(ints, i), j).values)
        assert np.allclose(derivative(derivative(f, j), i).values, derivative(derivative(f, i), j).values, atol=1e-12)


@given(seeds, st.integers(1, 7))
def test_derivative_spectrum_formula(seed, n):
    f = rand(n, seed)
    s = fourier_transform(f).coeffs
    for i in range(1, n + 1):
        e = 1 << (i - 1)
        expected = np.zeros_like(s)
        for mask in range(1 << n):
            if mask & e:
                expected[mask ^ e] += -2 * s[mask]
        assert np.allclose(derivative_spectrum(f, [i]).coeffs, expected, atol=1e-12)


@given(seeds, st.integers(2, 7))
def test_signed_forms(seed, n):
    f = rand(n, seed)
    for i in range(1, n + 1):
        assert np.allclose(signed_difference(f, i).values, coordinate_sign(n, i) * derivative(f, i).values, atol=1e-12)
    for i, j in combinations(range(1, n + 1), 2):
        chi = character(n, (1 << (i - 1)) | (1 << (j - 1))).values
        assert np.allclose(signed_second(f, i, j).values, chi * second_derivative(f, i, j).values, atol=1e-12)


@given(seeds, st.sampled_from([0.1, 1.0, 5.0]))
def test_noise_commutes_with_derivatives(seed, t):
    f = rand(6, seed)
    for i in range(1, 7):
        assert np.allclose(noise_operator(signed_difference(f, i), t).values, signed_difference(noise_operator(f, t), i).values, atol=1e-12)
        assert np.allclose(derivative(noise_operator(f, t), i).values, math.exp(-t) * noise_operator(derivative(f, i), t).values, atol=1e-12)


@given(seeds, st.floats(0, 3), st.floats(0, 3))
def test_semigroup_law(seed, s, t):
    f = rand(6, seed)
    assert np.allclose(noise_operator(noise_operator(f, s), t).values, noise_operator(f, s + t).values, atol=1e-12)


def test_smoothed_gradient_of_increasing_is_nonnegative():
    for seed in range(100):
        f = fam.random_monotone(6, seed)
        for t in (0.1, 1.0, 3.0):
            pf = noise_operator(f, t)
            for i in range(1, 7):
                assert derivative(pf, i).values.min() >= -1e-12


def test_hypercontractivity_sample(rng):
    for _ in range(300):
        n = int(rng.integers(1, 9))
        f = make_function(n, rng.normal(size=1 << n))
        for t in (0.1, 0.5, 1, 2):
            assert verify_hypercontractivity(f, t).slack >= -1e-10


def test_reverse_hypercontractivity_sample(rng):
    for _ in range(200):
        n = int(rng.integers(1, 7))
        f = make_function(n, rng.exponential(size=1 << n))
        g = make_function(n, rng.exponential(size=1 << n))
        p, q = rng.uniform(0.05, 0.95, size=2)
        t = 0.5 * math.log(1 / ((1 - p) * (1 - q))) + rng.exponential(0.5)
        rep = verify_reverse_hypercontractivity(f, g, p, q, t)
        assert rep.applicable and rep.slack >= -1e-10


def test_reverse_hypercontractivity_guards():
    f = fam.and_(2)
    rep = verify_reverse_hypercontractivity(f, f, 0.5, 0.5, 0.1)
    assert not rep.applicable
    with pytest.raises(CubeError):
        verify_reverse_hypercontractivity(f, f, 1.5, 0.5, 1.0)
