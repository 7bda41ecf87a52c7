import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from expray.expcore import (
    T_MAX,
    Status,
    apply_map,
    escape_indices,
    potential_iter,
    potential_step,
    singular_orbit,
    singular_orbit_with_derivative,
)


@pytest.mark.parametrize(
    "kappa, z, expected",
    [(0, 0, 1), (1j * math.pi, 0, 1 + 1j * math.pi), (1, math.log(2), 3)],
)
def test_apply_map(kappa, z, expected):
    assert apply_map(kappa, z) == pytest.approx(expected, abs=1e-15)


def test_apply_map_flags_overflow():
    assert apply_map(0, T_MAX + 1) is None
    assert apply_map(0, T_MAX) is not None


def test_large_kappa_escapes_fast():
    res = singular_orbit(10)
    assert res.escaped
    assert res.escape_index <= 3


def test_zero_escapes_along_real_axis():
    res = singular_orbit(0, record_orbit=True)
    assert res.escaped
    re = [z.real for z in res.orbit]
    assert all(b > a for a, b in zip(re, re[1:]))
    assert all(z.imag == 0 for z in res.orbit)
    assert len(res.orbit) == res.escape_index + 1


def test_attracting_fixed_point_is_bounded():
    # oracle: the real fixed point of e^z - 2 and its multiplier
    z = brentq(lambda x: math.exp(x) - 2 - x, -3, -1)
    assert z == pytest.approx(-1.8414, abs=1e-4)
    assert abs(math.exp(z)) < 1
    for n_max in (10, 100, 1000):
        res = singular_orbit(-2, n_max=n_max, record_orbit=True)
        assert res.status is Status.BOUNDED
        assert len(res.orbit) == n_max + 1
    assert res.final_value == pytest.approx(z, abs=1e-9)


def test_escaped_invariant():
    rng = np.random.default_rng(3)
    for _ in range(200):
        k = complex(*rng.uniform(-4, 4, 2))
        res = singular_orbit(k, n_max=60)
        if res.status is Status.ESCAPED:
            assert res.final_value.real > 50


def test_singular_orbit_rejects_bad_arguments():
    with pytest.raises(ValueError):
        singular_orbit(0, n_max=0)
    with pytest.raises(ValueError):
        singular_orbit(0, escape_re=1.0)


def test_vectorized_matches_scalar():
    rng = np.random.default_rng(11)
    ks = rng.uniform(-3, 3, 400) + 1j * rng.uniform(-4, 4, 400)
    idx = escape_indices(ks, 60)
    for k, i in zip(ks, idx):
        res = singular_orbit(k, 60)
        assert (i >= 0) == res.escaped
        if res.escaped:
            assert i == res.escape_index


def test_conjugate_orbit_is_bitwise_conjugate():
    rng = np.random.default_rng(5)
    for _ in range(150):
        k = complex(*rng.uniform(-5, 5, 2))
        a = singular_orbit(k, 40, record_orbit=True)
        b = singular_orbit(k.conjugate(), 40, record_orbit=True)
        assert a.status == b.status and a.escape_index == b.escape_index
        for u, v in zip(a.orbit, b.orbit):
            assert u.real == v.real and u.imag == -v.imag


def test_derivative_seeds():
    orb = singular_orbit_with_derivative(0, 2)
    assert orb.derivs[0] == 1
    assert orb.derivs[1] == 2
    assert orb.derivs[2] == pytest.approx(2 * math.e + 1, rel=1e-15)
    assert abs(orb.derivs[2]) == pytest.approx(6.43656, abs=1e-5)


def test_derivative_matches_finite_difference():
    k, h = 0.3 + 0.4j, 1e-6

    def e3(c):
        z = c
        for _ in range(3):
            z = cmath.exp(z) + c
        return z

    fd = (e3(k + h) - e3(k - h)) / (2 * h)
    an = singular_orbit_with_derivative(k, 3).derivs[3]
    assert abs(an - fd) / abs(fd) < 1e-5


def test_derivative_recursion_is_exact_as_computed():
    rng = np.random.default_rng(8)
    for _ in range(50):
        k = complex(*rng.uniform(-3, 3, 2))
        orb = singular_orbit_with_derivative(k, 20)
        for n in range(len(orb.derivs) - 1):
            assert orb.derivs[n + 1] == cmath.exp(orb.values[n]) * orb.derivs[n] + 1


def test_derivative_stops_at_guard():
    orb = singular_orbit_with_derivative(10, 10)
    assert orb.clamped
    assert len(orb.values) == 2
    assert all(math.isfinite(abs(d)) for d in orb.derivs)


def test_potential_step():
    assert potential_step(0) == 1
    assert potential_step(1) == pytest.approx(math.e - 1)
    with pytest.raises(ValueError):
        potential_step(-0.1)


def test_potential_iter_clamps():
    f1 = math.exp(3) - 3
    f2 = math.exp(f1) - f1
    assert f1 == pytest.approx(17.0855, abs=1e-4)
    assert f2 == pytest.approx(2.6312e7, rel=1e-4)
    value, clamped_at = potential_iter(3, 5)
    assert clamped_at == 3
    assert value == f2
    assert potential_iter(3, 2) == (f2, None)
    with pytest.raises(ValueError):
        potential_iter(-1, 3)


@given(st.floats(min_value=1e-6, max_value=50))
def test_potential_increases(t):
    assert potential_step(t) > t
    assert potential_step(t * 1.01) > potential_step(t)


@settings(max_examples=50)
@given(st.floats(min_value=0.01, max_value=5))
def test_potential_iter_strictly_increasing_until_clamp(t):
    values = [t]
    for n in range(1, 6):
        v, c = potential_iter(t, n)
        if c is not None:
            break
        values.append(v)
    assert all(b > a for a, b in zip(values, values[1:]))
