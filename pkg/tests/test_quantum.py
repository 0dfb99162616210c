import math

import numpy as np
import pytest
from scipy import special

from fisher_renyi import (
    DomainError,
    QuantumState,
    complexity,
    energy,
    gegenbauer,
    laguerre,
    radial_density,
    renyi_entropy_power,
)


def _state(system, n, l, d=3, space="position", c=1.0):  # noqa: E741
    return QuantumState(system, n, l, d, c, space)


def test_hydrogen_ground_state_position():
    rho = radial_density(_state("hydrogenic", 1, 0))
    r = np.linspace(0.1, 8, 23)
    assert np.allclose(rho.pdf(r), 4 * r * r * np.exp(-2 * r), rtol=1e-12)
    assert math.isclose(rho.pdf(1.0), 4 * math.exp(-2), rel_tol=1e-12)
    assert math.isclose(4 * math.exp(-2), 0.54134, rel_tol=1e-5)


def test_hydrogen_ground_state_momentum():
    rho = radial_density(_state("hydrogenic", 1, 0, space="momentum"))
    k = np.linspace(0.05, 6, 23)
    assert np.allclose(rho.pdf(k), 32 / math.pi * k * k / (1 + k * k) ** 4, rtol=1e-12)
    assert math.isclose(rho.total_mass(), 1.0, rel_tol=1e-10)


def test_harmonic_ground_state():
    rho = radial_density(_state("harmonic", 0, 0))
    r = np.linspace(0.05, 5, 23)
    assert np.allclose(rho.pdf(r), 4 / math.sqrt(math.pi) * r * r * np.exp(-r * r), rtol=1e-12)


@pytest.mark.parametrize(
    "state, expected",
    [
        (_state("hydrogenic", 1, 0), -0.5),
        (_state("hydrogenic", 2, 0, d=12), -1 / (2 * 6.5**2)),
        (_state("harmonic", 0, 0), 1.5),
    ],
)
def test_energies(state, expected):
    assert math.isclose(energy(state), expected, rel_tol=1e-15)


def test_energy_example_rounding():
    assert round(energy(_state("hydrogenic", 2, 0, d=12)), 6) == -0.011834


def test_energy_independent_of_space():
    s = _state("hydrogenic", 3, 1, d=5)
    m = _state("hydrogenic", 3, 1, d=5, space="momentum")
    assert energy(s) == energy(m)


def test_polynomial_examples():
    p = laguerre(0, 0.3, 2.0)
    assert (p.value, p.derivative) == (1.0, 0.0)
    assert math.isclose(laguerre(1, 1.5, 2.0).value, 0.5, rel_tol=1e-15)
    assert math.isclose(laguerre(3, 0.0, 1.0).value, 1 - 3 + 1.5 - 1 / 6, rel_tol=1e-14)
    g = gegenbauer(0, 2.0, 0.5)
    assert (g.value, g.derivative) == (1.0, 0.0)
    assert math.isclose(gegenbauer(1, 2.0, 0.5).value, 2.0, rel_tol=1e-15)
    assert abs(gegenbauer(2, 1.0, 0.5).value) < 1e-15


@pytest.mark.parametrize("n, a", [(0, 0.5), (3, 0.0), (5, 2.5), (8, 7.5), (4, -0.5)])
def test_laguerre_against_scipy(n, a):
    x = np.linspace(0.0, 15.0, 31)
    p = laguerre(n, a, x)
    assert np.allclose(p.value, special.eval_genlaguerre(n, a, x), rtol=1e-12, atol=1e-12)
    if n > 0:
        assert np.allclose(p.derivative, -special.eval_genlaguerre(n - 1, a + 1, x), rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("n, a", [(0, 1.0), (2, 1.0), (5, 1.5), (7, 5.5), (3, 0.25)])
def test_gegenbauer_against_scipy(n, a):
    x = np.linspace(-1.0, 1.0, 31)
    p = gegenbauer(n, a, x)
    assert np.allclose(p.value, special.eval_gegenbauer(n, a, x), rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("fn, n, a", [(laguerre, 4, 1.5), (laguerre, 6, 0.0), (gegenbauer, 4, 1.5), (gegenbauer, 6, 3.0)])
def test_polynomial_derivative_matches_finite_difference(fn, n, a):
    x = np.linspace(0.05, 0.95, 19)
    h = 1e-6
    fd = (fn(n, a, x + h).value - fn(n, a, x - h).value) / (2 * h)
    d = fn(n, a, x).derivative
    assert np.allclose(d, fd, rtol=1e-8, atol=1e-8)


def _all_states():
    for d in (3, 12):
        for space in ("position", "momentum"):
            for n in range(1, 5):
                for l in range(n):  # noqa: E741
                    yield _state("hydrogenic", n, l, d, space)
            for n in range(0, 4):
                for l in range(0, 4):  # noqa: E741
                    yield _state("harmonic", n, l, d, space)


STATES = list(_all_states())


def _sid(s):
    return f"{s.system[:4]}-{s.space[:3]}-d{s.d}-n{s.n}-l{s.l}"


@pytest.mark.parametrize("state", STATES, ids=[_sid(s) for s in STATES])
def test_normalized(state):
    rho = radial_density(state)
    assert math.isclose(rho.total_mass(), 1.0, rel_tol=1e-8)
    assert not rho.diagnostics


def _interior_minima(rho):
    x = np.geomspace(1e-4, 1e3, 400_001)
    v = rho.pdf(x)
    return int(np.sum((v[1:-1] < v[:-2]) & (v[1:-1] < v[2:])))


def _expected_zeros(state):
    if state.system == "hydrogenic":
        return state.n - state.l - 1
    return state.n


@pytest.mark.parametrize("state", STATES, ids=[_sid(s) for s in STATES])
def test_zero_count(state):
    rho = radial_density(state)
    assert _interior_minima(rho) == _expected_zeros(state)
    assert len(rho.breakpoints) == _expected_zeros(state)


@pytest.mark.parametrize(
    "state",
    [_state("hydrogenic", 4, 1), _state("hydrogenic", 3, 0, space="momentum"), _state("harmonic", 2, 1, d=12), _state("hydrogenic", 3, 2, d=12)],
    ids=_sid,
)
def test_derivative_matches_finite_difference(state):
    rho = radial_density(state)
    x = np.linspace(0.05, 20.0, 400)
    v = rho.pdf(x)
    keep = v > 1e-6 * v.max()
    zeros = np.array(rho.breakpoints)
    if zeros.size:
        keep &= np.min(np.abs(x[:, None] - zeros[None, :]), axis=1) > 0.02
    x = x[keep]
    h = 1e-6 * x
    fd = (rho.pdf(x + h) - rho.pdf(x - h)) / (2 * h)
    an = rho.dpdf(x)
    assert np.all(np.abs(fd - an) <= 1e-6 * np.maximum(np.abs(an), 1e-3 * np.abs(an).max()))


def test_conjugacy_trend():
    pos = [renyi_entropy_power(radial_density(_state("hydrogenic", n, 0)), 7.0) for n in range(1, 5)]
    mom = [renyi_entropy_power(radial_density(_state("hydrogenic", n, 0, space="momentum")), 7.0) for n in range(1, 5)]
    assert np.all(np.diff(pos) > 0)
    assert np.all(np.diff(mom) < 0)


@pytest.mark.parametrize("system, n, l, space", [("hydrogenic", 3, 1, "position"), ("hydrogenic", 2, 0, "momentum"), ("harmonic", 2, 1, "position")])
def test_complexity_independent_of_constant(system, n, l, space):  # noqa: E741
    c1 = complexity(radial_density(_state(system, n, l, space=space)), (2, 1, 7))
    c3 = complexity(radial_density(_state(system, n, l, space=space, c=3.0)), (2, 1, 7))
    assert math.isclose(c1, c3, rel_tol=1e-7)


@pytest.mark.parametrize(
    "args",
    [("hydrogenic", 0, 0), ("hydrogenic", 2, 2), ("harmonic", -1, 0), ("harmonic", 1, -1), ("atom", 1, 0)],
)
def test_invalid_states(args):
    with pytest.raises(DomainError):
        QuantumState(*args)


def test_invalid_dimension_and_constant():
    with pytest.raises(DomainError):
        QuantumState("harmonic", 0, 0, 1)
    with pytest.raises(DomainError):
        QuantumState("harmonic", 0, 0, 3, 0.0)
