import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fisher_renyi import (
    DivergenceError,
    DomainError,
    MeasureParams,
    complexity,
    escort_uniformize,
    fisher_info,
    gaussian,
    pbl_gaussian,
    renyi_entropy_power,
    shannon_entropy,
    sharp_bound,
    stretched_gaussian,
    translate_scale,
    uniform,
)
from fisher_renyi.quadrature import integrate

TWO_PI_E = 2 * math.pi * math.e


def test_gaussian_entropy_powers():
    rho = gaussian(0, 1)
    assert math.isclose(renyi_entropy_power(rho, 1.0), TWO_PI_E, rel_tol=1e-10)
    assert math.isclose(renyi_entropy_power(rho, 2.0), 4 * math.pi, rel_tol=1e-10)


@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0, 7.0])
def test_uniform_entropy_power_is_one(lam):
    assert math.isclose(renyi_entropy_power(uniform(0.0, 1.0), lam), 1.0, rel_tol=1e-10)
    assert math.isclose(renyi_entropy_power(escort_uniformize(gaussian()), lam), 1.0, rel_tol=1e-10)


@pytest.mark.parametrize(
    "rho, p, beta, expected",
    [
        (gaussian(0, 1), 2, 1, 1.0),
        (gaussian(0, 2), 2, 1, 0.25),
        (stretched_gaussian(2, 1), 2, 1, 2.0),
    ],
)
def test_fisher_values(rho, p, beta, expected):
    assert math.isclose(fisher_info(rho, p, beta), expected, rel_tol=1e-10)


def test_complexity_examples():
    assert math.isclose(complexity(gaussian(), (2, 1, 1)), TWO_PI_E, rel_tol=1e-8)
    moved = translate_scale(gaussian(), 5, 3)
    assert math.isclose(complexity(moved, (2, 1, 1)), TWO_PI_E, rel_tol=1e-8)
    c = complexity(stretched_gaussian(2, 0.8), MeasureParams(2, 0.8, 0.8))
    assert math.isclose(c, sharp_bound(2, 0.8, 0.8).K, rel_tol=1e-5)


def test_full_output():
    r = complexity(gaussian(0, 3), MeasureParams(2, 1, 1), full_output=True)
    assert math.isclose(r.F, 1 / 9, rel_tol=1e-10)
    assert math.isclose(r.N, 9 * TWO_PI_E, rel_tol=1e-10)
    assert math.isclose(r.C, r.F * r.N, rel_tol=1e-14)


def test_shannon_branch_matches_direct_integral():
    rho = stretched_gaussian(3, 0.7)

    def integrand(x):
        p = rho.pdf(x)
        return np.where(p > 0, -p * np.log(np.where(p > 0, p, 1.0)), 0.0)

    h = integrate(integrand, rho.support, 1e-11, points=[0.0]).value
    assert math.isclose(shannon_entropy(rho), h, rel_tol=1e-9)
    assert math.isclose(renyi_entropy_power(rho, 1.0), math.exp(2 * h), rel_tol=1e-9)


@pytest.mark.parametrize("rho", [gaussian(), stretched_gaussian(2, 0.8), stretched_gaussian(3, 1.5), pbl_gaussian(2, 0.7, 0.5)])
def test_renyi_continuous_across_branch_switch(rho):
    n1 = renyi_entropy_power(rho, 1.0)
    h = 1e-3
    slope = (renyi_entropy_power(rho, 1 + h) - renyi_entropy_power(rho, 1 - h)) / (2 * h * n1)
    for d in (-2e-6, 2e-6, -1e-4, 1e-4):
        n = renyi_entropy_power(rho, 1 + d)
        assert abs(n / n1 - 1 - slope * d) < 1e-8
    # on either side of the switch at |λ - 1| = 1e-6
    for sign in (-1, 1):
        inside = renyi_entropy_power(rho, 1 + sign * 0.999e-6)
        outside = renyi_entropy_power(rho, 1 + sign * 1.001e-6)
        assert math.isclose(inside, outside, rel_tol=1e-6)


def test_renyi_rejects_nonpositive_lambda():
    with pytest.raises(DomainError):
        renyi_entropy_power(gaussian(), 0.0)


def test_fisher_rejects_bad_parameters():
    with pytest.raises(DomainError):
        fisher_info(gaussian(), 1.0, 1.0)
    with pytest.raises(DomainError):
        fisher_info(gaussian(), 2.0, -1.0)


def test_fisher_divergence_is_reported():
    # heavy tail: |ρ'|^3 ρ^(3·0.6-5) is not integrable
    with pytest.raises(DivergenceError):
        fisher_info(stretched_gaussian(2, 0.8), 3, 0.6)


def test_renyi_divergence_is_reported():
    # ρ ~ |x|^-5 so ∫ρ^0.1 diverges
    with pytest.raises(DivergenceError):
        renyi_entropy_power(stretched_gaussian(2, 0.6), 0.1)


CORPUS = [gaussian(), stretched_gaussian(2, 0.8), stretched_gaussian(3, 1.5), pbl_gaussian(2, 0.8, 7)]


@settings(max_examples=25, deadline=None)
@given(
    idx=st.integers(0, len(CORPUS) - 1),
    x0=st.floats(-20.0, 20.0),
    sigma=st.floats(0.05, 20.0),
)
def test_scaling_laws(idx, x0, sigma):
    rho = CORPUS[idx]
    moved = translate_scale(rho, x0, sigma)
    n0, n1 = renyi_entropy_power(rho, 2.0), renyi_entropy_power(moved, 2.0)
    f0, f1 = fisher_info(rho, 2, 1), fisher_info(moved, 2, 1)
    assert math.isclose(n1, sigma**2 * n0, rel_tol=1e-8)
    assert math.isclose(f1, f0 / sigma**2, rel_tol=1e-8)
    assert math.isclose(complexity(moved, (2, 1, 2)), complexity(rho, (2, 1, 2)), rel_tol=1e-7)


def test_gaussian_not_minimizer_off_classical_point():
    assert complexity(gaussian(), (2, 0.8, 7)) / sharp_bound(2, 0.8, 7).K > 1 + 1e-3
