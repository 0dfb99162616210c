"""Acceptance criteria 1-10. Each test prints one PASS/FAIL line.

Run on its own with `pytest tests/test_acceptance.py -v` or as a script.
"""

import itertools
import math
import time

import numpy as np
import pytest

from fisher_renyi import (
    DivergenceError,
    QuantumState,
    affine_A,
    complexity,
    edo_residual,
    escort_transform,
    fisher_info,
    gaussian,
    hoelder_conjugate,
    in_domain_tilde,
    involution_T,
    pbl_gaussian,
    radial_density,
    renyi_entropy_power,
    sharp_bound,
    stretched_gaussian,
    translate_scale,
)
from fisher_renyi import specfun as sf

TWO_PI_E = 2 * math.pi * math.e

PAIRS = [(1, 7), (0.8, 7), (2, 7), (1, 0.5), (0.7, 0.5), (1.2, 1), (0.8, 1), (1.5, 2), (0.6, 3), (2, 0.5), (1.3, 0.6), (3, 1.5), (0.5, 1.2)]
GRID = [(p, b, l) for p in (2, 3) for b, l in PAIRS if in_domain_tilde(p, b, l)]


def report(capsys, k, ok, detail):
    with capsys.disabled():
        print(f"\ncriterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_criterion_01_classical_stam(capsys):
    t = time.perf_counter()
    c = complexity(gaussian(0, 1), (2, 1, 1))
    k = sharp_bound(2, 1, 1).K
    dt = time.perf_counter() - t
    ok = math.isclose(c, TWO_PI_E, rel_tol=1e-6) and math.isclose(k, TWO_PI_E, rel_tol=1e-12) and dt < 1.0
    report(capsys, 1, ok, f"C={c:.12g} K={k:.12g} ({dt:.2f} s)")


def test_criterion_02_saturation(capsys):
    t = time.perf_counter()
    ratios = [complexity(pbl_gaussian(*g), g) / sharp_bound(*g).K for g in GRID]
    dt = time.perf_counter() - t
    lams = {"<1": any(g[2] < 1 for g in GRID), "=1": any(g[2] == 1 for g in GRID), ">1": any(g[2] > 1 for g in GRID)}
    ok = len(GRID) >= 20 and all(lams.values()) and all(1 - 1e-4 <= r <= 1 + 1e-3 for r in ratios) and dt < 60
    worst = max(abs(r - 1) for r in ratios)
    report(capsys, 2, ok, f"{len(GRID)} triples, max |C/K-1|={worst:.2e} ({dt:.1f} s)")


def test_criterion_03_bound_on_non_minimizers(capsys):
    dens = [
        gaussian(),
        stretched_gaussian(2, 0.8),
        radial_density(QuantumState("hydrogenic", 2, 0, 3)),
        radial_density(QuantumState("harmonic", 1, 1, 3)),
    ]
    ratios = []
    for rho, g in itertools.product(dens, GRID):
        try:
            ratios.append(complexity(rho, g) / sharp_bound(*g).K)
        except DivergenceError:
            continue
    low = min(ratios)
    strict = sum(r > 1 + 1e-3 for r in ratios)
    ok = low >= 1 - 1e-6 and strict >= 10
    report(capsys, 3, ok, f"{len(ratios)} finite cases, min C/K={low:.9f}, {strict} with excess > 1e-3")


def test_criterion_04_invariance(capsys):
    rho = stretched_gaussian(2, 0.8)
    vals = [complexity(translate_scale(rho, x0, s), (2, 1, 2)) for x0, s in itertools.product((-3, 0, 5), (0.1, 1, 10))]
    spread = (max(vals) - min(vals)) / min(vals)
    report(capsys, 4, spread <= 1e-6, f"relative spread {spread:.2e} over 9 placements")


def _escort_gaps():
    bases = {"gaussian": gaussian(), "stretched(2,0.8)": stretched_gaussian(2, 0.8), "stretched(3,1.5)": stretched_gaussian(3, 1.5)}
    tol, out = 1e-7, []
    for (name, rho), a in itertools.product(bases.items(), (0.5, 1.0, 2.0)):
        e, _ = escort_transform(rho, a)
        for lam in (0.5, 1.0, 2.0):
            if 1 + a * (lam - 1) <= 0:
                continue
            lhs = renyi_entropy_power(e, lam, tol=tol)
            rhs = renyi_entropy_power(rho, 1 + a * (lam - 1), tol=tol) ** a
            out.append((f"N {name} a={a:g} l={lam:g}", abs(lhs / rhs - 1)))
        for beta in (0.5, 1.0, 2.0):
            try:
                rhs = a ** (2 / beta) * fisher_info(rho, 2, a * beta, tol=tol) ** a
            except DivergenceError:
                continue
            out.append((f"F {name} a={a:g} b={beta:g}", abs(fisher_info(e, 2, beta, tol=tol) / rhs - 1)))
        for beta, lam in itertools.product((0.5, 1.0, 2.0), (0.5, 1.0, 2.0)):
            if 1 + a * (lam - 1) <= 0:
                continue
            try:
                rhs = a**2 * complexity(rho, (2, *affine_A(a, beta, lam)), tol=tol)
            except DivergenceError:
                continue
            out.append((f"C {name} a={a:g} b={beta:g} l={lam:g}", abs(complexity(e, (2, beta, lam), tol=tol) / rhs - 1)))
    return out


def test_criterion_05_escort_identities(capsys):
    gaps = _escort_gaps()
    bad = [(k, g) for k, g in gaps if not g <= 1e-5]
    rho = stretched_gaussian(2, 0.5)
    e1, _ = escort_transform(rho, 0.5)
    e2, _ = escort_transform(e1, 2.0)
    xs = np.linspace(-4, 4, 33)
    comp = float(np.max(np.abs(e2.pdf(xs) - rho.pdf(xs))))
    ok = not bad and comp < 1e-7
    worst = ", ".join(f"{k}: {g:.2e}" for k, g in bad)
    report(capsys, 5, ok, f"{len(gaps) - len(bad)}/{len(gaps)} identities within 1e-5; composition err {comp:.1e}" + (f"; failing {worst}" if bad else ""))


def test_criterion_06_involution(capsys):
    rng = np.random.default_rng(6)
    worst_k = worst_t = 0.0
    n = 0
    while n < 50:
        p, beta, lam = rng.uniform(1.2, 6.0), rng.uniform(0.05, 5.0), rng.uniform(0.05, 10.0)
        if not lam > 1 - beta * hoelder_conjugate(p) + 1e-6:
            continue
        n += 1
        bt, lt = involution_T(p, beta, lam)
        k0, k1 = sharp_bound(p, beta, lam).K, sharp_bound(p, bt, lt).K
        worst_k = max(worst_k, abs(k1 / (lam**2 * k0) - 1))
        b2, l2 = involution_T(p, bt, lt)
        worst_t = max(worst_t, abs(b2 / beta - 1), abs(l2 / lam - 1))
    ok = worst_k <= 1e-12 and worst_t <= 1e-12
    report(capsys, 6, ok, f"50 triples, K gap {worst_k:.1e}, T∘T gap {worst_t:.1e}")


def _beta_residuals(rng, n):
    worst = 0.0
    for _ in range(n):
        a = rng.uniform(0.05, 8.0)
        b = rng.uniform(-6.0, 8.0)
        if b > 0:
            log_y = math.log(rng.uniform(1e-9, 1 - 1e-9)) + sf.log_beta(a, b)
        else:
            log_y = rng.uniform(-30.0, 30.0)
        t = sf.inv_inc_beta_logit(a, b, np.array([math.exp(log_y)]))
        lz, l1z = -np.logaddexp(0.0, -t), -np.logaddexp(0.0, t)
        back = float(sf.log_inc_beta_logit(a, b, lz, l1z)[0])
        worst = max(worst, abs(math.expm1(back - log_y)))
        # public x-space route where x is representable
        x = rng.uniform(1e-6, 0.99)
        y = sf.inc_beta(a, b, x)
        worst = max(worst, abs(sf.inc_beta(a, b, sf.inv_inc_beta(a, b, y)) / y - 1))
    return worst


def _gamma_residuals(rng, n):
    worst = 0.0
    for _ in range(n):
        a = rng.uniform(0.05, 8.0)
        y = rng.uniform(1e-6, 1 - 1e-6) * math.gamma(a)
        worst = max(worst, abs(sf.inc_gamma_lower(a, sf.inv_inc_gamma_lower(a, y)) / y - 1))
        y = math.exp(rng.uniform(-30.0, 300.0))
        worst = max(worst, abs(sf.inc_gamma_grow(a, sf.inv_inc_gamma_grow(a, y)) / y - 1))
    return worst


def test_criterion_07_special_function_round_trips(capsys):
    rng = np.random.default_rng(7)
    rb = _beta_residuals(rng, 1000)
    rg = _gamma_residuals(rng, 1000)
    a = rng.uniform(0.01, 0.99, 200)
    x = rng.uniform(1e-8, 1 - 1e-8, 200)
    ident = max(abs(sf.inc_beta(ai, -ai, xi) / ((xi / (1 - xi)) ** ai / ai) - 1) for ai, xi in zip(a, x))
    ok = rb < 1e-10 and rg < 1e-10 and ident < 1e-10
    report(capsys, 7, ok, f"beta {rb:.1e}, gamma {rg:.1e}, B(a,-a;x) {ident:.1e}")


def test_criterion_08_minimizer_ode(capsys):
    grid = np.linspace(0.2, 2.0, 25)
    spreads = [edo_residual(2, 1, 1, pbl_gaussian(2, 1, 1), grid)]
    for p, lam in [(2, 0.8), (2, 1.5), (3, 0.9), (3, 1.3)]:
        rho = stretched_gaussian(p, lam)
        spreads.append(edo_residual(p, lam, lam, rho, np.linspace(0.1, min(rho.support.hi, 3.0) * 0.9, 25)))
    control = edo_residual(2, 1, 0.5, gaussian(), grid)
    ok = max(spreads) < 1e-4 and control > 1e-2
    report(capsys, 8, ok, f"max minimizer spread {max(spreads):.1e}, control {control:.2e}")


def _quantum_states():
    for d, space in itertools.product((3, 12), ("position", "momentum")):
        for n in range(1, 5):
            for l in range(n):  # noqa: E741
                yield QuantumState("hydrogenic", n, l, d, 1.0, space)
        for n, l in itertools.product(range(4), range(4)):  # noqa: E741
            yield QuantumState("harmonic", n, l, d, 1.0, space)


def _minima(rho):
    x = np.geomspace(1e-4, 1e3, 400_001)
    v = rho.pdf(x)
    return int(np.sum((v[1:-1] < v[:-2]) & (v[1:-1] < v[2:])))


def test_criterion_09_quantum_structure(capsys):
    worst, wrong, count = 0.0, [], 0
    for s in _quantum_states():
        rho = radial_density(s)
        count += 1
        worst = max(worst, abs(rho.total_mass() - 1))
        expected = s.n - s.l - 1 if s.system == "hydrogenic" else s.n
        if _minima(rho) != expected:
            wrong.append(rho.label)
    ok = worst <= 1e-8 and not wrong
    report(capsys, 9, ok, f"{count} densities, max |mass-1|={worst:.1e}, zero-count mismatches {len(wrong)}")


def test_criterion_10_figure_trends(capsys):
    t = time.perf_counter()

    def rho(n, l, space="position"):  # noqa: E741
        return radial_density(QuantumState("hydrogenic", n, l, 3, 1.0, space))

    pos = [renyi_entropy_power(rho(n, 0), 7.0) for n in range(1, 5)]
    fis = [fisher_info(rho(4, l), 2, 1) for l in range(4)]
    mom = [renyi_entropy_power(rho(n, 0, "momentum"), 7.0) for n in range(1, 5)]
    dt = time.perf_counter() - t
    up = bool(np.all(np.diff(pos) > 0))
    down = bool(np.all(np.diff(fis) < 0))
    opposite = bool(np.all(np.sign(np.diff(mom)) == -np.sign(np.diff(pos))))
    ok = up and down and opposite and dt < 120
    report(capsys, 10, ok, f"N_7 position up {up}, F_2,1 down in l {down}, momentum opposite {opposite} ({dt:.1f} s)")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
