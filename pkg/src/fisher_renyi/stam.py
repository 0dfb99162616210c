"""Parameter domains, the T_p involution, the A_a affine family and the sharp bound.

Notation: p > 1, p* = p/(p-1), and (β, λ) with β, λ > 0.

* D̃_p = {λ > 1 - βp*}: where the sharp bound K_{p,β,λ} holds.
* D_p: β in (1/p*, 1/p* + min(1, λ)].
* L_p: β = λ > 1/(1+p*); minimizers are stretched deformed Gaussians.
* L̄_p: β = (p* + 1 - λ)/p* with 0 < β < 1 + 1/p*.

Every point of D̃_p is carried onto L_p or L̄_p by some A_α, which is how the
minimizers on all of D̃_p are obtained from the stretched family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun as sf
from .errors import DomainError, NumericalError

__all__ = [
    "BoundReport",
    "DomainClass",
    "EdoResidual",
    "affine_A",
    "classify",
    "edo_residual",
    "hoelder_conjugate",
    "in_domain_tilde",
    "involution_T",
    "sharp_bound",
    "zeta",
]

_ON_LINE_TOL = 1e-12


def hoelder_conjugate(p: float) -> float:
    p = float(p)
    if not (p > 1 and math.isfinite(p)):
        raise DomainError(f"p must be a finite number > 1, got {p}")
    return p / (p - 1.0)


def in_domain_tilde(p: float, beta: float, lam: float) -> bool:
    """(β, λ) ∈ D̃_p, i.e. λ > 1 - βp* with β, λ > 0."""
    ps = hoelder_conjugate(p)
    return beta > 0 and lam > 0 and lam > 1.0 - beta * ps


def zeta(p: float, beta: float, lam: float) -> float:
    """ζ = β + (λ-1)_+/p*."""
    return beta + max(lam - 1.0, 0.0) / hoelder_conjugate(p)


@dataclass(frozen=True)
class DomainClass:
    in_D_tilde: bool
    in_D: bool
    on_L: bool
    on_L_bar: bool
    escort_index_to_L: float | None
    escort_index_to_L_bar: float | None


def classify(p: float, beta: float, lam: float) -> DomainClass:
    """Membership of (β, λ) in the parameter domains, and the escort indices.

    `escort_index_to_L` is the α with A_α(β, λ) on L_p, reported when such a
    point exists (1 - βp* < λ < β + 1); `escort_index_to_L_bar` likewise for
    L̄_p (λ > 1 - βp*/(p*+1)).
    """
    ps = hoelder_conjugate(p)
    beta, lam = float(beta), float(lam)
    if not (beta > 0 and lam > 0):
        raise DomainError("beta and lambda must be positive")
    tilde = lam > 1.0 - beta * ps
    in_d = 1.0 / ps < beta <= 1.0 / ps + min(1.0, lam)
    on_l = math.isclose(beta, lam, rel_tol=_ON_LINE_TOL, abs_tol=0.0) and lam > 1.0 / (1.0 + ps)
    bbar = (ps + 1.0 - lam) / ps
    on_lbar = math.isclose(beta, bbar, rel_tol=_ON_LINE_TOL, abs_tol=_ON_LINE_TOL) and 0 < beta < 1 + 1 / ps
    to_l = 1.0 / (beta + 1.0 - lam) if tilde and lam < beta + 1.0 else None
    to_lbar = ps / (ps * beta + lam - 1.0) if tilde and lam > 1.0 - ps * beta / (ps + 1.0) else None
    return DomainClass(tilde, in_d, on_l, on_lbar, to_l, to_lbar)


def involution_T(p: float, beta: float, lam: float) -> tuple[float, float]:
    """T_p(β, λ) = ((βp* + λ - 1)/(λp*), 1/λ)."""
    ps = hoelder_conjugate(p)
    if not lam > 0:
        raise DomainError("lambda must be positive")
    return (beta * ps + lam - 1.0) / (lam * ps), 1.0 / lam


def affine_A(a: float, beta: float, lam: float) -> tuple[float, float]:
    """A_a(β, λ) = (aβ, 1 + a(λ - 1))."""
    if not a > 0:
        raise DomainError("a must be positive")
    return a * beta, 1.0 + a * (lam - 1.0)


@dataclass(frozen=True)
class BoundReport:
    K: float
    zeta: float
    domain: DomainClass
    branch: str  # "lambda<1", "lambda=1" or "lambda>1"


def _log_sqrt_k(ps: float, p: float, beta: float, lam: float) -> float:
    """ln sqrt(K), the logarithm of the bracket that gets squared."""
    a = 1.0 / ps
    if lam == 1.0:
        return math.log(2.0) + a + math.lgamma(a) - math.log(beta) - math.log(ps) / p
    z = beta + max(lam - 1.0, 0.0) / ps
    d = abs(1.0 - lam)
    pz = ps * z
    m = z / d + 1.0 / p
    return (
        math.log(2.0)
        - math.log(pz)
        + a * (math.log(pz) - math.log(d))
        - m * math.log1p(-d / pz)
        + sf.log_beta(a, m)
    )


def sharp_bound(p: float, beta: float, lam: float) -> BoundReport:
    """The sharp constant K_{p,β,λ} with C_{p,β,λ}[ρ] >= K for every density ρ."""
    p, beta, lam = float(p), float(beta), float(lam)
    ps = hoelder_conjugate(p)
    dom = classify(p, beta, lam)
    if not dom.in_D_tilde:
        raise DomainError(
            f"(beta, lambda) = ({beta:g}, {lam:g}) is outside D̃_p for p={p:g}: "
            f"requires lambda > 1 - beta*p* = {1 - beta * ps:g}"
        )
    branch = "lambda=1" if lam == 1.0 else ("lambda<1" if lam < 1 else "lambda>1")
    k = math.exp(2.0 * _log_sqrt_k(ps, p, beta, lam))
    return BoundReport(k, zeta(p, beta, lam), dom, branch)


# -- minimizer ODE ------------------------------------------------------------


@dataclass(frozen=True)
class EdoResidual:
    """Details of an `edo_residual` evaluation.

    `scale` is the σ such that ρ_σ(x) = ρ(x/σ)/σ solves the ODE with equal
    coefficients; `gamma` the median ratio γ̄ for that ρ_σ; `used` how many
    grid points were well conditioned.
    """

    spread: float
    gamma: float
    scale: float
    used: int


def _flux(rho, theta, p, x):
    lp, sc = rho.log_pdf_and_score(x)
    du = np.exp(lp / theta) * sc / theta
    return np.abs(du) ** (p - 2.0) * du


def edo_residual(p, beta, lam, rho, grid, *, rel_step: float = 1e-4, full_output: bool = False):
    """Relative spread of γ(x) in the minimizer ODE, after rescaling ρ.

    With ϑ = p*/(βp* - 1) and u = ρ^(1/ϑ), minimizers satisfy

        -(|u'|^(p-2) u')' + (γ/ϑ) (u^(λϑ-1) - u^(ϑ-1))/(1-λ) = 0

    (for λ = 1 the last factor becomes -ϑ u^(ϑ-1) ln u). The two terms are not
    homogeneous in u, so a density with the right shape solves this only at
    one particular scale. The function first fits D = (|u'|^(p-2)u')' to
    A u^(λϑ-1) - B u^(ϑ-1) (or u^(ϑ-1)(A + B ln u)) by least squares, derives
    the scale σ that makes the two coefficients equal, and then evaluates the
    pointwise ratio

        γ(x) = ϑ (1-λ) D(x) / (u^(λϑ-1) - u^(ϑ-1))

    for ρ_σ at the rescaled grid. The returned spread is
    max|γ(x) - γ̄| / |γ̄| with γ̄ the median. Points where the denominator is
    below 1% of its grid maximum are skipped: there both sides of the ratio
    vanish together (the inflection point of u) and the quotient is noise.

    `grid` must avoid x = 0 and stay inside the support; derivatives of the
    flux use a 6th-order central difference with step ``rel_step * |x|``.
    """
    p, beta, lam = float(p), float(beta), float(lam)
    ps = hoelder_conjugate(p)
    dom = classify(p, beta, lam)
    if not dom.in_D:
        raise DomainError(f"(beta, lambda) = ({beta:g}, {lam:g}) is outside D_p for p={p:g}")
    theta = ps / (beta * ps - 1.0)
    x = np.asarray(grid, dtype=float).reshape(-1)
    if x.size < 3:
        raise DomainError("edo_residual needs at least 3 grid points")
    h = rel_step * np.abs(x)
    if np.any(h == 0):
        raise NumericalError("grid contains x = 0 (symmetry point); exclude it")
    lp, _ = rho.log_pdf_and_score(x)
    if not np.all(np.isfinite(lp)):
        raise NumericalError("density must be strictly positive on the grid")
    fl = lambda s: _flux(rho, theta, p, x + s * h)  # noqa: E731
    dd = (fl(3) - 9 * fl(2) + 45 * fl(1) - 45 * fl(-1) + 9 * fl(-2) - fl(-3)) / (60.0 * h)
    lu = lp / theta
    m1, m2 = lam * theta - 1.0, theta - 1.0
    c = (p - 1.0) * (1.0 / theta + 1.0) + 1.0
    u1 = np.exp(m1 * lu)
    u2 = np.exp(m2 * lu)

    if abs(lam - 1.0) < 1e-6:
        cols = np.column_stack([u2, u2 * lu])
    else:
        cols = np.column_stack([u1, -u2])
    norms = np.linalg.norm(cols, axis=0)
    coef, *_ = np.linalg.lstsq(cols / norms, dd, rcond=None)
    coef = coef / norms

    if abs(lam - 1.0) < 1e-6:
        a_, b_ = coef
        lsig = -theta * a_ / b_ if b_ != 0 else 0.0
        den = np.exp(-m2 / theta * lsig) * u2 * (lu - lsig / theta)
        num = -np.exp(-c * lsig) * dd
    else:
        a_, b_ = coef
        ratio = a_ / b_ if b_ != 0 else -1.0
        lsig = math.log(ratio) / (1.0 - lam) if ratio > 0 else 0.0
        den = np.exp(-m1 / theta * lsig) * u1 - np.exp(-m2 / theta * lsig) * u2
        num = theta * (1.0 - lam) * np.exp(-c * lsig) * dd
    if not np.all(np.isfinite(den)) or np.max(np.abs(den)) == 0:
        raise NumericalError("ODE denominator vanishes on the grid")
    keep = np.abs(den) >= 1e-2 * np.max(np.abs(den))
    if keep.sum() < 2:
        raise NumericalError("ODE denominator vanishes on too many grid points")
    g = num[keep] / den[keep]
    gbar = float(np.median(g))
    spread = float(np.max(np.abs(g - gbar)) / abs(gbar)) if gbar != 0 else math.inf
    if full_output:
        return EdoResidual(spread, gbar, math.exp(lsig), int(keep.sum()))
    return spread
