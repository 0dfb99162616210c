"""One-dimensional densities: the `DensityModel` abstraction and analytic families.

A family is defined by a single vectorized evaluator returning ``(ln ρ, ρ'/ρ)``
at points strictly inside the support. `DensityModel` builds `pdf`, `dpdf`,
`logpdf` and `score` from it. Working with ln ρ and the score keeps the
measure integrands accurate where ρ itself underflows, and lets the
(p, β, λ)-Gaussian share one special-function inversion between the value and
the derivative.

Families:

* `gaussian(mu, sigma)`
* `stretched_gaussian(p, lam)`: ∝ (1 + (1-λ)|x|^p*)_+^(1/(λ-1)), the λ -> 1
  limit being exp(-|x|^p*)
* `pbl_gaussian(p, beta, lam)`: the minimizer of the (p, β, λ)-Fisher-Rényi
  complexity. Writing a = 1/p*:

  - λ ≠ 1: ρ ∝ (1 - z)^(1/|1-λ|) where ``inc_beta(a, q, z) = κ|x|`` with
    q = (β-1)/|1-λ| + [λ<1]/p and κ = p*/|1-λ|^(1/p*). The support is bounded
    iff q > 0.
  - λ = 1, β > 1: ρ ∝ exp(-w/(β-1)) where ``inc_gamma_lower(a, w) = s|x|``,
    s = p*((β-1)/β)^(1/p*). The support is bounded: |x| < Γ(a)/s.
  - λ = 1, β < 1: ρ ∝ exp(-w/(1-β)) where ``inc_gamma_grow(a, w) = s|x|``,
    s = p*((1-β)/β)^(1/p*), on the whole line.
  - β = λ = 1: ρ ∝ exp(-|x|^p*).

  All normalizing constants have closed forms (beta and gamma integrals in the
  inverse-function variable), which are used directly.
* `uniform(lo, hi)`
* `translate_scale(rho, x0, sigma)`: x -> ρ((x - x0)/σ)/σ
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import specfun as sf
from .errors import DomainError
from .quadrature import DEFAULT_ABS_TOL, DEFAULT_REL_TOL, Interval, integrate
from .stam import hoelder_conjugate, in_domain_tilde

__all__ = [
    "DensityModel",
    "PblGaussianParams",
    "StretchedGaussianParams",
    "gaussian",
    "pbl_gaussian",
    "stretched_gaussian",
    "translate_scale",
    "uniform",
]

LogScoreFn = Callable[[np.ndarray], "tuple[np.ndarray, np.ndarray]"]

# derivative at a finite support endpoint is reported at this relative inset
_ENDPOINT_INSET = 1e-10


class DensityModel:
    """A normalized 1-D density with analytic derivative.

    Parameters
    ----------
    log_and_score
        Vectorized callable returning ``(ln ρ(x), ρ'(x)/ρ(x))`` for points
        strictly inside `support`. Zeros of ρ inside the support are allowed
        (ln ρ = -inf there); the score may then be infinite.
    support
        The open support interval; ρ is 0 outside and at finite endpoints.
    normalization_constant
        The factor that turns the unnormalized family shape into a density
        (1/Z), kept for reporting.
    breakpoints
        Interior points where ρ is not smooth or vanishes, or where its
        length scale changes abruptly; integrators split there.
    symmetry_center
        If ρ is even about some point, integrals may be folded onto one side.
    closed_support
        Evaluate ρ at finite endpoints by continuity instead of returning 0
        (only the uniform density needs this).
    """

    __slots__ = (
        "_log_and_score",
        "support",
        "normalization_constant",
        "smooth",
        "breakpoints",
        "symmetry_center",
        "closed_support",
        "label",
        "params",
        "diagnostics",
    )

    def __init__(
        self,
        log_and_score: LogScoreFn,
        support: Interval,
        *,
        normalization_constant: float = 1.0,
        smooth: bool = True,
        breakpoints=(),
        symmetry_center: float | None = None,
        closed_support: bool = False,
        label: str = "",
        params=None,
        diagnostics=(),
    ):
        self._log_and_score = log_and_score
        self.support = support if isinstance(support, Interval) else Interval(*support)
        self.normalization_constant = float(normalization_constant)
        self.smooth = bool(smooth)
        self.breakpoints = tuple(float(b) for b in breakpoints)
        self.symmetry_center = None if symmetry_center is None else float(symmetry_center)
        self.closed_support = bool(closed_support)
        self.label = label
        self.params = params
        self.diagnostics = tuple(diagnostics)

    def __repr__(self):
        s = self.support
        return f"DensityModel({self.label or 'custom'}, support=({s.lo:g}, {s.hi:g}))"

    def _inset(self, x):
        lo, hi = self.support.lo, self.support.hi
        x = np.where(x == lo, lo + _ENDPOINT_INSET * max(1.0, abs(lo)), x)
        return np.where(x == hi, hi - _ENDPOINT_INSET * max(1.0, abs(hi)), x)

    def log_pdf_and_score(self, x, *, endpoint_inset: bool = False):
        """Return ``(ln ρ(x), ρ'(x)/ρ(x))``; ln ρ = -inf and score 0 outside the support."""
        arr = np.asarray(x, dtype=float)
        flat = arr.reshape(-1)
        if endpoint_inset or self.closed_support:
            flat = self._inset(flat)
        lo, hi = self.support.lo, self.support.hi
        inside = (flat > lo) & (flat < hi)
        lp = np.full(flat.shape, -np.inf)
        sc = np.zeros(flat.shape)
        if inside.any():
            with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
                l_in, s_in = self._log_and_score(flat[inside])
            lp[inside] = l_in
            sc[inside] = s_in
        return lp.reshape(arr.shape), sc.reshape(arr.shape)

    def logpdf(self, x):
        lp, _ = self.log_pdf_and_score(x)
        return float(lp) if np.ndim(x) == 0 else lp

    def pdf(self, x):
        lp, _ = self.log_pdf_and_score(x)
        out = np.exp(lp)
        return float(out) if np.ndim(x) == 0 else out

    def score(self, x):
        """d/dx ln ρ(x)."""
        _, sc = self.log_pdf_and_score(x, endpoint_inset=True)
        return float(sc) if np.ndim(x) == 0 else sc

    def dpdf(self, x):
        """ρ'(x); at a finite support endpoint, the one-sided limit at a 1e-10 inset."""
        lp, sc = self.log_pdf_and_score(x, endpoint_inset=True)
        with np.errstate(invalid="ignore", over="ignore"):
            out = np.where(np.isneginf(lp), 0.0, np.exp(lp) * sc)
        return float(out) if np.ndim(x) == 0 else out

    def total_mass(self, rel_tol: float = DEFAULT_REL_TOL, abs_tol: float = DEFAULT_ABS_TOL) -> float:
        """∫ρ by adaptive quadrature (a consistency check; ρ is normalized by construction)."""
        return integrate(self.pdf, self.support, rel_tol, abs_tol, points=self.breakpoints).value


# -- families -----------------------------------------------------------------


def gaussian(mu: float = 0.0, sigma: float = 1.0) -> DensityModel:
    """Normal density N(mu, sigma^2)."""
    mu, sigma = float(mu), float(sigma)
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    lnorm = -math.log(sigma) - 0.5 * math.log(2 * math.pi)
    inv_var = 1.0 / (sigma * sigma)

    def log_and_score(x):
        d = x - mu
        return lnorm - 0.5 * d * d * inv_var, -d * inv_var

    return DensityModel(
        log_and_score,
        Interval(-math.inf, math.inf),
        normalization_constant=math.exp(lnorm),
        breakpoints=(mu,),
        symmetry_center=mu,
        label=f"gaussian({mu:g},{sigma:g})",
    )


@dataclass(frozen=True)
class StretchedGaussianParams:
    """Parameters of g_{p,λ}; `Z` is the normalization integral of the unnormalized shape."""

    p: float
    lam: float
    p_star: float
    Z: float

    @property
    def support_halfwidth(self) -> float:
        return (self.lam - 1.0) ** (-1.0 / self.p_star) if self.lam > 1 else math.inf


def _stretched_log_norm(ps: float, lam: float) -> float:
    a = 1.0 / ps
    if lam < 1:
        return math.log(2.0) + sf.log_beta(a, 1.0 / (1.0 - lam) - a) - math.log(ps) - a * math.log(1.0 - lam)
    if lam > 1:
        return math.log(2.0) + sf.log_beta(a, 1.0 / (lam - 1.0) + 1.0) - math.log(ps) - a * math.log(lam - 1.0)
    return math.log(2.0) + math.lgamma(a) - math.log(ps)


def stretched_gaussian(p: float, lam: float) -> DensityModel:
    """The (p, λ)-stretched deformed Gaussian g_{p,λ}, normalized."""
    p, lam = float(p), float(lam)
    ps = hoelder_conjugate(p)
    if not lam > 1.0 - ps:
        raise DomainError(f"stretched_gaussian requires lambda > 1 - p* = {1 - ps:g}, got {lam:g}")
    lz = _stretched_log_norm(ps, lam)
    params = StretchedGaussianParams(p, lam, ps, math.exp(lz))
    half = params.support_halfwidth
    c = 1.0 - lam

    def log_and_score(x):
        ax = np.abs(x)
        u = ax**ps
        du = ps * ax ** (ps - 1.0) * np.sign(x)
        if lam == 1.0:
            return -u - lz, -du
        if lam > 1:
            return np.log1p(c * u) / (lam - 1.0) - lz, -du / (1.0 + c * u)
        # heavy tail: keep ln(1 + c|x|^p*) and the score finite for huge |x|
        with np.errstate(divide="ignore"):
            lu = ps * np.log(ax)
            score = -ps * np.sign(x) / (ax ** (1.0 - ps) + c * ax)
        return np.logaddexp(0.0, math.log(c) + lu) / (lam - 1.0) - lz, score

    return DensityModel(
        log_and_score,
        Interval(-half, half),
        normalization_constant=1.0 / params.Z,
        breakpoints=(0.0,),
        symmetry_center=0.0,
        label=f"stretched({p:g},{lam:g})",
        params=params,
    )


@dataclass(frozen=True)
class PblGaussianParams:
    """Parameters of the (p, β, λ)-Gaussian.

    `q` is the second incomplete-beta parameter (λ ≠ 1 only, else nan) and
    `kappa` the scale multiplying |x| in the special-function argument.
    """

    p: float
    beta: float
    lam: float
    p_star: float
    q: float
    kappa: float
    support_halfwidth: float
    branch: str


def pbl_gaussian(p: float, beta: float, lam: float) -> DensityModel:
    """The (p, β, λ)-Gaussian minimizer of the complexity C_{p,β,λ}, normalized."""
    p, beta, lam = float(p), float(beta), float(lam)
    ps = hoelder_conjugate(p)
    if not (beta > 0 and lam > 0) or not in_domain_tilde(p, beta, lam):
        raise DomainError(
            f"(beta, lambda) = ({beta:g}, {lam:g}) is outside D̃_p for p={p:g} "
            f"(requires lambda > 1 - beta*p* = {1 - beta * ps:g})"
        )
    a = 1.0 / ps
    if lam != 1.0:
        return _pbl_beta_branch(p, beta, lam, ps, a)
    if beta != 1.0:
        return _pbl_gamma_branch(p, beta, ps, a)
    rho = stretched_gaussian(p, 1.0)
    params = PblGaussianParams(p, 1.0, 1.0, ps, math.nan, 1.0, math.inf, "exp")
    return DensityModel(
        rho._log_and_score,
        rho.support,
        normalization_constant=rho.normalization_constant,
        breakpoints=(0.0,),
        symmetry_center=0.0,
        label=f"pbl({p:g},1,1)",
        params=params,
    )


def _pbl_beta_branch(p, beta, lam, ps, a):
    dl = abs(1.0 - lam)
    q = (beta - 1.0) / dl + (1.0 / p if lam < 1 else 0.0)
    e = 1.0 / dl
    kappa = ps / dl**a
    top = sf.beta_fn(a, q)
    half = top / kappa if math.isfinite(top) else math.inf
    # ∫ρ = (2C/κ) B(a, e + q)
    lnc = math.log(kappa) - math.log(2.0) - sf.log_beta(a, e + q)
    lek = math.log(e * kappa)
    params = PblGaussianParams(p, beta, lam, ps, q, kappa, half, "lambda<1" if lam < 1 else "lambda>1")

    def log_and_score(x):
        ax = np.abs(x)
        u = kappa * ax
        t = np.full(ax.shape, -np.inf)
        pos = u > 0
        if math.isfinite(half):
            near = pos & (u > 0.5 * top)
            far = pos & ~near
            if near.any():
                # solve the complementary equation B(q, a; 1-z) = κ(R - |x|)
                t[near] = -sf.inv_inc_beta_logit(q, a, kappa * (half - ax[near]))
        else:
            far = pos
        if far.any():
            t[far] = sf.inv_inc_beta_logit(a, q, u[far])
        lz = -np.logaddexp(0.0, -t)
        lw = -np.logaddexp(0.0, t)
        lnrho = lnc + e * lw
        score = -np.sign(x) * np.exp(lek + (1.0 - a) * lz - q * lw)
        return lnrho, score

    return DensityModel(
        log_and_score,
        Interval(-half, half),
        normalization_constant=math.exp(lnc),
        breakpoints=(0.0,),
        symmetry_center=0.0,
        label=f"pbl({p:g},{beta:g},{lam:g})",
        params=params,
    )


def _pbl_gamma_branch(p, beta, ps, a):
    dl = abs(beta - 1.0)
    s = ps * (dl / beta) ** a
    eps = -1.0 if beta > 1 else 1.0
    ga = math.gamma(a)
    half = ga / s if beta > 1 else math.inf
    # ∫ρ = (2C/s) Γ(a) (1/d - ε)^(-a)
    lnc = math.log(s) + a * math.log(1.0 / dl - eps) - math.log(2.0) - math.lgamma(a)
    lsd = math.log(s / dl)
    params = PblGaussianParams(p, beta, 1.0, ps, math.nan, s, half, "lambda=1")

    def log_and_score(x):
        ax = np.abs(x)
        u = s * ax
        lw = np.full(ax.shape, -np.inf)
        pos = u > 0
        if pos.any():
            if beta > 1:
                lw[pos] = sf.inv_inc_gamma_lower_log(a, u[pos], s * (half - ax[pos]))
            else:
                lw[pos] = sf.inv_inc_gamma_grow_log(a, u[pos])
        w = np.exp(lw)
        lnrho = lnc - w / dl
        score = -np.sign(x) * np.exp(lsd + (1.0 - a) * lw - eps * w)
        return lnrho, score

    return DensityModel(
        log_and_score,
        Interval(-half, half),
        normalization_constant=math.exp(lnc),
        breakpoints=(0.0,),
        symmetry_center=0.0,
        label=f"pbl({p:g},{beta:g},1)",
        params=params,
    )


def uniform(lo: float, hi: float) -> DensityModel:
    """Uniform density on [lo, hi]."""
    lo, hi = float(lo), float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise DomainError("uniform requires finite lo < hi")
    lval = -math.log(hi - lo)

    def log_and_score(x):
        return np.full(x.shape, lval), np.zeros(x.shape)

    return DensityModel(
        log_and_score,
        Interval(lo, hi),
        normalization_constant=math.exp(lval),
        symmetry_center=0.5 * (lo + hi),
        closed_support=True,
        label=f"uniform({lo:g},{hi:g})",
    )


def translate_scale(rho: DensityModel, x0: float, sigma: float) -> DensityModel:
    """The density x -> ρ((x - x0)/σ)/σ."""
    x0, sigma = float(x0), float(sigma)
    if not sigma > 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    inner = rho._log_and_score
    lsig = math.log(sigma)

    def log_and_score(x):
        lp, sc = inner((x - x0) / sigma)
        return lp - lsig, sc / sigma

    center = rho.symmetry_center
    return DensityModel(
        log_and_score,
        rho.support.mapped(x0, sigma),
        normalization_constant=rho.normalization_constant / sigma,
        smooth=rho.smooth,
        breakpoints=tuple(x0 + sigma * b for b in rho.breakpoints),
        symmetry_center=None if center is None else x0 + sigma * center,
        closed_support=rho.closed_support,
        label=f"{rho.label}@({x0:g},{sigma:g})",
        params=rho.params,
        diagnostics=rho.diagnostics,
    )
