"""The differential-escort transform E_α and the uniformizing limit α -> 0.

For α > 0, E_α[ρ](y) = ρ(x(y))^α where y(x) = ∫_0^x ρ(t)^(1-α) dt. The
map preserves probability (E dy = ρ dx) and rescales the information
measures affinely in (β, λ):

    N_λ[E_α ρ]       = N_{1+α(λ-1)}[ρ]^α
    F_{p,β}[E_α ρ]   = α^(2/β) F_{p,αβ}[ρ]^α
    C_{p,β,λ}[E_α ρ] = α² C_{p,αβ,1+α(λ-1)}[ρ]

and E_α ∘ E_α' = E_{αα'}.

Implementation: y(x) is tabulated on adaptive knots (16-point Gauss-Legendre
per segment, refined until each segment integral is converged to ~1e-13
relative). Point queries of y(x) integrate exactly from the nearest knot;
x(y) starts from cubic Hermite interpolation of the inverse table and is
polished by bracketed Newton steps on the exact y(x). The table spans the
region where ρ > 1e-16·max ρ (or reaches a finite support endpoint when
ρ^(1-α) stays bounded there); the transformed density is zero beyond it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .density import DensityModel, uniform
from .errors import DivergenceError, DomainError, NumericalError
from .quadrature import Interval, integrate

__all__ = ["EscortMap", "escort_transform", "escort_uniformize"]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
_EPS = float(np.finfo(float).eps)
_SEG_RTOL = 1e-13
_MAX_KNOTS = 200_000
_MAX_PASSES = 60


@dataclass(frozen=True)
class EscortMap:
    """The change of variable realizing E_α: y_of_x is increasing with y(anchor) = 0."""

    alpha: float
    y_of_x: Callable[[np.ndarray], np.ndarray]
    x_of_y: Callable[[np.ndarray], np.ndarray]
    y_range: Interval
    anchor: float = 0.0
    knots: np.ndarray | None = None


def _anchor(rho: DensityModel) -> float:
    lo, hi = rho.support.lo, rho.support.hi
    if lo < 0.0 < hi and np.isfinite(rho.logpdf(0.0)):
        return 0.0
    # otherwise the highest point of a probe grid
    if math.isfinite(lo) and math.isfinite(hi):
        probe = np.linspace(lo, hi, 1025)[1:-1]
    else:
        base = lo if math.isfinite(lo) else (hi if math.isfinite(hi) else 0.0)
        sgn = 1.0 if math.isfinite(lo) else -1.0
        probe = base + sgn * np.logspace(-6, 6, 1201)
    lp = rho.logpdf(probe)
    return float(probe[int(np.argmax(lp))])


def _probe_max(rho: DensityModel, anchor: float) -> float:
    offs = np.concatenate([np.logspace(-8, 8, 321), [0.0]])
    pts = np.concatenate([anchor + offs, anchor - offs])
    return float(np.max(rho.logpdf(pts)))


def _edge(rho, anchor, direction, lp_cut, alpha, h0):
    """Outer end of the knot table on one side of the anchor."""
    end = rho.support.hi if direction > 0 else rho.support.lo
    if math.isfinite(end) and alpha <= 1.0:
        return end  # ρ^(1-α) is bounded up to the endpoint

    def below(x):
        return rho.logpdf(x) < lp_cut

    inside = anchor
    step = h0
    while True:
        x = anchor + direction * step
        if math.isfinite(end) and direction * (x - end) >= 0:
            x = end
        if not math.isfinite(x):
            raise DivergenceError("escort table: density does not decay below the cut-off")
        if x == end or below(x):
            outside = x
            break
        inside = x
        step *= 2.0
    for _ in range(200):
        mid = 0.5 * (inside + outside)
        if mid in (inside, outside):
            break
        if mid == end or below(mid):
            outside = mid
        else:
            inside = mid
    return inside


class _Table:
    def __init__(self, rho: DensityModel, alpha: float, cut: float):
        self.rho = rho
        self.alpha = alpha
        self.anchor = _anchor(rho)
        lp_max = _probe_max(rho, self.anchor)
        lp_cut = lp_max + math.log(cut)
        s = rho.support
        if s.is_finite:
            h0 = s.length / 64.0
        else:
            h0 = 0.25 * math.exp(-lp_max)
        self.h0 = h0
        self.x_lo = _edge(rho, self.anchor, -1, lp_cut, alpha, h0)
        self.x_hi = _edge(rho, self.anchor, +1, lp_cut, alpha, h0)
        knots = self._initial_knots(h0)
        knots, seg = self._refine(knots)
        self.x = knots
        # accumulate outward from the anchor so y stays accurate near 0
        ia = int(np.searchsorted(knots, self.anchor))
        right = np.cumsum(seg[ia:])
        left = -np.cumsum(seg[:ia][::-1])[::-1]
        self.y = np.concatenate([left, [0.0], right])
        if not np.all(np.isfinite(self.y)):
            raise DivergenceError("escort map y(x) overflows: ∫ρ^(1-α) diverges too fast")
        self.g = self.gfun(knots)

    def gfun(self, x):
        lp = self.rho.logpdf(x)
        with np.errstate(over="ignore"):
            return np.exp((1.0 - self.alpha) * lp)

    def _initial_knots(self, h0):
        pts = [self.anchor, self.x_lo, self.x_hi]
        for direction, edge in ((-1, self.x_lo), (1, self.x_hi)):
            span = abs(edge - self.anchor)
            k = np.arange(-6, 2000)
            off = h0 * 2.0 ** (k / 2.0)
            off = off[off < span]
            pts.extend(self.anchor + direction * off)
            pts.extend(self.anchor + direction * np.linspace(0, min(span, 8 * h0), 33))
        pts.extend(b for b in self.rho.breakpoints if self.x_lo < b < self.x_hi)
        return np.unique(np.clip(pts, self.x_lo, self.x_hi))

    def gl(self, a, b):
        c = 0.5 * (a + b)
        h = 0.5 * (b - a)
        nodes = c[:, None] + h[:, None] * _GL_X[None, :]
        vals = self.gfun(nodes.ravel()).reshape(nodes.shape)
        return (vals @ _GL_W) * h

    def _refine(self, knots):
        """Bisect segments until whole-vs-halves GL16 agree to _SEG_RTOL.

        Converged segments are cached. Where the integrand is noisy (e.g. the
        escort of an escort near the edge of its table) that test cannot
        pass; a segment whose discrepancy is already below 1e-8 and stopped
        shrinking under bisection is accepted as noise-limited, and the summed
        noise is kept in `table_error`.
        """
        a, b = knots[:-1], knots[1:]
        prev = np.full(a.size, np.inf)
        done_a, done_b, done_v = [], [], []
        noise = 0.0
        for _ in range(_MAX_PASSES):
            m = 0.5 * (a + b)
            whole = self.gl(a, b)
            fine = self.gl(a, m) + self.gl(m, b)
            if not np.all(np.isfinite(fine)):
                raise DivergenceError("∫ρ^(1-α) is not finite on the escort table")
            with np.errstate(divide="ignore", invalid="ignore"):
                rel = np.abs(whole - fine) / np.abs(fine)
            rel = np.where(np.isnan(rel), 0.0, rel)
            width_ok = (b - a) > 64 * _EPS * np.maximum(np.abs(m), 1e-300)
            stalled = (rel < 1e-8) & (rel > 0.1 * prev)
            bad = (rel > _SEG_RTOL) & width_ok & ~stalled
            noise += float(np.sum(np.abs(whole - fine)[~bad & (rel > _SEG_RTOL)]))
            done_a.append(a[~bad])
            done_b.append(b[~bad])
            done_v.append(fine[~bad])
            if not bad.any():
                break
            a, b = np.concatenate([a[bad], m[bad]]), np.concatenate([m[bad], b[bad]])
            prev = np.concatenate([rel[bad], rel[bad]])
            if sum(x.size for x in done_a) + a.size > _MAX_KNOTS:
                raise NumericalError("escort knot table exceeded its size budget")
        else:
            raise NumericalError("escort knot table did not converge")
        a = np.concatenate(done_a)
        order = np.argsort(a)
        vals = np.concatenate(done_v)[order]
        total = float(np.sum(np.abs(vals)))
        self.table_error = noise / total if total > 0 else 0.0
        knots = np.concatenate([a[order], [np.concatenate(done_b)[order][-1]]])
        return knots, vals

    def y_of_x(self, x):
        x = np.clip(np.asarray(x, dtype=float), self.x_lo, self.x_hi)
        flat = x.reshape(-1)
        idx = np.clip(np.searchsorted(self.x, flat, side="right") - 1, 0, self.x.size - 2)
        xa = self.x[idx]
        out = self.y[idx] + self.gl(xa, flat)
        return out.reshape(x.shape)

    def x_of_y(self, y):
        y = np.asarray(y, dtype=float)
        flat = np.clip(y.reshape(-1), self.y[0], self.y[-1])
        idx = np.clip(np.searchsorted(self.y, flat, side="right") - 1, 0, self.x.size - 2)
        xa, xb = self.x[idx], self.x[idx + 1]
        ya, yb = self.y[idx], self.y[idx + 1]
        ga, gb = self.g[idx], self.g[idx + 1]
        hy = yb - ya
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.where(hy > 0, (flat - ya) / hy, 0.0)
            # cubic Hermite for x(y) with slopes dx/dy = 1/g
            da, db = hy / ga, hy / gb
            h00 = 2 * s**3 - 3 * s**2 + 1
            h10 = s**3 - 2 * s**2 + s
            h01 = -2 * s**3 + 3 * s**2
            h11 = s**3 - s**2
            x = h00 * xa + h10 * da + h01 * xb + h11 * db
        lin = xa + s * (xb - xa)
        x = np.where(np.isfinite(x) & (x >= xa) & (x <= xb), x, lin)
        lo, hi = xa.copy(), xb.copy()
        active = np.arange(flat.size)
        for _ in range(100):
            if active.size == 0:
                break
            xc = x[active]
            res = ya[active] + self.gl(xa[active], xc) - flat[active]
            g = self.gfun(xc)
            lo[active] = np.where(res <= 0, xc, lo[active])
            hi[active] = np.where(res >= 0, xc, hi[active])
            with np.errstate(divide="ignore", invalid="ignore"):
                xn = xc - res / g
            la, ha = lo[active], hi[active]
            bad = ~np.isfinite(xn) | (xn < la) | (xn > ha)
            xn = np.where(bad, 0.5 * (la + ha), xn)
            done = (np.abs(xn - xc) <= 4 * _EPS * np.maximum(np.abs(xc), _EPS)) | (res == 0) | (ha - la <= 4 * _EPS * np.maximum(np.abs(xc), _EPS))
            x[active] = np.where(res == 0, xc, xn)
            active = active[~done]
        return x.reshape(y.shape)


def escort_transform(rho: DensityModel, alpha: float, *, cut: float = 1e-16) -> tuple[DensityModel, EscortMap]:
    """Differential-escort density E_α[ρ] of order α > 0 and its change of variable."""
    alpha = float(alpha)
    if not (alpha > 0 and math.isfinite(alpha)):
        raise DomainError(f"escort order must be positive, got {alpha}")
    if alpha == 1.0:
        ident = lambda x: np.asarray(x, dtype=float)  # noqa: E731
        emap = EscortMap(1.0, ident, ident, rho.support)
        return rho, emap

    tab = _Table(rho, alpha, cut)
    emap = EscortMap(
        alpha,
        tab.y_of_x,
        tab.x_of_y,
        Interval(tab.y[0], tab.y[-1]),
        anchor=tab.anchor,
        knots=tab.x,
    )
    inner = rho.log_pdf_and_score

    def log_and_score(y):
        x = tab.x_of_y(y)
        lp, sc = inner(x)
        with np.errstate(over="ignore", invalid="ignore"):
            # dE/dy / E = α ρ^(α-1) ρ'/ρ
            esc = alpha * sc * np.exp((alpha - 1.0) * lp)
        return alpha * lp, np.where(np.isneginf(lp), 0.0, esc)

    center = rho.symmetry_center
    if center is not None and tab.x_lo < center < tab.x_hi:
        ycenter = float(tab.y_of_x(np.array([center]))[0])
    else:
        ycenter = None
    bps = [b for b in rho.breakpoints if tab.x_lo < b < tab.x_hi]
    ybps = list(tab.y_of_x(np.array(bps))) if bps else []
    # the y-range can span many decades (heavy tails of E): split the
    # quadrature on a geometric ladder in y
    y0 = float(np.min(np.abs(tab.y_of_x(np.array([tab.anchor - tab.h0, tab.anchor + tab.h0])))))
    if y0 > 0:
        steps = y0 * 4.0 ** np.arange(200)
        ybps.extend(steps[steps < tab.y[-1]])
        ybps.extend(-steps[-steps > tab.y[0]])
    out = DensityModel(
        log_and_score,
        emap.y_range,
        normalization_constant=1.0,
        smooth=rho.smooth,
        breakpoints=tuple(sorted(set(ybps))),
        symmetry_center=ycenter,
        label=f"E[{alpha:g}]({rho.label})",
        diagnostics=rho.diagnostics,
    )
    return out, emap


def escort_uniformize(rho: DensityModel) -> DensityModel:
    """The α -> 0 limit: uniform density on a unit interval, y = CDF(x) - CDF(0)."""
    lo, hi = rho.support.lo, rho.support.hi
    anchor = min(max(0.0, lo), hi)
    if anchor > lo:
        left = integrate(rho.pdf, Interval(lo, anchor), points=[b for b in rho.breakpoints if b < anchor]).value
    else:
        left = 0.0
    return uniform(-left, 1.0 - left)
