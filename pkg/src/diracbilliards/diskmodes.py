"""Radial eigenproblem of the circular billiard with uniformly growing
radius r0(t) = a t + b.

After the transform y = r / r0(t), tau = integral ds / r0(s) and the
separation (P, Q) = e^{-i lambda tau} (f, g), the radial pair becomes an
explicit first-order system for (f', g'),

    (1 - a^2 y^2) f' = i a lambda y f + (i a k - lambda) g - (k / y) f,
    g' = lambda f + (k / y) g - i a y f',

with integer angular number k.  At k = 0 this is identical to the moving
1D box system, which fixes the closed-form eigenvalues
lambda_n = 2 pi n a / ln((1+a)/(1-a)) used as a cross-check.

The primary solver shoots from the regular singular point y = 0 with the
Frobenius seed f = y^s (s = k + 1 for k >= 0, s = -k otherwise) and scans
real lambda for minima of |f(1; lambda)|^2.  The hypergeometric boundary
condition F(alpha, alpha + 1/2; gamma; a^2) = 0 with
alpha = |k + 1/2| / 2 + i lambda / (2 a) + 1/4, gamma = |k + 1/2| + 1 is
kept as a secondary check only; note its gamma disagrees with the indicial
exponent s at the origin (s wins for the shooting seed).

Results for k <= -1 come from the mirrored Frobenius branch and have no
closed-form check; they are flagged as numerically defined in CLI output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from scipy.integrate import cumulative_simpson, simpson

from .boundary import Grid, LinearLaw, Spinor2, rescaled_time
from .boxmodes import eigenvalue_1d
from .errors import (
    DomainError,
    IncompleteSpectrum,
    InconsistentFormula,
    NumericalFailure,
    SingularPoint,
)
from .kernels import HypParams, hyp2f1

# Steps per unit lambda for the RK4 shooting mesh; the eigenvalue shift
# under step halving stays below 1e-8 relative at this resolution.
_STEPS_PER_LAMBDA = 45.0
_MIN_STEPS = 400
# Below this y the mesh for k != 0 grows geometrically so the k/y terms
# stay resolved (and stable) all the way down to the seed point.
_Y_SWITCH = 0.02
_GEO_RATIO = 1.05

_RATE_CAP = 0.95  # series argument a^2 y^2 stays well inside the unit disk


def frobenius_exponent(k: int) -> int:
    """Leading power s of the regular solution f ~ y^s at the origin."""
    return k + 1 if k >= 0 else -k


def radial_rhs(k: int, lam: float, a: float, y: float, s: Spinor2) -> Spinor2:
    """Derivatives (f', g') of the separated radial pair at 0 < y <= 1."""
    if y == 0.0:
        raise DomainError("y = 0 is the regular singular point; use the Frobenius seed")
    if (a * y) ** 2 >= 1.0:
        raise SingularPoint(f"a^2 y^2 = {(a * y) ** 2:g} >= 1")
    f, g = s
    fp, gp = _rhs(k, lam, a, y, f, g)
    return Spinor2(fp, gp)


def _rhs(k, lam, a, y, f, g):
    # lam, f, g may be arrays (batched shooting); y and a are scalars
    if k:
        kyf = (k / y) * f
        kyg = (k / y) * g
    else:
        kyf = 0.0
        kyg = 0.0
    if a == 0.0:
        # static disk: real arithmetic throughout
        fp = -lam * g - kyf
        gp = lam * f + kyg
    else:
        fp = (1j * a * lam * y * f + (1j * a * k - lam) * g - kyf) / (1.0 - (a * y) ** 2)
        gp = lam * f + kyg - 1j * a * y * fp
    return fp, gp


def _seed(k: int, lam, y0: float):
    """Frobenius data (f, g) at the small start point y0 > 0."""
    s = frobenius_exponent(k)
    if k >= 0:
        f0 = y0**s
        g0 = -(2 * k + 1) / lam * y0 ** (s - 1)
    else:
        f0 = y0**s
        g0 = lam / (1 - 2 * k) * y0 ** (s + 1)
    return f0, g0


def _rk4_span(k, lam, a, mesh, f, g, fmax):
    """RK4 the pair along the given strictly increasing mesh."""
    for i in range(len(mesh) - 1):
        y = mesh[i]
        dy = mesh[i + 1] - y
        k1f, k1g = _rhs(k, lam, a, y, f, g)
        ym = y + 0.5 * dy
        k2f, k2g = _rhs(k, lam, a, ym, f + 0.5 * dy * k1f, g + 0.5 * dy * k1g)
        k3f, k3g = _rhs(k, lam, a, ym, f + 0.5 * dy * k2f, g + 0.5 * dy * k2g)
        ye = y + dy
        k4f, k4g = _rhs(k, lam, a, ye, f + dy * k3f, g + dy * k3g)
        f = f + (dy / 6.0) * (k1f + 2.0 * (k2f + k3f) + k4f)
        g = g + (dy / 6.0) * (k1g + 2.0 * (k2g + k3g) + k4g)
        fmax = np.maximum(fmax, np.abs(f))
    return f, g, fmax


def _interval_mesh(k, lam_scale, y_from, y_to, steps_per_lambda):
    """Integration mesh for one interval: geometric near the origin when a
    k/y term is present, uniform elsewhere."""
    pieces = []
    lo = y_from
    if k and y_from < _Y_SWITCH:
        stop = min(y_to, _Y_SWITCH)
        n_geo = max(1, math.ceil(math.log(stop / y_from) / math.log(_GEO_RATIO)))
        pieces.append(np.geomspace(y_from, stop, n_geo + 1))
        lo = stop
    if y_to > lo:
        n_uni = max(1, math.ceil((y_to - lo) * steps_per_lambda * max(lam_scale, 1.0)))
        if k:
            # explicit stability of the k/y terms: dy <= 0.2 y / |k|
            n_uni = max(n_uni, math.ceil((y_to - lo) * abs(k) / (0.2 * lo)))
        pieces.append(np.linspace(lo, y_to, n_uni + 1))
    mesh = pieces[0] if len(pieces) == 1 else np.concatenate([pieces[0], pieces[1][1:]])
    return mesh


def _terminal(k: int, lams, a: float, steps_per_lambda: float | None = None):
    """Batched shoot: f(1; lambda) and max |f| along the way, per lambda."""
    if steps_per_lambda is None:
        steps_per_lambda = _STEPS_PER_LAMBDA
    lams = np.atleast_1d(np.asarray(lams, dtype=float))
    if np.any(lams == 0.0):
        raise DomainError("lambda = 0 has no Frobenius seed")
    dtype = float if a == 0.0 else complex
    lam = lams.astype(dtype)
    y0 = 1e-6
    f, g = _seed(k, lam, y0)
    f = np.broadcast_to(np.asarray(f, dtype=dtype), lam.shape).copy()
    g = np.asarray(g, dtype=dtype).copy()
    scale = float(np.max(np.abs(lams)))
    eff = max(steps_per_lambda, _MIN_STEPS / max(scale, 1.0))
    mesh = _interval_mesh(k, scale, y0, 1.0, eff)
    fmax = np.abs(f)
    f, g, fmax = _rk4_span(k, lam, a, mesh, f, g, fmax)
    if not (np.all(np.isfinite(f)) and np.all(np.isfinite(g))):
        raise NumericalFailure("radial shooting overflowed")
    return f, fmax


@dataclass(eq=False)
class RadialProfile:
    """Shooting solution (f, g) sampled on a uniform y grid."""

    grid: Grid
    f: np.ndarray
    g: np.ndarray
    lam: float
    k: int
    a: float


def radial_shoot(k: int, lam: float, a: float, grid: Grid) -> RadialProfile:
    """Integrate the radial pair from the Frobenius seed onto grid nodes.

    The node at y = 0 holds the seed limits (f = 0; g = -1/lambda for
    k = 0, zero otherwise).  Local RK4 error stays below 1e-10 per step at
    the default mesh density.
    """
    if abs(a) >= 1.0:
        raise DomainError(f"|a| must be < 1, got {a}")
    if lam == 0.0:
        raise DomainError("lambda = 0 has no Frobenius seed")
    y = grid.y
    h = grid.h
    y0 = min(max(1e-6, h / 10.0), h / 2.0)
    dtype = float if a == 0.0 else complex
    fs = np.zeros(grid.n_points, dtype=dtype)
    gs = np.zeros(grid.n_points, dtype=dtype)
    if k == 0:
        gs[0] = -1.0 / lam
    f, g = _seed(k, lam, y0)
    lam_arr = np.asarray([lam], dtype=dtype)
    f = np.asarray([f], dtype=dtype)
    g = np.asarray([g], dtype=dtype)
    fmax = np.abs(f)
    prev = y0
    for j in range(1, grid.n_points):
        mesh = _interval_mesh(k, abs(lam), prev, y[j], _STEPS_PER_LAMBDA)
        f, g, fmax = _rk4_span(k, lam_arr, a, mesh, f, g, fmax)
        fs[j] = f[0]
        gs[j] = g[0]
        prev = y[j]
    if not (np.all(np.isfinite(fs)) and np.all(np.isfinite(gs))):
        raise NumericalFailure("radial shooting overflowed")
    return RadialProfile(grid=grid, f=fs.astype(complex), g=gs.astype(complex), lam=lam, k=k, a=a)


def disk_eigenvalue_k0_closed(n: int, a: float) -> float:
    """Closed-form k = 0 eigenvalue, identical to the 1D box expression."""
    if a == 0.0:
        raise DomainError("a = 0 is the static disk; use the Bessel-type roots")
    return eigenvalue_1d(n, a)


def _refine_minima(x0, x1, x2, s0, s1, s2, shoot, rounds: int = 14) -> np.ndarray:
    """Sharpen bracketed minima of |f(1; lambda)|^2 by successive parabolic
    interpolation, run in lockstep across all brackets so each round costs
    one batched shoot.

    Near a simple boundary-condition zero the profile is an almost exact
    parabola, so a handful of rounds reaches the mesh-bias floor; a
    bisection fallback keeps each triple bracketing when the parabola
    degenerates.
    """
    x0, x1, x2 = (np.asarray(v, dtype=float).copy() for v in (x0, x1, x2))
    s0, s1, s2 = (np.asarray(v, dtype=float).copy() for v in (s0, s1, s2))
    for _ in range(rounds):
        tol = 1e-10 * np.maximum(1.0, np.abs(x1))
        if np.all(x2 - x0 < tol):
            break
        d01 = (x1 - x0) * (s1 - s2)
        d21 = (x1 - x2) * (s1 - s0)
        denom = d01 - d21
        with np.errstate(divide="ignore", invalid="ignore"):
            v = x1 - 0.5 * ((x1 - x0) * d01 - (x1 - x2) * d21) / denom
        # fall back to bisecting the wider side when the parabola is flat,
        # the vertex escapes the bracket, or it lands on the center point
        right_wider = (x2 - x1) > (x1 - x0)
        fallback = np.where(right_wider, 0.5 * (x1 + x2), 0.5 * (x0 + x1))
        bad = (~np.isfinite(v)) | (v <= x0) | (v >= x2) | (np.abs(v - x1) < 1e-14 * np.maximum(1.0, np.abs(x1)))
        v = np.where(bad, fallback, v)
        sv = shoot(v)
        # rebuild bracketing triples from {x0, x1, v, x2}
        vl = v < x1  # probe on the left of the center
        better = sv <= s1
        nx0 = np.where(vl, np.where(better, x0, v), np.where(better, x1, x0))
        ns0 = np.where(vl, np.where(better, s0, sv), np.where(better, s1, s0))
        nx1 = np.where(better, v, x1)
        ns1 = np.where(better, sv, s1)
        nx2 = np.where(vl, np.where(better, x1, x2), np.where(better, x2, v))
        ns2 = np.where(vl, np.where(better, s1, s2), np.where(better, s2, sv))
        x0, x1, x2 = nx0, nx1, nx2
        s0, s1, s2 = ns0, ns1, ns2
    return x1


def disk_eigenvalues(
    k: int,
    a: float,
    n_max: int,
    *,
    accept_rel: float = 1e-8,
    steps_per_lambda: float | None = None,
    return_residuals: bool = False,
):
    """First n_max radial eigenvalues, by scanning |f(1; lambda)|^2.

    Minima of the scan are refined and accepted when the boundary residual
    |f(1)| drops below accept_rel * max|f|; for k = 0 each accepted root
    agrees with the closed form.  Raises IncompleteSpectrum (carrying the
    accepted roots and the rejected residuals) if the scan window runs out
    first, which is how complex-pair candidates for k != 0 would surface.
    """
    if abs(a) > _RATE_CAP:
        raise DomainError(f"|a| must be <= {_RATE_CAP} for the eigenvalue scan, got {a}")
    if n_max < 1:
        raise DomainError(f"n_max must be >= 1, got {n_max}")
    unit = math.pi if a == 0.0 else abs(2.0 * math.pi * a / math.log((1.0 + a) / (1.0 - a)))
    lam_lo = 0.2 * unit
    lam_hi = unit * (n_max + 0.5 * abs(k) + 2.5)
    step = unit / 10.0
    lams = np.arange(lam_lo, lam_hi, step)

    def shoot(xs):
        f1, _ = _terminal(k, xs, a, steps_per_lambda)
        return np.abs(f1) ** 2

    s = shoot(lams)
    minima = np.array(
        [i for i in range(1, len(lams) - 1) if s[i] < s[i - 1] and s[i] <= s[i + 1]],
        dtype=int,
    )
    accepted = []
    rejected_residuals = []
    if minima.size:
        refined = _refine_minima(
            lams[minima - 1], lams[minima], lams[minima + 1],
            s[minima - 1], s[minima], s[minima + 1], shoot,
        )
        f1, fmax = _terminal(k, refined, a, steps_per_lambda)
        residuals = np.abs(f1) / fmax
        for lam_star, resid in zip(refined, residuals):
            if resid <= accept_rel:
                accepted.append((float(lam_star), float(resid)))
                if len(accepted) == n_max:
                    break
            else:
                rejected_residuals.append((float(lam_star), float(resid)))
    if len(accepted) < n_max:
        raise IncompleteSpectrum(
            f"found {len(accepted)} of {n_max} eigenvalues for k={k}, a={a:g} "
            f"in lambda window [{lam_lo:g}, {lam_hi:g}]",
            found=[x for x, _ in accepted],
            residuals=[r for _, r in accepted] + [r for _, r in rejected_residuals],
        )
    values = np.array([x for x, _ in accepted])
    if return_residuals:
        return values, np.array([r for _, r in accepted])
    return values


def hypergeometric_condition(k: int, lam: float, a: float) -> complex:
    """Secondary boundary-condition check F(alpha, alpha+1/2; gamma; a^2).

    For k = 0 its zeros in lambda factor through the gamma = 3/2 closed
    form into the same unimodular difference that quantizes the 1D box.
    """
    if a == 0.0:
        raise DomainError("the hypergeometric condition needs a != 0")
    if abs(a) >= 1.0:
        raise DomainError(f"|a| must be < 1, got {a}")
    kk = abs(k + 0.5)
    alpha = 0.5 * kk + 1j * lam / (2.0 * a) + 0.25
    gamma = kk + 1.0
    return hyp2f1(HypParams(alpha=alpha, beta=alpha + 0.5, gamma=gamma, z=a * a))


def radial_second_component(
    k: int, lam: float, a: float, grid: Grid, f: np.ndarray
) -> np.ndarray:
    """Rebuild g from f by the integral form, then calibrate and verify.

    g(y) = (lambda + i a (1 - k)) y^k integral_0^y f(s) s^-k ds - i a y f(y)
    plus a homogeneous term D y^k fixed against the shooting solution at
    y = 1/2.  Raises InconsistentFormula if the calibrated result still
    disagrees with shooting beyond 1e-6 (relative max-norm).
    """
    y = grid.y
    f = np.asarray(f, dtype=complex)
    if f.shape != y.shape:
        raise DomainError("profile must be sampled on the grid")
    integrand = np.zeros_like(f)
    nz = y > 0
    integrand[nz] = f[nz] * y[nz] ** (-float(k))
    if k == 0:
        integrand[0] = f[0]
    # for k != 0 the y = 0 limit of f / y^k is zero on the regular branch
    I = cumulative_simpson(integrand.real, x=y, initial=0.0) + 1j * cumulative_simpson(
        integrand.imag, x=y, initial=0.0
    )
    hom = np.zeros_like(y)
    hom[nz] = y[nz] ** float(k)
    hom[0] = 1.0 if k == 0 else 0.0
    g_part = (lam + 1j * a * (1 - k)) * hom * I - 1j * a * y * f
    ref = radial_shoot(k, lam, a, grid)
    # the shooting profile fixes the scale of the given f (zero for f = 0),
    # so the homogeneous term is calibrated against c * g_ref at y = 1/2
    c = np.vdot(ref.f, f) / np.vdot(ref.f, ref.f)
    g_ref = c * ref.g
    j = int(np.argmin(np.abs(y - 0.5)))
    if hom[j] == 0.0:
        raise DomainError("calibration point y = 1/2 degenerate for this k")
    D = (g_ref[j] - g_part[j]) / hom[j]
    g = g_part + D * hom
    scale = float(np.max(np.abs(g_ref)))
    mismatch = float(np.max(np.abs(g - g_ref))) / max(scale, 1e-12)
    if mismatch > 1e-6:
        raise InconsistentFormula(
            f"integral form disagrees with shooting by {mismatch:.3e} (relative max-norm)"
        )
    return g


@dataclass(eq=False)
class DiskMode:
    """Radial eigenmode descriptor plus its normalized shooting profile."""

    k: int
    n: int
    a: float
    b: float
    lam: float
    frobenius_exp: int
    profile: RadialProfile = field(repr=False)


def disk_mode(k: int, n: int, a: float, b: float = 1.0, grid: Grid | None = None) -> DiskMode:
    """Build the (k, n) eigenmode of the disk r0(t) = a t + b.

    The profile is normalized so the physical norm at t = 0 is one:
    b * integral_0^1 (|f|^2 + |g|^2) dy = 1.
    """
    if b <= 0:
        raise DomainError(f"initial radius must be positive, got {b}")
    if grid is None:
        grid = Grid(2049)
    lams = disk_eigenvalues(k, a, n)
    lam = float(lams[n - 1])
    prof = radial_shoot(k, lam, a, grid)
    w = simpson(np.abs(prof.f) ** 2 + np.abs(prof.g) ** 2, dx=grid.h)
    c = math.sqrt(b * float(w))
    prof.f = prof.f / c
    prof.g = prof.g / c
    return DiskMode(k=k, n=n, a=a, b=b, lam=lam, frobenius_exp=frobenius_exponent(k), profile=prof)


def mode_solution_disk(mode: DiskMode, t: float, r) -> Spinor2:
    """(P, Q) at time t and radius r: e^{-i lambda tau(t)} times the profile."""
    law = LinearLaw(mode.a, mode.b)
    r0 = law.position(t)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0.0) or np.any(r > r0 * (1.0 + 1e-12)):
        raise DomainError(f"r outside the disk [0, {r0:g}] at t = {t:g}")
    yq = np.clip(r / r0, 0.0, 1.0)
    yg = mode.profile.grid.y
    f = np.interp(yq, yg, mode.profile.f.real) + 1j * np.interp(yq, yg, mode.profile.f.imag)
    g = np.interp(yq, yg, mode.profile.g.real) + 1j * np.interp(yq, yg, mode.profile.g.imag)
    phase = np.exp(-1j * mode.lam * rescaled_time(law, t))
    return Spinor2(phase * f, phase * g)
