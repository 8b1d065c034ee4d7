"""Scalar numerical kernels: Gauss hypergeometric series, a closed-form
cross-check for the gamma = 3/2 quadratic-argument case, adaptive
quadrature, and bracketed root finding.

The series is evaluated only inside |z| < 1; every use in this package has
z = (a y)^2 with |a| <= 0.95, so no analytic continuation machinery is
needed.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Tuple

from scipy.integrate import IntegrationWarning, quad
from scipy.optimize import brentq

from .errors import BracketError, DomainError, NumericalFailure

MAX_TERMS = 10**6
TOL_FLOOR = 1e-15


def _is_nonpositive_integer(c: complex, tol: float = 1e-12) -> bool:
    return (
        abs(c.imag) <= tol
        and c.real <= tol
        and abs(c.real - round(c.real)) <= tol
    )


@dataclass(frozen=True)
class HypParams:
    """Parameters (alpha, beta, gamma) and real argument z of 2F1."""

    alpha: complex
    beta: complex
    gamma: complex
    z: float

    def __post_init__(self):
        if _is_nonpositive_integer(complex(self.gamma)):
            raise DomainError(f"gamma = {self.gamma} is a pole of the series")
        if abs(self.z) >= 1.0:
            raise DomainError(f"|z| = {abs(self.z)} outside the convergence disk")


def hyp2f1(p: HypParams, tol: float = 1e-13) -> complex:
    """Gauss series sum_k (alpha)_k (beta)_k / ((gamma)_k k!) z^k.

    Terms are accumulated until two successive ones are each below
    tol * |partial sum|.  The implementation is symmetric in alpha and
    beta by construction.
    """
    tol = max(float(tol), TOL_FLOOR)
    a, b, c = complex(p.alpha), complex(p.beta), complex(p.gamma)
    z = float(p.z)
    term = 1.0 + 0.0j
    total = term
    small = 0
    for k in range(MAX_TERMS):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        total += term
        if abs(term) < tol * abs(total):
            small += 1
            if small >= 2:
                return total
        else:
            small = 0
    raise NumericalFailure(f"2F1 series did not converge within {MAX_TERMS} terms")


def hyp2f1_halfgamma_oracle(alpha: complex, z: float) -> complex:
    """Closed form of F(alpha, alpha + 1/2; 3/2; z^2) for |z| < 1.

    Equals [(1+z)^w - (1-z)^w] / (2 z w) with w = 1 - 2 alpha; at
    alpha = 1/2 (w = 0) the limit is ln((1+z)/(1-z)) / (2 z).  For real
    lambda and alpha = 1/2 + i lambda/(2a) both powers are unimodular, so
    the zeros in lambda are exactly where their phases coincide mod 2 pi.
    """
    if abs(z) >= 1.0:
        raise DomainError(f"|z| = {abs(z)} outside the convergence disk")
    if z == 0.0:
        return 1.0 + 0.0j
    w = 1.0 - 2.0 * complex(alpha)
    A = math.log1p(z)
    B = math.log1p(-z)
    if abs(w) < 1e-5:
        # (e^{wA} - e^{wB}) / w expanded to O(w^2) to dodge cancellation
        series = (A - B) * (
            1.0 + w * (A + B) / 2.0 + w * w * (A * A + A * B + B * B) / 6.0
        )
        return series / (2.0 * z)
    return (cmath.exp(w * A) - cmath.exp(w * B)) / (2.0 * z * w)


def integrate_adaptive(
    fn: Callable[[float], complex], lo: float, hi: float, tol: float = 1e-10
) -> Tuple[complex, float]:
    """Adaptive (Gauss-Kronrod) quadrature of a complex-valued integrand.

    Returns (value, error estimate); integrable endpoint singularities of
    type s^p with p > -1 are handled by the underlying routine.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            re, re_err = quad(lambda s: complex(fn(s)).real, lo, hi, epsabs=1e-14, epsrel=tol, limit=200)
            im, im_err = quad(lambda s: complex(fn(s)).imag, lo, hi, epsabs=1e-14, epsrel=tol, limit=200)
        except IntegrationWarning as exc:
            raise NumericalFailure(f"quadrature on [{lo:g}, {hi:g}] did not converge: {exc}")
    return complex(re, im), float(re_err + im_err)


def find_root_bracketed(
    fn: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12
) -> float:
    """Brent root inside [lo, hi]; the bracket must straddle a sign change."""
    flo = fn(lo)
    fhi = fn(hi)
    if flo == 0.0:
        return float(lo)
    if fhi == 0.0:
        return float(hi)
    if (flo > 0) == (fhi > 0):
        raise BracketError(f"no sign change on [{lo:g}, {hi:g}]: f = ({flo:g}, {fhi:g})")
    return float(brentq(fn, lo, hi, xtol=tol, maxiter=200))
