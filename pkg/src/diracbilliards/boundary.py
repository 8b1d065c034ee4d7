"""Wall-trajectory laws and the moving-box coordinate/time transforms.

Natural units hbar = c = 1 throughout: wall speeds are fractions of the
speed of light and every length is measured in units of the initial wall
position.  The substitution y = x / L(t) maps the physical domain
[0, L(t)] onto the fixed strip [0, 1]; the companion clock
tau(t) = integral_0^t ds / L(s) is the time variable in which the
transformed generator becomes autonomous for a linearly moving wall,
where it has the closed form tau = ln((a t + b) / b) / a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import DomainError, InvalidLaw, OutOfRange, SuperluminalWall


class Spinor2(NamedTuple):
    """Two-component complex amplitude (components may be numpy arrays)."""

    c1: complex
    c2: complex


@dataclass(frozen=True)
class Grid:
    """Uniform samples of the transformed coordinate y in [0, 1]."""

    n_points: int

    def __post_init__(self):
        if self.n_points < 3:
            raise DomainError(f"grid needs at least 3 points, got {self.n_points}")

    @property
    def h(self) -> float:
        return 1.0 / (self.n_points - 1)

    @property
    def y(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n_points)


@dataclass(frozen=True)
class StaticLaw:
    """Fixed wall at L0."""

    L0: float

    def __post_init__(self):
        if self.L0 <= 0:
            raise InvalidLaw(f"static wall position must be positive, got {self.L0}")

    def position(self, t: float) -> float:
        return self.L0

    def velocity(self, t: float) -> float:
        return 0.0


@dataclass(frozen=True)
class LinearLaw:
    """Uniformly moving wall L(t) = a t + b, |a| < 1 (subluminal)."""

    a: float
    b: float

    def __post_init__(self):
        if abs(self.a) >= 1.0:
            raise SuperluminalWall(f"wall rate |a| must be < 1, got {self.a}")
        if self.b <= 0:
            raise InvalidLaw(f"initial wall position must be positive, got {self.b}")

    @property
    def blowup_time(self) -> float:
        """Time at which a contracting wall (a < 0) reaches the origin."""
        return -self.b / self.a if self.a < 0 else math.inf

    def position(self, t: float) -> float:
        L = self.a * t + self.b
        if L <= 0:
            raise InvalidLaw(
                f"L(t) = {L:g} <= 0 at t = {t:g}; wall collapses at t = {self.blowup_time:g}"
            )
        return L

    def velocity(self, t: float) -> float:
        return self.a


@dataclass(frozen=True)
class BreathingLaw:
    """Periodically oscillating wall L(t) = L0 (1 + eps sin(omega t))."""

    L0: float
    eps: float
    omega: float

    def __post_init__(self):
        if self.L0 <= 0:
            raise InvalidLaw(f"mean wall position must be positive, got {self.L0}")
        if abs(self.eps) >= 1.0:
            raise InvalidLaw(f"relative amplitude |eps| must be < 1, got {self.eps}")
        if abs(self.L0 * self.eps * self.omega) >= 1.0:
            raise SuperluminalWall(
                f"peak wall speed |L0 eps omega| = {abs(self.L0 * self.eps * self.omega):g} >= 1"
            )

    def position(self, t: float) -> float:
        return self.L0 * (1.0 + self.eps * math.sin(self.omega * t))

    def velocity(self, t: float) -> float:
        return self.L0 * self.eps * self.omega * math.cos(self.omega * t)


@dataclass(frozen=True)
class TabulatedLaw:
    """Wall trajectory given by (t, L) samples, linearly interpolated.

    Velocities come from centered differences of the samples (one-sided at
    the ends), interpolated the same way, so they converge at second order
    to the velocity of any smooth trajectory the table was sampled from.
    """

    times: tuple
    values: tuple

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        L = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.shape != L.shape or t.size < 2:
            raise InvalidLaw("tabulated law needs matching 1d arrays with >= 2 samples")
        if not np.all(np.diff(t) > 0):
            raise InvalidLaw("tabulated times must be strictly increasing")
        if not np.all(L > 0):
            raise InvalidLaw("tabulated wall positions must all be positive")
        dLdt = np.gradient(L, t)
        if np.max(np.abs(dLdt)) >= 1.0:
            raise SuperluminalWall(
                f"tabulated law reaches |dL/dt| = {np.max(np.abs(dLdt)):g} >= 1"
            )
        object.__setattr__(self, "times", tuple(float(x) for x in t))
        object.__setattr__(self, "values", tuple(float(x) for x in L))
        object.__setattr__(self, "_t", t)
        object.__setattr__(self, "_L", L)
        object.__setattr__(self, "_dLdt", dLdt)

    def _check_range(self, t: float):
        if t < self._t[0] or t > self._t[-1]:
            raise OutOfRange(
                f"t = {t:g} outside tabulated range [{self._t[0]:g}, {self._t[-1]:g}]"
            )

    def position(self, t: float) -> float:
        self._check_range(t)
        return float(np.interp(t, self._t, self._L))

    def velocity(self, t: float) -> float:
        self._check_range(t)
        return float(np.interp(t, self._t, self._dLdt))


BoundaryLaw = Union[StaticLaw, LinearLaw, BreathingLaw, TabulatedLaw]


def boundary_position(law: BoundaryLaw, t: float) -> float:
    """Wall position L(t) (or disk radius r0(t))."""
    L = law.position(t)
    if L <= 0:
        raise InvalidLaw(f"L({t:g}) = {L:g} is not positive")
    return L


def boundary_velocity(law: BoundaryLaw, t: float) -> float:
    """Wall velocity dL/dt; raises if the law has gone superluminal."""
    v = law.velocity(t)
    if abs(v) >= 1.0:
        raise SuperluminalWall(f"|dL/dt| = {abs(v):g} >= 1 at t = {t:g}")
    return v


def rescaled_time(law: BoundaryLaw, t: float) -> float:
    """The transformed clock tau(t) = integral_0^t ds / L(s).

    Linear laws use the closed form ln(1 + a t / b) / a (continuous at
    a = 0 where it degenerates to t / b); any other law is integrated by
    adaptive quadrature to 1e-12 relative tolerance.
    """
    if t < 0:
        raise OutOfRange(f"rescaled time requires t >= 0, got {t:g}")
    if t == 0:
        return 0.0
    if isinstance(law, StaticLaw):
        return t / law.L0
    if isinstance(law, LinearLaw):
        law.position(t)  # raises on collapse inside [0, t]
        if law.a == 0.0:
            return t / law.b
        return math.log1p(law.a * t / law.b) / law.a
    from .kernels import integrate_adaptive

    value, _ = integrate_adaptive(lambda s: 1.0 / boundary_position(law, s), 0.0, t, tol=1e-12)
    return float(value.real)


def validate_horizon(law: BoundaryLaw, t_end: float, t_start: float = 0.0, samples: int = 257):
    """Eagerly check positivity and subluminality over [t_start, t_start + t_end].

    Sampled check; the individual position/velocity calls still guard every
    later evaluation, so this exists to fail fast with a useful message.
    """
    if t_end <= 0:
        raise DomainError(f"horizon must be positive, got {t_end}")
    if isinstance(law, LinearLaw) and t_start + t_end >= law.blowup_time:
        raise InvalidLaw(
            f"linear law collapses at t = {law.blowup_time:g}, before horizon {t_start + t_end:g}"
        )
    for t in np.linspace(t_start, t_start + t_end, samples):
        boundary_position(law, float(t))
        boundary_velocity(law, float(t))
