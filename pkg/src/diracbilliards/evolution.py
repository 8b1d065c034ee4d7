"""Time evolution on the fixed strip y in [0, 1] for arbitrary wall laws.

The transformed equations carry the wall motion as an advective term,

    dPsi1/dt = -(i/L) dPsi2/dy + (Ldot/L) y dPsi1/dy,
    dPsi2/dt = +(i/L) dPsi1/dy + (Ldot/L) y dPsi2/dy,

(for the radial geometry the derivative terms pick up -+ k/y companions).
Space is discretized with centered second-order differences in the
interior and one-sided second-order stencils at the ends for the
component without a boundary condition; Psi1 is hard-pinned at its
constrained ends.  Classic RK4 in time, with the step bounded by the
characteristic speed (1 + |Ldot| y) / L.

Only Psi1 vanishes at a wall, so probability can flow through a moving
wall: the exact comoving modes have norm proportional to L(t) and energy
proportional to 1/L(t), and those scalings, not norm conservation, are
the correctness criteria here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
from scipy.integrate import simpson

from .boundary import (
    BoundaryLaw,
    Grid,
    LinearLaw,
    boundary_position,
    boundary_velocity,
    validate_horizon,
)
from .boxmodes import Mode1D, StaticMode, eigenmode_1d, static_mode_eval
from .diskmodes import DiskMode
from .errors import DomainError, NumericalFailure, StabilityError

_CFL_LIMIT = 0.5


@dataclass(frozen=True)
class Box1D:
    """1D box: Psi1 = 0 at both walls."""


@dataclass(frozen=True)
class DiskRadial:
    """Radial sector with angular number k: Psi1 = 0 at y = 1 and at the
    regular origin."""

    k: int


Geometry = Union[Box1D, DiskRadial]


@dataclass
class FieldState:
    """Two-component field sampled on the transformed grid at time t."""

    t: float
    grid: Grid
    psi1: np.ndarray
    psi2: np.ndarray
    law: BoundaryLaw
    geometry: Geometry

    def copy(self) -> "FieldState":
        return replace(self, psi1=self.psi1.copy(), psi2=self.psi2.copy())

    def check(self, tol: float = 1e-12):
        if self.psi1.shape != (self.grid.n_points,) or self.psi2.shape != (self.grid.n_points,):
            raise DomainError("field arrays must match the grid")
        if not (np.all(np.isfinite(self.psi1)) and np.all(np.isfinite(self.psi2))):
            raise NumericalFailure("field contains non-finite samples")
        if abs(self.psi1[-1]) > tol:
            raise DomainError("Psi1 must vanish at the moving wall (y = 1)")
        if abs(self.psi1[0]) > tol:
            raise DomainError("Psi1 must vanish at y = 0")


@dataclass
class EvolutionConfig:
    """Time-stepping parameters; dt = None selects the CFL-bounded step."""

    t_end: float
    dt: Optional[float] = None
    cfl: float = 0.5
    record_every: int = 100
    scheme: str = "rk4-central"

    def __post_init__(self):
        # t_end < 0 steps backward (used by the time-reversal check)
        if self.t_end == 0:
            raise DomainError("t_end must be nonzero")
        if self.dt is not None and self.dt <= 0:
            raise DomainError(f"dt must be positive, got {self.dt}")
        if not 0.0 < self.cfl <= _CFL_LIMIT:
            raise DomainError(f"cfl must lie in (0, {_CFL_LIMIT}], got {self.cfl}")
        if self.record_every < 1:
            raise DomainError(f"record_every must be >= 1, got {self.record_every}")
        if self.scheme != "rk4-central":
            raise DomainError(f"unknown scheme {self.scheme!r}")


@dataclass
class ObservableSeries:
    """Recorded (t, L, norm, energy) samples of one evolution."""

    t: np.ndarray
    L: np.ndarray
    norm: np.ndarray
    energy: np.ndarray

    def __post_init__(self):
        if not np.all(np.diff(self.t) > 0):
            raise DomainError("sample times must be strictly increasing")

    def __len__(self):
        return self.t.size

    def rows(self):
        return zip(self.t, self.L, self.norm, self.energy)


def _deriv(arr: np.ndarray, h: float) -> np.ndarray:
    """First derivative: centered interior, one-sided second order at ends."""
    out = np.empty_like(arr)
    out[1:-1] = (arr[2:] - arr[:-2]) / (2.0 * h)
    out[0] = (-3.0 * arr[0] + 4.0 * arr[1] - arr[2]) / (2.0 * h)
    out[-1] = (3.0 * arr[-1] - 4.0 * arr[-2] + arr[-3]) / (2.0 * h)
    return out


def _rhs(u, v, L, Ldot, y, h, geometry):
    Du = _deriv(u, h)
    Dv = _deriv(v, h)
    adv = (Ldot / L) * y
    if isinstance(geometry, Box1D):
        du = adv * Du - (1j / L) * Dv
        dv = adv * Dv + (1j / L) * Du
    else:
        k = geometry.k
        if k:
            # u / y and v / y with the pinned-origin limit u/y -> u'(0)
            uy = np.empty_like(u)
            uy[1:] = u[1:] / y[1:]
            uy[0] = Du[0]
            vy = np.empty_like(v)
            vy[1:] = v[1:] / y[1:]
            vy[0] = Dv[0]
            du = adv * Du - (1j / L) * (Dv - k * vy)
            dv = adv * Dv + (1j / L) * (Du + k * uy)
        else:
            du = adv * Du - (1j / L) * Dv
            dv = adv * Dv + (1j / L) * Du
    # Dirichlet rows: Psi1 pinned at y=1 always, and at y=0 for both
    # geometries (box wall / radial regularity)
    du[0] = 0.0
    du[-1] = 0.0
    return du, dv


def _stability_bound(h: float, L: float, Ldot: float) -> float:
    return _CFL_LIMIT * h * L / (1.0 + abs(Ldot))


def _evolve_core(
    initial: FieldState,
    cfg: EvolutionConfig,
    on_record: Callable[[FieldState], None],
) -> FieldState:
    initial.check()
    sgn = 1.0 if cfg.t_end > 0 else -1.0
    t0 = initial.t
    t_goal = t0 + cfg.t_end
    validate_horizon(initial.law, abs(cfg.t_end), t_start=min(t0, t_goal))
    state = initial.copy()
    y = state.grid.y
    h = state.grid.h
    law = state.law
    geom = state.geometry
    on_record(state)
    u, v = state.psi1, state.psi2
    t = t0
    steps = 0
    eps_t = 1e-15 * max(1.0, abs(t_goal), abs(t0))
    while sgn * (t_goal - t) > eps_t:
        L0 = boundary_position(law, t)
        V0 = boundary_velocity(law, t)
        bound = _stability_bound(h, L0, V0)
        if cfg.dt is None:
            mag = cfg.cfl * h * L0 / (1.0 + abs(V0))
        else:
            mag = cfg.dt
            if mag > bound * (1.0 + 1e-12):
                raise StabilityError(
                    f"dt = {mag:g} exceeds the CFL bound {bound:g} at t = {t:g}"
                )
        dt = sgn * min(mag, sgn * (t_goal - t))
        tm = t + 0.5 * dt
        te = t + dt
        Lm, Vm = boundary_position(law, tm), boundary_velocity(law, tm)
        Le, Ve = boundary_position(law, te), boundary_velocity(law, te)
        k1u, k1v = _rhs(u, v, L0, V0, y, h, geom)
        k2u, k2v = _rhs(u + 0.5 * dt * k1u, v + 0.5 * dt * k1v, Lm, Vm, y, h, geom)
        k3u, k3v = _rhs(u + 0.5 * dt * k2u, v + 0.5 * dt * k2v, Lm, Vm, y, h, geom)
        k4u, k4v = _rhs(u + dt * k3u, v + dt * k3v, Le, Ve, y, h, geom)
        u = u + (dt / 6.0) * (k1u + 2.0 * (k2u + k3u) + k4u)
        v = v + (dt / 6.0) * (k1v + 2.0 * (k2v + k3v) + k4v)
        u[0] = 0.0
        u[-1] = 0.0
        steps += 1
        if cfg.dt is not None:
            t = t0 + sgn * steps * cfg.dt
            if sgn * (t - t_goal) > 0:
                t = t_goal
        else:
            t = te
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
            raise NumericalFailure(f"non-finite field at t = {t:g} (step {steps})")
        state.t, state.psi1, state.psi2 = t, u, v
        if steps % cfg.record_every == 0 and sgn * (t_goal - t) > eps_t:
            on_record(state)
    on_record(state)
    return state


def evolve(initial: FieldState, cfg: EvolutionConfig) -> Tuple[FieldState, List[FieldState]]:
    """Propagate a field state, returning the final state and the recorded
    trajectory (initial state, every record_every-th step, final state)."""
    trajectory: List[FieldState] = []
    final = _evolve_core(initial, cfg, lambda s: trajectory.append(s.copy()))
    return final, trajectory


def norm(state: FieldState) -> float:
    """Physical norm L(t) * integral_0^1 (|Psi1|^2 + |Psi2|^2) dy (Simpson)."""
    L = boundary_position(state.law, state.t)
    dens = np.abs(state.psi1) ** 2 + np.abs(state.psi2) ** 2
    return float(L * simpson(dens, dx=state.grid.h))


def energy(state: FieldState) -> float:
    """Instantaneous expectation of the free generator, in physical units.

    E = Re integral (Psi1* dPsi2/dx - Psi2* dPsi1/dx) dx / norm for the
    box; the radial geometry adds the -+ k/r terms of its generator.  For
    the static box mode n this returns +n pi / L.
    """
    h = state.grid.h
    u, v = state.psi1, state.psi2
    Du = _deriv(u, h)
    Dv = _deriv(v, h)
    if isinstance(state.geometry, DiskRadial) and state.geometry.k:
        k = state.geometry.k
        y = state.grid.y
        uy = np.empty_like(u)
        uy[1:] = u[1:] / y[1:]
        uy[0] = Du[0]
        vy = np.empty_like(v)
        vy[1:] = v[1:] / y[1:]
        vy[0] = Dv[0]
        integrand = np.conj(u) * (Dv - k * vy) - np.conj(v) * (Du + k * uy)
    else:
        integrand = np.conj(u) * Dv - np.conj(v) * Du
    numerator = float(np.real(simpson(integrand, dx=h)))
    L = boundary_position(state.law, state.t)
    dens = float(simpson(np.abs(u) ** 2 + np.abs(v) ** 2, dx=h))
    if dens <= 0.0:
        raise DomainError("energy undefined for a zero-norm state")
    return numerator / (L * dens)


def static_box_state(n: int, law: BoundaryLaw, grid: Grid, t: float = 0.0) -> FieldState:
    """Instantaneous static eigenmode of the box of length L(t)."""
    L = boundary_position(law, t)
    sm = StaticMode(n, L)
    psi1, psi2 = static_mode_eval(sm, grid.y * L)
    psi1 = np.asarray(psi1, dtype=complex)
    psi1[0] = 0.0
    psi1[-1] = 0.0
    return FieldState(t=t, grid=grid, psi1=psi1, psi2=np.asarray(psi2, dtype=complex),
                      law=law, geometry=Box1D())


def box_mode_state(mode: Mode1D, grid: Grid, t: float = 0.0) -> FieldState:
    """Exact comoving box mode sampled on the grid at time t."""
    from .boundary import rescaled_time

    law = LinearLaw(mode.a, mode.b)
    f, g = eigenmode_1d(mode, grid.y)
    phase = np.exp(-1j * mode.lam * rescaled_time(law, t))
    psi1 = phase * np.asarray(f, dtype=complex)
    psi1[0] = 0.0
    psi1[-1] = 0.0
    return FieldState(t=t, grid=grid, psi1=psi1, psi2=phase * np.asarray(g, dtype=complex),
                      law=law, geometry=Box1D())


def disk_mode_state(mode: DiskMode, t: float = 0.0) -> FieldState:
    """Exact comoving disk mode on its own profile grid at time t."""
    from .boundary import rescaled_time

    law = LinearLaw(mode.a, mode.b)
    phase = np.exp(-1j * mode.lam * rescaled_time(law, t))
    psi1 = phase * mode.profile.f.astype(complex)
    psi1[0] = 0.0
    psi1[-1] = 0.0
    return FieldState(t=t, grid=mode.profile.grid, psi1=psi1,
                      psi2=phase * mode.profile.g.astype(complex),
                      law=law, geometry=DiskRadial(mode.k))


def run_observables(initial: FieldState, cfg: EvolutionConfig) -> ObservableSeries:
    """Propagate a state and record only the (t, L, norm, energy) series."""
    ts, Ls, norms, energies = [], [], [], []

    def record(state: FieldState):
        ts.append(state.t)
        Ls.append(boundary_position(state.law, state.t))
        norms.append(norm(state))
        energies.append(energy(state))

    _evolve_core(initial, cfg, record)
    return ObservableSeries(
        t=np.asarray(ts), L=np.asarray(Ls), norm=np.asarray(norms), energy=np.asarray(energies)
    )


def run_fermi(n0: int, law: BoundaryLaw, cfg: EvolutionConfig, n_points: int = 513) -> ObservableSeries:
    """Drive the static box mode n0 with a (breathing) wall law and record
    the (t, L, norm, energy) time series."""
    grid = Grid(n_points)
    initial = static_box_state(n0, law, grid, t=0.0)
    return run_observables(initial, cfg)
