"""Executable invariant suite behind the `verify` CLI command.

Each check re-derives its expected values through an independent route
(closed forms, bracketed root finding on the quantization condition,
brute-force scans of the static radial equation, grid-refinement studies)
and reports a measured number against a required tolerance.  The pytest
suite reuses these oracles; the CLI prints one line per property and
exits nonzero if any fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List

import numpy as np
from scipy.integrate import simpson, solve_ivp

from .boundary import (
    BreathingLaw,
    Grid,
    LinearLaw,
    StaticLaw,
    TabulatedLaw,
    boundary_velocity,
    rescaled_time,
)
from .boxmodes import (
    eigenvalue_1d,
    eigenmode_1d,
    mode_1d,
    quantization_residual_1d,
    system_residual_1d,
)
from .diskmodes import (
    disk_eigenvalue_k0_closed,
    disk_eigenvalues,
    frobenius_exponent,
    radial_shoot,
)
from .errors import BilliardError
from .evolution import (
    Box1D,
    EvolutionConfig,
    box_mode_state,
    disk_mode_state,
    energy,
    evolve,
    norm,
    run_fermi,
    static_box_state,
)
from .kernels import (
    HypParams,
    find_root_bracketed,
    hyp2f1,
    hyp2f1_halfgamma_oracle,
    integrate_adaptive,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: float
    required: float
    detail: str = ""

    def line(self) -> str:
        tag = "ok  " if self.passed else "FAIL"
        extra = f"  [{self.detail}]" if self.detail else ""
        return f"{tag}  {self.name}: measured {self.measured:.3e} vs required {self.required:.3e}{extra}"


# ---------------------------------------------------------------------------
# independent oracles (shared with the pytest suite)


def quantization_phase_root(n: int, a: float) -> float:
    """Root of the box boundary condition by bracketed root finding.

    The complex residual R factors as 2 i sin(lambda delta) times a
    unimodular function, so Im[R * e^{i lambda (c1 + c2)/2}] is a real
    function with simple sign changes exactly at the eigenvalues.
    """
    c1 = math.log((1.0 - a) / 2.0) / a
    c2 = math.log((1.0 + a) / 2.0) / a
    delta = 0.5 * (c2 - c1)

    def phase(lam: float) -> float:
        r = quantization_residual_1d(lam, a)
        return (r * np.exp(1j * lam * 0.5 * (c1 + c2))).imag

    center = n * math.pi / delta
    half = 0.45 * math.pi / abs(delta)
    return find_root_bracketed(phase, center - half, center + half, tol=1e-14)


def static_disk_oracle_roots(k: int, n_max: int) -> np.ndarray:
    """Brute-force eigenvalues of f'' + (lambda^2 - k(k+1)/y^2) f = 0,
    f(1) = 0, by dense scan plus bisection on a solve_ivp integration.

    Independent of the first-order shooting path: different equation,
    different integrator.
    """

    def f_at_1(lam: float) -> float:
        y0 = 1e-6

        def rhs(y, s):
            return [s[1], (k * (k + 1) / y**2 - lam**2) * s[0]]

        sol = solve_ivp(
            rhs,
            (y0, 1.0),
            [y0 ** (k + 1), (k + 1) * y0**k],
            rtol=1e-10,
            atol=1e-14,
            dense_output=False,
        )
        return float(sol.y[0, -1])

    roots = []
    lam_grid = np.arange(0.5, math.pi * (n_max + 0.5 * k + 2.0), 0.05)
    vals = [f_at_1(x) for x in lam_grid]
    for i in range(len(lam_grid) - 1):
        if vals[i] == 0.0:
            roots.append(float(lam_grid[i]))
        elif vals[i] * vals[i + 1] < 0:
            roots.append(find_root_bracketed(f_at_1, lam_grid[i], lam_grid[i + 1], tol=1e-12))
        if len(roots) == n_max:
            break
    return np.asarray(roots)


def _l2_distance(state, psi1, psi2) -> float:
    L = state.law.position(state.t)
    d = np.abs(state.psi1 - psi1) ** 2 + np.abs(state.psi2 - psi2) ** 2
    return math.sqrt(L * float(simpson(d, dx=state.grid.h)))


# ---------------------------------------------------------------------------
# checks


def check_linear_tau_closed_form() -> CheckResult:
    worst = 0.0
    for a in (-0.5, -0.1, 0.1, 0.5, 0.9):
        for b in (0.5, 1.0, 2.0):
            for t in (0.5, 1.5, 3.0):
                if a * t + b <= 0.05:
                    continue
                law = LinearLaw(a, b)
                closed = rescaled_time(law, t)
                quad, _ = integrate_adaptive(lambda s: 1.0 / (a * s + b), 0.0, t, tol=1e-13)
                worst = max(worst, abs(closed - quad.real) / abs(quad.real))
    return CheckResult("boundary/linear-tau-closed-form", worst <= 1e-10, worst, 1e-10)


def check_tabulated_velocity() -> CheckResult:
    worst = 0.0
    for n in (51, 101, 201):
        t = np.linspace(0.0, 2.0, n)
        law = TabulatedLaw(tuple(t), tuple(0.3 * t + 1.0))
        for tq in (0.3, 1.0, 1.7):
            worst = max(worst, abs(boundary_velocity(law, tq) - 0.3))
    return CheckResult("boundary/tabulated-velocity-linear", worst <= 1e-12, worst, 1e-12)


def check_tau_monotone() -> CheckResult:
    law = BreathingLaw(1.0, 0.2, 3.0)
    taus = [rescaled_time(law, float(t)) for t in np.linspace(0.0, 5.0, 41)]
    steps = np.diff(taus)
    worst = float(np.min(steps))
    return CheckResult("boundary/tau-monotone", worst > 0.0, worst, 0.0, "min successive step")


def check_eigenvalue_two_path() -> CheckResult:
    worst = 0.0
    for a in (-0.5, -0.1, 0.1, 0.5, 0.9):
        for n in range(1, 11):
            lam = eigenvalue_1d(n, a)
            root = quantization_phase_root(n, a)
            worst = max(worst, abs(lam - root) / abs(lam))
    return CheckResult("boxmodes/eigenvalue-two-path", worst <= 1e-10, worst, 1e-10)


def check_eigenvalue_limit() -> CheckResult:
    worst_ratio = 0.0
    for a in (0.01, 0.005, 0.001):
        for n in range(1, 11):
            dev = abs(eigenvalue_1d(n, a) / (math.pi * n) - 1.0)
            worst_ratio = max(worst_ratio, dev / a**2)
    return CheckResult("boxmodes/eigenvalue-small-a-limit", worst_ratio <= 1.0, worst_ratio, 1.0,
                       "deviation in units of a^2")


def check_eigenvalue_antisymmetry() -> CheckResult:
    worst = 0.0
    for a in (-0.7, 0.2, 0.9):
        for n in (1, 3, 10):
            worst = max(worst, abs(eigenvalue_1d(-n, a) + eigenvalue_1d(n, a)))
    return CheckResult("boxmodes/eigenvalue-antisymmetry", worst == 0.0, worst, 0.0)


def check_eigenmode_residual_order() -> CheckResult:
    mode = mode_1d(1, 0.5)
    res = []
    for npts in (129, 257, 513):
        g = Grid(npts)
        f, gg = eigenmode_1d(mode, g.y)
        res.append(system_residual_1d(mode.lam, mode.a, f, gg, g.h))
    orders = [math.log2(res[i] / res[i + 1]) for i in range(2)]
    ok = all(1.9 <= o <= 2.1 for o in orders)
    return CheckResult("boxmodes/residual-order-2", ok, min(orders), 1.9,
                       f"orders {orders[0]:.3f}, {orders[1]:.3f}")


def check_eigenmode_boundary() -> CheckResult:
    worst = 0.0
    for n, a in ((1, 0.3), (2, 0.7), (5, -0.4), (3, 0.9)):
        mode = mode_1d(n, a)
        f, _ = eigenmode_1d(mode, np.array([0.0, 1.0]))
        worst = max(worst, float(np.max(np.abs(f))))
    return CheckResult("boxmodes/boundary-values", worst <= 1e-12, worst, 1e-12)


def check_unimodular_powers() -> CheckResult:
    worst = 0.0
    y = np.linspace(0.0, 1.0, 101)
    for a in (-0.9, -0.3, 0.3, 0.9):
        for lam in (0.7, 3.3, 12.0):
            for base in (1.0 - a * y, 1.0 + a * y):
                p = np.exp(-1j * lam / a * np.log(base))
                worst = max(worst, float(np.max(np.abs(np.abs(p) - 1.0))))
    return CheckResult("boxmodes/unimodular-powers", worst <= 1e-13, worst, 1e-13)


def check_hyp_halfgamma() -> CheckResult:
    worst = 0.0
    for alpha in (0.3, 1.0 + 0.7j, 0.5 + 2.0j):
        for z in (-0.5, -0.1, 0.1, 0.5, 0.8):
            series = hyp2f1(HypParams(alpha, alpha + 0.5, 1.5, z * z))
            closed = hyp2f1_halfgamma_oracle(alpha, z)
            worst = max(worst, abs(series - closed) / abs(closed))
    return CheckResult("kernels/halfgamma-oracle-agreement", worst <= 1e-10, worst, 1e-10)


def check_hyp_binomial() -> CheckResult:
    worst = 0.0
    for alpha in (0.5, 1.3, 0.5 + 2.0j):
        for beta in (0.7, 2.5):
            for z in (-0.5, -0.1, 0.1, 0.5, 0.8):
                series = hyp2f1(HypParams(alpha, beta, beta, z))
                closed = (1.0 - z) ** (-complex(alpha))
                worst = max(worst, abs(series - closed) / abs(closed))
    return CheckResult("kernels/binomial-identity", worst <= 1e-10, worst, 1e-10)


def check_hyp_symmetry() -> CheckResult:
    worst = 0.0
    for alpha, beta in ((0.3, 1.7), (1.0 + 0.7j, 0.2 - 1.1j)):
        for z in (-0.6, 0.45):
            d = hyp2f1(HypParams(alpha, beta, 1.9, z)) - hyp2f1(HypParams(beta, alpha, 1.9, z))
            worst = max(worst, abs(d))
    return CheckResult("kernels/alpha-beta-symmetry", worst == 0.0, worst, 0.0)


def check_quadrature_examples() -> CheckResult:
    cases = [
        (lambda s: s, 0.0, 1.0, 0.5),
        (lambda s: s**1.5, 0.0, 1.0, 0.4),
        (lambda s: math.sin(40.0 * s), 0.0, 1.0, (1.0 - math.cos(40.0)) / 40.0),
    ]
    worst = 0.0
    bound_ok = True
    for fn, lo, hi, truth in cases:
        value, err = integrate_adaptive(fn, lo, hi, tol=1e-12)
        worst = max(worst, abs(value.real - truth))
        bound_ok = bound_ok and abs(value.real - truth) <= max(err, 1e-13)
    return CheckResult("kernels/quadrature-examples", worst <= 1e-10 and bound_ok, worst, 1e-10,
                       "error estimate bounds true error" if bound_ok else "estimate violated")


def check_root_examples() -> CheckResult:
    r1 = find_root_bracketed(lambda x: x * x - 2.0, 1.0, 2.0, 1e-13)
    r2 = find_root_bracketed(lambda x: math.tan(x) - x, math.pi, 1.5 * math.pi - 0.01, 1e-13)
    r3 = quantization_phase_root(1, 0.5)
    worst = max(
        abs(r1 - math.sqrt(2.0)),
        abs(r2 - 4.493409457909064),
        abs(r3 - eigenvalue_1d(1, 0.5)),
    )
    return CheckResult("kernels/root-examples", worst <= 1e-9, worst, 1e-9)


def check_disk_k0_equivalence() -> CheckResult:
    worst = 0.0
    for a in (0.1, 0.3, 0.5):
        vals = disk_eigenvalues(0, a, 5)
        closed = np.array([disk_eigenvalue_k0_closed(n, a) for n in range(1, 6)])
        worst = max(worst, float(np.max(np.abs(vals - closed) / closed)))
    return CheckResult("diskmodes/k0-closed-form", worst <= 1e-6, worst, 1e-6)


def check_disk_static_oracle() -> CheckResult:
    worst = 0.0
    for k in (1, 2):
        vals = disk_eigenvalues(k, 0.0, 2)
        oracle = static_disk_oracle_roots(k, 2)
        worst = max(worst, float(np.max(np.abs(vals - oracle))))
    return CheckResult("diskmodes/static-bessel-oracle", worst <= 1e-6, worst, 1e-6)


def check_frobenius_slope() -> CheckResult:
    worst = 0.0
    g = Grid(1001)
    for k, a in ((0, 0.2), (1, 0.2), (2, 0.2), (-1, 0.2)):
        lam = disk_eigenvalues(k, a, 1)[0]
        p = radial_shoot(k, lam, a, g)
        slope = float(np.polyfit(np.log(g.y[1:11]), np.log(np.abs(p.f[1:11])), 1)[0])
        worst = max(worst, abs(slope - frobenius_exponent(k)))
    return CheckResult("diskmodes/frobenius-slope", worst <= 0.05, worst, 0.05)


def check_shooting_step_halving() -> CheckResult:
    v1 = disk_eigenvalues(0, 0.3, 3)
    v2 = disk_eigenvalues(0, 0.3, 3, steps_per_lambda=90.0)
    worst = float(np.max(np.abs(v1 - v2) / np.abs(v2)))
    return CheckResult("diskmodes/step-halving", worst <= 1e-8, worst, 1e-8)


def check_radial_rhs_k0_equivalence() -> CheckResult:
    from .diskmodes import _rhs as disk_rhs

    rng = np.random.default_rng(20260810)
    worst = 0.0
    for _ in range(10000):
        y = rng.uniform(1e-3, 1.0)
        a = rng.uniform(-0.9, 0.9)
        lam = rng.uniform(-12.0, 12.0)
        if abs(lam) < 0.1:
            continue
        f = complex(rng.normal(), rng.normal())
        g = complex(rng.normal(), rng.normal())
        fp_d, gp_d = disk_rhs(0, lam, a, y, f, g)
        # the separated 1D box pair, solved for (f', g') independently
        fp_b = (1j * a * lam * y * f - lam * g) / (1.0 - (a * y) ** 2)
        gp_b = lam * f - 1j * a * y * fp_b
        worst = max(worst, abs(fp_d - fp_b), abs(gp_d - gp_b))
    return CheckResult("diskmodes/k0-equals-box-system", worst <= 1e-14, worst, 1e-14)


def check_propagator_box_oracle() -> CheckResult:
    mode = mode_1d(1, 0.5, 1.0)
    errs = []
    for npts in (257, 513, 1025):
        grid = Grid(npts)
        final, _ = evolve(box_mode_state(mode, grid, 0.0), EvolutionConfig(t_end=1.0, cfl=0.4))
        exact = box_mode_state(mode, grid, 1.0)
        errs.append(_l2_distance(final, exact.psi1, exact.psi2))
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    ok = errs[1] <= 1e-4 and all(1.9 <= o <= 2.1 for o in orders)
    return CheckResult("evolution/box-oracle-513", ok, errs[1], 1e-4,
                       f"orders {orders[0]:.3f}, {orders[1]:.3f}")


def check_propagator_disk_oracle() -> CheckResult:
    from .diskmodes import disk_mode

    errs = []
    for npts in (257, 513, 1025):
        mode = disk_mode(0, 1, 0.3, 1.0, Grid(npts))
        final, _ = evolve(disk_mode_state(mode, 0.0), EvolutionConfig(t_end=1.0, cfl=0.4))
        exact = disk_mode_state(mode, 1.0)
        errs.append(_l2_distance(final, exact.psi1, exact.psi2))
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    ok = errs[1] <= 1e-4 and all(1.9 <= o <= 2.1 for o in orders)
    return CheckResult("evolution/disk-oracle-513", ok, errs[1], 1e-4,
                       f"orders {orders[0]:.3f}, {orders[1]:.3f}")


def check_boundary_pinned() -> CheckResult:
    mode = mode_1d(1, 0.5, 1.0)
    _, traj = evolve(box_mode_state(mode, Grid(257), 0.0),
                     EvolutionConfig(t_end=0.5, cfl=0.4, record_every=20))
    worst = max(max(abs(s.psi1[0]), abs(s.psi1[-1])) for s in traj)
    return CheckResult("evolution/psi1-pinned", worst <= 1e-12, worst, 1e-12)


def check_static_unitarity() -> CheckResult:
    st = static_box_state(1, StaticLaw(1.0), Grid(401))
    final, _ = evolve(st, EvolutionConfig(t_end=1.0, cfl=0.4))
    drift = abs(norm(final) - norm(st))
    return CheckResult("evolution/static-norm-drift", drift <= 1e-8, drift, 1e-8,
                       "per unit time, grid 401, cfl 0.4")


def check_static_phase() -> CheckResult:
    st = static_box_state(1, StaticLaw(1.0), Grid(801))
    final, _ = evolve(st, EvolutionConfig(t_end=1.0, cfl=0.4))
    ph = np.exp(-1j * math.pi)
    err = _l2_distance(final, ph * st.psi1, ph * st.psi2)
    return CheckResult("evolution/static-phase", err <= 1e-5, err, 1e-5, "grid 801, t = 1")


def check_reversibility() -> CheckResult:
    st = static_box_state(1, StaticLaw(1.0), Grid(401))
    fwd, _ = evolve(st, EvolutionConfig(t_end=1.0, cfl=0.4))
    back, _ = evolve(fwd, EvolutionConfig(t_end=-1.0, cfl=0.4))
    err = _l2_distance(back, st.psi1, st.psi2)
    return CheckResult("evolution/time-reversal", err <= 1e-8, err, 1e-8)


def check_exact_mode_scaling() -> CheckResult:
    mode = mode_1d(1, 0.5, 1.0)
    grid = Grid(4097)
    ref = box_mode_state(mode, grid, 0.0)
    n0, e0 = norm(ref), energy(ref)
    worst = 0.0
    for t in (0.4, 0.8, 1.2, 1.6, 2.0):
        st = box_mode_state(mode, grid, t)
        L = st.law.position(t)
        worst = max(worst, abs(norm(st) / n0 - L / 1.0), abs(energy(st) * L / (e0 * 1.0) - 1.0))
    return CheckResult("evolution/exact-mode-scaling", worst <= 1e-6, worst, 1e-6,
                       "norm ~ L and E*L const at 5 times")


def check_fermi_eps0() -> CheckResult:
    series = run_fermi(1, BreathingLaw(1.0, 0.0, 2.0 * math.pi),
                       EvolutionConfig(t_end=10.0, cfl=0.4, record_every=200), n_points=401)
    drift = float(np.max(np.abs(series.energy - series.energy[0])) / abs(series.energy[0]))
    return CheckResult("evolution/fermi-eps0-energy-constant", drift <= 1e-6, drift, 1e-6,
                       "t_end = 10")


def check_fermi_self_convergence() -> CheckResult:
    law = BreathingLaw(1.0, 0.1, 2.0 * math.pi)
    s513 = run_fermi(1, law, EvolutionConfig(t_end=4.0, dt=0.05 / 128, record_every=128),
                     n_points=513)
    s1025 = run_fermi(1, law, EvolutionConfig(t_end=4.0, dt=0.05 / 256, record_every=256),
                      n_points=1025)
    rel = float(np.max(np.abs(s513.energy - s1025.energy) / np.abs(s1025.energy)))
    return CheckResult("evolution/fermi-self-convergence", rel <= 0.01, rel, 0.01,
                       "grids 513 vs 1025, t_end = 4")


def check_cli_round_trip() -> CheckResult:
    from .cli import example_configs, parse_args, render_args

    bad = 0
    for cfg in example_configs():
        if parse_args(render_args(cfg)) != cfg:
            bad += 1
    return CheckResult("cli/parse-render-round-trip", bad == 0, float(bad), 0.0,
                       f"{bad} mismatched command variants")


def check_cli_determinism() -> CheckResult:
    import tempfile
    from pathlib import Path

    from .cli import main

    argsets = [
        ["spectrum-1d", "--a", "0.5", "--n-max", "4"],
        ["fermi", "--l0", "1", "--eps", "0.05", "--omega", "6.2831853",
         "--n", "1", "--t-end", "0.5", "--points", "101", "--record-every", "50"],
    ]
    mismatches = 0
    with tempfile.TemporaryDirectory() as td:
        for i, args in enumerate(argsets):
            pa = Path(td) / f"a{i}.out"
            pb = Path(td) / f"b{i}.out"
            main(args + ["-o", str(pa)])
            main(args + ["-o", str(pb)])
            if pa.read_bytes() != pb.read_bytes():
                mismatches += 1
    return CheckResult("cli/byte-determinism", mismatches == 0, float(mismatches), 0.0)


ALL_CHECKS: List[Callable[[], CheckResult]] = [
    check_linear_tau_closed_form,
    check_tabulated_velocity,
    check_tau_monotone,
    check_eigenvalue_two_path,
    check_eigenvalue_limit,
    check_eigenvalue_antisymmetry,
    check_eigenmode_residual_order,
    check_eigenmode_boundary,
    check_unimodular_powers,
    check_hyp_halfgamma,
    check_hyp_binomial,
    check_hyp_symmetry,
    check_quadrature_examples,
    check_root_examples,
    check_disk_k0_equivalence,
    check_disk_static_oracle,
    check_frobenius_slope,
    check_shooting_step_halving,
    check_radial_rhs_k0_equivalence,
    check_propagator_box_oracle,
    check_propagator_disk_oracle,
    check_boundary_pinned,
    check_static_unitarity,
    check_static_phase,
    check_reversibility,
    check_exact_mode_scaling,
    check_fermi_eps0,
    check_fermi_self_convergence,
    check_cli_round_trip,
    check_cli_determinism,
]


def run_all(write=print) -> int:
    """Run every invariant check; return 0 if all pass, 1 otherwise."""
    failures = 0
    for check in ALL_CHECKS:
        try:
            result = check()
        except BilliardError as exc:
            result = CheckResult(check.__name__, False, math.nan, math.nan, f"raised {exc}")
        write(result.line())
        if not result.passed:
            failures += 1
    write(f"{len(ALL_CHECKS) - failures}/{len(ALL_CHECKS)} invariants hold")
    return 0 if failures == 0 else 1
