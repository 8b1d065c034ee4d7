"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line
and asserting at the stated tolerance.

Oracles are independent of the paths they check: bracketed root finding on
the boundary condition, closed forms, brute-force scans of the static
radial equation, grid-refinement self-convergence, and byte comparison of
repeated CLI runs.
"""

import contextlib
import io
import math

import numpy as np
import pytest
from scipy.integrate import simpson

from diracbilliards import (
    BreathingLaw,
    EvolutionConfig,
    Grid,
    HypParams,
    StaticLaw,
    box_mode_state,
    disk_eigenvalue_k0_closed,
    disk_eigenvalues,
    disk_mode,
    disk_mode_state,
    eigenmode_1d,
    eigenvalue_1d,
    energy,
    evolve,
    hyp2f1,
    hyp2f1_halfgamma_oracle,
    mode_1d,
    norm,
    run_fermi,
    static_box_state,
    system_residual_1d,
)
from diracbilliards.cli import main
from diracbilliards.verification import quantization_phase_root, static_disk_oracle_roots


def _report(num, ok, detail):
    print(f"CRITERION {num:02d} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


def l2_distance(state, psi1, psi2):
    L = state.law.position(state.t)
    d = np.abs(state.psi1 - psi1) ** 2 + np.abs(state.psi2 - psi2) ** 2
    return math.sqrt(L * simpson(d, dx=state.grid.h))


def test_criterion_01_eigenvalue_limit_and_two_path():
    a = 1e-3
    limit_dev = max(abs(eigenvalue_1d(n, a) / (math.pi * n) - 1.0) for n in range(1, 11))
    two_path = 0.0
    for aa in (0.1, 0.5, 0.9):
        for n in range(1, 11):
            lam = eigenvalue_1d(n, aa)
            two_path = max(two_path, abs(lam - quantization_phase_root(n, aa)) / lam)
    ok = limit_dev <= 1e-6 and two_path <= 1e-10
    _report(1, ok, f"small-a deviation {limit_dev:.2e} (<=1e-6); "
                   f"two-path mismatch {two_path:.2e} (<=1e-10)")


def test_criterion_02_eigenmode_residual_and_boundaries():
    mode = mode_1d(1, 0.5)
    res, bc = [], 0.0
    for npts in (129, 257, 513):
        g = Grid(npts)
        f, gg = eigenmode_1d(mode, g.y)
        res.append(system_residual_1d(mode.lam, mode.a, f, gg, g.h))
        bc = max(bc, abs(f[0]), abs(f[-1]))
    orders = [math.log2(res[i] / res[i + 1]) for i in range(2)]
    ok = all(1.9 <= o <= 2.1 for o in orders) and bc <= 1e-12
    _report(2, ok, f"residual orders {orders[0]:.3f}, {orders[1]:.3f} (2.0 +- 0.1); "
                   f"boundary values {bc:.2e} (<=1e-12)")


def test_criterion_03_hypergeometric_kernel():
    worst_half = 0.0
    for alpha in (0.3, 1.0 + 0.7j, 0.5 + 2.0j):
        for z in (-0.5, -0.1, 0.1, 0.5, 0.8):
            series = hyp2f1(HypParams(alpha, alpha + 0.5, 1.5, z * z))
            closed = hyp2f1_halfgamma_oracle(alpha, z)
            worst_half = max(worst_half, abs(series - closed) / abs(closed))
    worst_binom = 0.0
    for alpha in (0.5, 1.3, 0.5 + 2.0j):
        for beta in (0.7, 2.5):
            for z in (-0.5, -0.1, 0.1, 0.5, 0.8):
                series = hyp2f1(HypParams(alpha, beta, beta, z))
                closed = (1.0 - z) ** (-complex(alpha))
                worst_binom = max(worst_binom, abs(series - closed) / abs(closed))
    ok = worst_half <= 1e-10 and worst_binom <= 1e-10
    _report(3, ok, f"half-gamma closed form {worst_half:.2e}, "
                   f"binomial identity {worst_binom:.2e} (both <=1e-10)")


def test_criterion_04_disk_k0_spectrum():
    worst = 0.0
    for a in (0.1, 0.3, 0.5):
        vals = disk_eigenvalues(0, a, 5)
        closed = np.array([disk_eigenvalue_k0_closed(n, a) for n in range(1, 6)])
        worst = max(worst, float(np.max(np.abs(vals - closed) / closed)))
    _report(4, worst <= 1e-6, f"shooting vs closed form, worst relative {worst:.2e} (<=1e-6)")


def test_criterion_05_disk_static_oracle():
    worst = 0.0
    for k in (1, 2):
        vals = disk_eigenvalues(k, 0.0, 2)
        oracle = static_disk_oracle_roots(k, 2)
        worst = max(worst, float(np.max(np.abs(vals - oracle))))
    lam11 = static_disk_oracle_roots(1, 1)[0]
    anchor = abs(lam11 - 4.4934095)
    ok = worst <= 1e-6 and anchor <= 1e-6
    _report(5, ok, f"shooting vs brute-force roots {worst:.2e} (<=1e-6); "
                   f"tan-root anchor off by {anchor:.2e}")


def test_criterion_06_propagator_vs_closed_forms():
    mode = mode_1d(1, 0.5, 1.0)
    box_errs = []
    for npts in (257, 513, 1025):
        grid = Grid(npts)
        final, _ = evolve(box_mode_state(mode, grid, 0.0), EvolutionConfig(t_end=1.0, cfl=0.4))
        exact = box_mode_state(mode, grid, 1.0)
        box_errs.append(l2_distance(final, exact.psi1, exact.psi2))
    box_orders = [math.log2(box_errs[i] / box_errs[i + 1]) for i in range(2)]
    disk_errs = []
    for npts in (257, 513, 1025):
        dmode = disk_mode(0, 1, 0.3, 1.0, Grid(npts))
        final, _ = evolve(disk_mode_state(dmode, 0.0), EvolutionConfig(t_end=1.0, cfl=0.4))
        exact = disk_mode_state(dmode, 1.0)
        disk_errs.append(l2_distance(final, exact.psi1, exact.psi2))
    disk_orders = [math.log2(disk_errs[i] / disk_errs[i + 1]) for i in range(2)]
    ok = (box_errs[1] <= 1e-4 and disk_errs[1] <= 1e-4
          and all(o >= 1.9 for o in box_orders + disk_orders))
    _report(6, ok, f"box L2@513 {box_errs[1]:.2e}, orders {box_orders[0]:.2f}/{box_orders[1]:.2f}; "
                   f"disk L2@513 {disk_errs[1]:.2e}, orders {disk_orders[0]:.2f}/{disk_orders[1]:.2f}")


def test_criterion_07_static_sanity():
    st = static_box_state(1, StaticLaw(1.0), Grid(401))
    final, _ = evolve(st, EvolutionConfig(t_end=1.0, cfl=0.4))
    drift = abs(norm(final) - norm(st))
    back, _ = evolve(final, EvolutionConfig(t_end=-1.0, cfl=0.4))
    rev = l2_distance(back, st.psi1, st.psi2)
    st8 = static_box_state(1, StaticLaw(1.0), Grid(801))
    final8, _ = evolve(st8, EvolutionConfig(t_end=1.0, cfl=0.4))
    ph = np.exp(-1j * math.pi)
    phase_err = l2_distance(final8, ph * st8.psi1, ph * st8.psi2)
    ok = drift <= 1e-8 and phase_err <= 1e-5 and rev <= 1e-8
    _report(7, ok, f"norm drift/unit-time {drift:.2e} (<=1e-8); "
                   f"phase L2 {phase_err:.2e} (<=1e-5); reversal {rev:.2e} (<=1e-8)")


def test_criterion_08_exact_mode_scaling():
    mode = mode_1d(1, 0.5, 1.0)
    grid = Grid(4097)
    ref = box_mode_state(mode, grid, 0.0)
    n0, e0 = norm(ref), energy(ref)
    worst = 0.0
    for t in (0.4, 0.8, 1.2, 1.6, 2.0):
        st = box_mode_state(mode, grid, t)
        L = 0.5 * t + 1.0
        worst = max(worst, abs(norm(st) / (n0 * L) - 1.0), abs(energy(st) * L / e0 - 1.0))
    _report(8, worst <= 1e-6, f"norm ~ L and E*L const, worst relative {worst:.2e} (<=1e-6)")


def test_criterion_09_fermi_experiment():
    s0 = run_fermi(1, BreathingLaw(1.0, 0.0, 2.0 * math.pi),
                   EvolutionConfig(t_end=10.0, cfl=0.4, record_every=200), n_points=401)
    const = float(np.max(np.abs(s0.energy - s0.energy[0])) / abs(s0.energy[0]))
    law = BreathingLaw(1.0, 0.1, 2.0 * math.pi)
    s513 = run_fermi(1, law, EvolutionConfig(t_end=4.0, dt=0.05 / 128, record_every=128),
                     n_points=513)
    s1025 = run_fermi(1, law, EvolutionConfig(t_end=4.0, dt=0.05 / 256, record_every=256),
                      n_points=1025)
    conv = float(np.max(np.abs(s513.energy - s1025.energy) / np.abs(s1025.energy)))
    ok = const <= 1e-6 and conv <= 0.01
    _report(9, ok, f"eps=0 energy variation {const:.2e} over t_end=10 (<=1e-6); "
                   f"513 vs 1025 self-convergence {conv:.2e} (<=0.01)")


def test_criterion_10_cli_determinism(tmp_path):
    argsets = [
        ["spectrum-1d", "--a", "0.5", "--n-max", "5"],
        ["spectrum-disk", "--k", "1", "--a", "0.3", "--n-max", "2"],
        ["mode", "--system", "box", "--n", "1", "--a", "0.5", "--points", "65"],
        ["evolve", "--system", "box", "--law", "linear", "--a", "0.5", "--b", "1",
         "--initial", "exact", "--t-end", "0.3", "--points", "101"],
        ["fermi", "--l0", "1", "--eps", "0.05", "--omega", "6.2831853", "--n", "1",
         "--t-end", "0.3", "--points", "101", "--record-every", "50"],
    ]
    mismatched = []
    for i, args in enumerate(argsets):
        pa, pb = tmp_path / f"a{i}.out", tmp_path / f"b{i}.out"
        assert main(args + ["-o", str(pa)]) == 0
        assert main(args + ["-o", str(pb)]) == 0
        if pa.read_bytes() != pb.read_bytes():
            mismatched.append(args[0])
    # verify writes its report to stdout; compare two captured runs
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            rc = main(["verify"])
        assert rc == 0, "verify must exit 0 on a correct build"
        outs.append(buf.getvalue())
    if outs[0] != outs[1]:
        mismatched.append("verify")
    _report(10, not mismatched, f"byte-identical reruns for all commands "
                                f"(mismatched: {mismatched or 'none'})")
