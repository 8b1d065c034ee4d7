"""Command-line front end and deterministic CSV/JSON serialization.

Subcommands: spectrum-1d, spectrum-disk, mode, evolve, fermi, verify.
Exit codes: 0 ok, 1 verify failure, 2 usage/domain error at configuration
time, 3 numerical failure at run time, 4 I/O failure.

All numeric output is rendered to 17 significant digits (CSV) or via
shortest-round-trip floats (JSON), with LF line endings, so identical
configurations produce byte-identical files.  `--figures DIR` renders a
PNG next to the data without changing the data itself.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .boundary import BoundaryLaw, BreathingLaw, Grid, LinearLaw, StaticLaw
from .boxmodes import eigenvalue_1d, mode_1d, mode_solution_1d
from .diskmodes import disk_eigenvalues, disk_mode, mode_solution_disk, radial_shoot
from .errors import BilliardError, DomainError
from .evolution import (
    DiskRadial,
    EvolutionConfig,
    FieldState,
    ObservableSeries,
    run_fermi,
    run_observables,
    static_box_state,
    box_mode_state,
    disk_mode_state,
)


@dataclass(frozen=True)
class _Flag:
    name: str
    type: type
    default: Any = None
    required: bool = False
    choices: Optional[tuple] = None
    help: str = ""

    @property
    def key(self) -> str:
        return self.name.replace("-", "_")


_COMMON_RUN = [
    _Flag("points", int, 513, help="grid points on y in [0, 1]"),
    _Flag("dt", float, None, help="explicit time step (default: CFL-bounded)"),
    _Flag("cfl", float, 0.5, help="Courant factor for the automatic step"),
    _Flag("record-every", int, 100, help="record every Nth step"),
]

_COMMANDS: Dict[str, List[_Flag]] = {
    "spectrum-1d": [
        _Flag("a", float, required=True, help="wall rate, 0 < |a| < 1"),
        _Flag("n-max", int, 10, help="number of eigenvalues"),
    ],
    "spectrum-disk": [
        _Flag("k", int, 0, help="angular number"),
        _Flag("a", float, required=True, help="radius rate, |a| <= 0.95"),
        _Flag("n-max", int, 5, help="number of eigenvalues"),
    ],
    "mode": [
        _Flag("system", str, "box", choices=("box", "disk")),
        _Flag("n", int, 1, help="mode index"),
        _Flag("a", float, required=True, help="wall rate"),
        _Flag("b", float, 1.0, help="initial wall position"),
        _Flag("k", int, 0, help="angular number (disk only)"),
        _Flag("t", float, 0.0, help="evaluation time"),
        _Flag("points", int, 513),
    ],
    "evolve": [
        _Flag("system", str, "box", choices=("box", "disk")),
        _Flag("k", int, 0, help="angular number (disk only)"),
        _Flag("law", str, None, required=True, choices=("static", "linear", "breathing")),
        _Flag("l0", float, None, help="wall position (static/breathing laws)"),
        _Flag("a", float, None, help="wall rate (linear law)"),
        _Flag("b", float, None, help="initial wall position (linear law)"),
        _Flag("eps", float, None, help="relative amplitude (breathing law)"),
        _Flag("omega", float, None, help="angular frequency (breathing law)"),
        _Flag("n", int, 1, help="initial mode index"),
        _Flag("initial", str, "static", choices=("static", "exact"),
              help="initial state: instantaneous static mode or exact comoving mode"),
        _Flag("t-end", float, required=True),
    ] + _COMMON_RUN,
    "fermi": [
        _Flag("l0", float, required=True, help="mean wall position"),
        _Flag("eps", float, required=True, help="relative drive amplitude"),
        _Flag("omega", float, required=True, help="drive angular frequency"),
        _Flag("n", int, 1, help="initial static mode index"),
        _Flag("t-end", float, required=True),
    ] + _COMMON_RUN,
    "verify": [],
}

_DEFAULT_FORMAT = {
    "spectrum-1d": "json",
    "spectrum-disk": "json",
    "mode": "csv",
    "evolve": "csv",
    "fermi": "csv",
    "verify": "json",
}


@dataclass
class RunConfig:
    command: str
    params: Dict[str, Any] = field(default_factory=dict)
    output: Optional[str] = None
    fmt: str = "json"
    figures: Optional[str] = None


def _g17(x: float) -> str:
    return format(float(x), ".17g")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diracbilliards",
        description="Moving-wall relativistic billiards: spectra, modes and propagation",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, flags in _COMMANDS.items():
        p = sub.add_parser(cmd)
        for fl in flags:
            p.add_argument(f"--{fl.name}", type=fl.type, default=None,
                           choices=fl.choices, help=fl.help)
        p.add_argument("--config", type=str, default=None,
                       help="JSON file with flag values (explicit flags win)")
        p.add_argument("-o", "--output", type=str, default=None,
                       help="output file (default: stdout)")
        p.add_argument("--format", type=str, default=None, choices=("csv", "json"))
        p.add_argument("--figures", type=str, default=None,
                       help="directory for PNG figures rendered next to the data")
    return parser


def _load_config_file(parser, path: str, flags: List[_Flag]) -> Dict[str, Any]:
    known = {fl.key: fl for fl in flags}
    meta = {"output", "format", "figures"}
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        parser.error(f"--config: cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        parser.error(f"--config: invalid JSON in {path}: {exc}")
    if not isinstance(raw, dict):
        parser.error(f"--config: {path} must hold a JSON object")
    merged: Dict[str, Any] = {}
    for key, value in raw.items():
        norm_key = str(key).replace("-", "_")
        if norm_key in meta:
            merged[norm_key] = value
        elif norm_key in known:
            fl = known[norm_key]
            try:
                merged[norm_key] = fl.type(value) if value is not None else None
            except (TypeError, ValueError):
                parser.error(f"--config: key {key!r} is not a valid {fl.type.__name__}")
            if fl.choices and merged[norm_key] not in fl.choices:
                parser.error(f"--config: key {key!r} must be one of {fl.choices}")
        else:
            parser.error(f"--config: unknown key {key!r}")
    return merged


def _validate(parser, command: str, p: Dict[str, Any]):
    def bad(flag: str, msg: str):
        parser.error(f"--{flag}: {msg}")

    def need(flag: str):
        if p.get(flag.replace("-", "_")) is None:
            bad(flag, f"required for `{command}`")

    if command == "spectrum-1d":
        if not 0.0 < abs(p["a"]) < 1.0:
            bad("a", f"requires 0 < |a| < 1, got {p['a']}")
        if p["n_max"] < 1:
            bad("n-max", "must be >= 1")
    elif command == "spectrum-disk":
        if abs(p["a"]) > 0.95:
            bad("a", f"requires |a| <= 0.95, got {p['a']}")
        if p["n_max"] < 1:
            bad("n-max", "must be >= 1")
    elif command == "mode":
        if p["system"] == "box":
            if not 0.0 < abs(p["a"]) < 1.0:
                bad("a", f"requires 0 < |a| < 1 for the box, got {p['a']}")
            if p["n"] == 0:
                bad("n", "must be a nonzero integer")
        else:
            if abs(p["a"]) > 0.95:
                bad("a", f"requires |a| <= 0.95 for the disk, got {p['a']}")
            if p["n"] < 1:
                bad("n", "must be >= 1 for the disk")
        if p["b"] <= 0:
            bad("b", "must be positive")
        if p["t"] < 0:
            bad("t", "must be >= 0")
        if p["points"] < 3:
            bad("points", "must be >= 3")
    elif command in ("evolve", "fermi"):
        if command == "evolve":
            law = p["law"]
            if law == "static":
                need("l0")
                if p["l0"] is not None and p["l0"] <= 0:
                    bad("l0", "must be positive")
            elif law == "linear":
                need("a")
                need("b")
                if p["a"] is not None and abs(p["a"]) >= 1.0:
                    bad("a", f"requires |a| < 1, got {p['a']}")
                if p["b"] is not None and p["b"] <= 0:
                    bad("b", "must be positive")
            else:
                for fl in ("l0", "eps", "omega"):
                    need(fl)
                if p["l0"] is not None and p["l0"] <= 0:
                    bad("l0", "must be positive")
                if p["eps"] is not None and abs(p["eps"]) >= 1.0:
                    bad("eps", f"requires |eps| < 1, got {p['eps']}")
                if None not in (p["l0"], p["eps"], p["omega"]):
                    if abs(p["l0"] * p["eps"] * p["omega"]) >= 1.0:
                        bad("omega", "peak wall speed |l0*eps*omega| must be < 1")
            if p["initial"] == "exact":
                if law != "linear":
                    bad("initial", "exact comoving modes exist only for the linear law")
                if p["system"] == "box" and p["a"] == 0.0:
                    bad("a", "the exact box mode needs a != 0")
            if p["system"] == "box" and p["n"] < 1 and p["initial"] == "static":
                bad("n", "static initial mode index must be >= 1")
        else:
            if p["l0"] <= 0:
                bad("l0", "must be positive")
            if abs(p["eps"]) >= 1.0:
                bad("eps", f"requires |eps| < 1, got {p['eps']}")
            if abs(p["l0"] * p["eps"] * p["omega"]) >= 1.0:
                bad("omega", "peak wall speed |l0*eps*omega| must be < 1")
            if p["n"] < 1:
                bad("n", "must be >= 1")
        if p["t_end"] <= 0:
            bad("t-end", "must be positive")
        if p["points"] < 3:
            bad("points", "must be >= 3")
        if p["dt"] is not None and p["dt"] <= 0:
            bad("dt", "must be positive")
        if not 0.0 < p["cfl"] <= 0.5:
            bad("cfl", f"requires 0 < cfl <= 0.5, got {p['cfl']}")
        if p["record_every"] < 1:
            bad("record-every", "must be >= 1")


def parse_args(argv: Sequence[str]) -> RunConfig:
    """Parse argv into a RunConfig; exits with code 2 on any usage error."""
    parser = _build_parser()
    ns = parser.parse_args(list(argv))
    command = ns.command
    flags = _COMMANDS[command]
    from_file = _load_config_file(parser, ns.config, flags) if ns.config else {}
    params: Dict[str, Any] = {}
    for fl in flags:
        value = getattr(ns, fl.key)
        if value is None:
            value = from_file.get(fl.key, fl.default)
        params[fl.key] = value
        if fl.required and value is None:
            parser.error(f"--{fl.name}: required for `{command}`")
    _validate(parser, command, params)
    fmt = ns.format or from_file.get("format") or _DEFAULT_FORMAT[command]
    if fmt not in ("csv", "json"):
        parser.error(f"--format: must be csv or json, got {fmt!r}")
    output = ns.output if ns.output is not None else from_file.get("output")
    figures = ns.figures if ns.figures is not None else from_file.get("figures")
    return RunConfig(command=command, params=params, output=output, fmt=fmt, figures=figures)


def render_args(config: RunConfig) -> List[str]:
    """Canonical argv for a config; parse_args(render_args(c)) == c."""
    argv = [config.command]
    for fl in _COMMANDS[config.command]:
        value = config.params.get(fl.key)
        if value is None:
            continue
        argv.append(f"--{fl.name}")
        argv.append(repr(value) if isinstance(value, float) else str(value))
    if config.output is not None:
        argv += ["-o", config.output]
    argv += ["--format", config.fmt]
    if config.figures is not None:
        argv += ["--figures", config.figures]
    return argv


def example_configs() -> List[RunConfig]:
    """One parsed representative per command variant (round-trip tests)."""
    argsets = [
        ["spectrum-1d", "--a", "0.5", "--n-max", "3"],
        ["spectrum-disk", "--k", "1", "--a", "0.3", "--n-max", "2"],
        ["mode", "--system", "box", "--n", "2", "--a", "-0.4", "--b", "2.0", "--t", "0.5"],
        ["mode", "--system", "disk", "--n", "1", "--a", "0.3", "--k", "1"],
        ["evolve", "--system", "box", "--law", "static", "--l0", "1.0",
         "--n", "1", "--t-end", "0.25", "--points", "101"],
        ["evolve", "--system", "box", "--law", "linear", "--a", "0.5", "--b", "1.0",
         "--initial", "exact", "--t-end", "0.5", "--dt", "0.001"],
        ["evolve", "--system", "disk", "--k", "0", "--law", "breathing", "--l0", "1.0",
         "--eps", "0.05", "--omega", "3.0", "--t-end", "0.5"],
        ["fermi", "--l0", "1", "--eps", "0.1", "--omega", "6.2831853",
         "--n", "1", "--t-end", "2.0", "-o", "series.csv", "--figures", "figs"],
        ["verify"],
    ]
    return [parse_args(a) for a in argsets]


# ---------------------------------------------------------------------------
# serialization


def render_series_csv(series: ObservableSeries) -> str:
    if len(series) == 0:
        raise DomainError("refusing to write an empty series")
    lines = ["t,L,norm,energy"]
    for t, L, n, e in series.rows():
        lines.append(",".join(_g17(x) for x in (t, L, n, e)))
    return "\n".join(lines) + "\n"


def render_series_json(series: ObservableSeries) -> str:
    if len(series) == 0:
        raise DomainError("refusing to write an empty series")
    samples = [
        {"t": float(t), "L": float(L), "norm": float(n), "energy": float(e)}
        for t, L, n, e in series.rows()
    ]
    return json.dumps({"samples": samples}, separators=(",", ":")) + "\n"


def write_series(series: ObservableSeries, path: Optional[str], fmt: str):
    text = render_series_csv(series) if fmt == "csv" else render_series_json(series)
    _write_text(text, path)


def _write_text(text: str, path: Optional[str]):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_bytes(text.encode("utf-8"))


def _spectrum_payload(config: RunConfig):
    p = config.params
    if config.command == "spectrum-1d":
        values = [eigenvalue_1d(n, p["a"]) for n in range(1, p["n_max"] + 1)]
        if config.fmt == "json":
            text = json.dumps(
                {"case": "box1d", "a": p["a"], "eigenvalues": values},
                separators=(",", ":"),
            ) + "\n"
        else:
            lines = ["n,lambda"] + [f"{n},{_g17(v)}" for n, v in enumerate(values, 1)]
            text = "\n".join(lines) + "\n"
        title = f"box spectrum, a = {p['a']:g}"
    else:
        values, residuals = disk_eigenvalues(p["k"], p["a"], p["n_max"], return_residuals=True)
        values = [float(v) for v in values]
        residuals = [float(r) for r in residuals]
        payload = {"case": "disk", "k": p["k"], "a": p["a"],
                   "eigenvalues": values, "residuals": residuals}
        if p["k"] < 0:
            # no closed-form check exists for the mirrored Frobenius branch
            payload["numerically_defined"] = True
        if config.fmt == "json":
            text = json.dumps(payload, separators=(",", ":")) + "\n"
        else:
            lines = ["n,lambda,residual"] + [
                f"{n},{_g17(v)},{_g17(r)}"
                for n, (v, r) in enumerate(zip(values, residuals), 1)
            ]
            text = "\n".join(lines) + "\n"
        title = f"disk spectrum, k = {p['k']}, a = {p['a']:g}"
    return text, values, title


def _mode_payload(config: RunConfig):
    p = config.params
    grid = Grid(p["points"])
    if p["system"] == "box":
        mode = mode_1d(p["n"], p["a"], p["b"])
        L = mode.a * p["t"] + mode.b
        psi1, psi2 = mode_solution_1d(mode, p["t"], grid.y * L)
        lam = mode.lam
    else:
        mode = disk_mode(p["k"], p["n"], p["a"], p["b"], grid)
        r0 = mode.a * p["t"] + mode.b
        psi1, psi2 = mode_solution_disk(mode, p["t"], grid.y * r0)
        lam = mode.lam
    header = "y,re_psi1,im_psi1,re_psi2,im_psi2"
    if config.fmt == "csv":
        lines = [header]
        for y, u, v in zip(grid.y, psi1, psi2):
            lines.append(",".join(_g17(x) for x in (y, u.real, u.imag, v.real, v.imag)))
        text = "\n".join(lines) + "\n"
    else:
        samples = [
            {"y": float(y), "re_psi1": u.real, "im_psi1": u.imag,
             "re_psi2": v.real, "im_psi2": v.imag}
            for y, u, v in zip(grid.y, psi1, psi2)
        ]
        text = json.dumps(
            {"case": "mode", "system": p["system"], "n": p["n"], "k": p["k"],
             "a": p["a"], "b": p["b"], "t": p["t"], "lambda": lam, "samples": samples},
            separators=(",", ":"),
        ) + "\n"
    title = f"{p['system']} mode n = {p['n']}, a = {p['a']:g}, t = {p['t']:g}"
    return text, grid.y, np.asarray(psi1), np.asarray(psi2), title


def _build_law(p: Dict[str, Any]) -> BoundaryLaw:
    if p["law"] == "static":
        return StaticLaw(p["l0"])
    if p["law"] == "linear":
        return LinearLaw(p["a"], p["b"])
    return BreathingLaw(p["l0"], p["eps"], p["omega"])


def _evolve_series(config: RunConfig) -> ObservableSeries:
    p = config.params
    law = _build_law(p)
    grid = Grid(p["points"])
    cfg = EvolutionConfig(t_end=p["t_end"], dt=p["dt"], cfl=p["cfl"],
                          record_every=p["record_every"])
    if p["system"] == "box":
        if p["initial"] == "exact":
            initial = box_mode_state(mode_1d(p["n"], p["a"], p["b"]), grid)
        else:
            initial = static_box_state(p["n"], law, grid)
    else:
        if p["initial"] == "exact":
            initial = disk_mode_state(disk_mode(p["k"], p["n"], p["a"], p["b"], grid))
        else:
            frozen = disk_mode(p["k"], p["n"], 0.0, law.position(0.0), grid)
            initial = FieldState(t=0.0, grid=grid,
                                 psi1=frozen.profile.f.astype(complex),
                                 psi2=frozen.profile.g.astype(complex),
                                 law=law, geometry=DiskRadial(p["k"]))
            initial.psi1[0] = 0.0
            initial.psi1[-1] = 0.0
    initial.law = law
    return run_observables(initial, cfg)


def run(config: RunConfig) -> int:
    """Execute a parsed configuration; returns the process exit code."""
    try:
        if config.command == "verify":
            from .verification import run_all

            return run_all()
        figures_dir = Path(config.figures) if config.figures else None
        if figures_dir is not None:
            figures_dir.mkdir(parents=True, exist_ok=True)
        stem = Path(config.output).stem if config.output else config.command
        if config.command in ("spectrum-1d", "spectrum-disk"):
            text, values, title = _spectrum_payload(config)
            _write_text(text, config.output)
            if figures_dir is not None:
                from .plots import save_spectrum_figure

                save_spectrum_figure(values, figures_dir / f"{stem}_spectrum.png", title)
        elif config.command == "mode":
            text, y, psi1, psi2, title = _mode_payload(config)
            _write_text(text, config.output)
            if figures_dir is not None:
                from .plots import save_mode_figure

                save_mode_figure(y, psi1, psi2, figures_dir / f"{stem}_profile.png", title)
        elif config.command == "evolve":
            series = _evolve_series(config)
            write_series(series, config.output, config.fmt)
            if figures_dir is not None:
                from .plots import save_series_figure

                save_series_figure(series, figures_dir / f"{stem}_series.png",
                                   f"evolution, {config.params['law']} law")
        elif config.command == "fermi":
            p = config.params
            law = BreathingLaw(p["l0"], p["eps"], p["omega"])
            cfg = EvolutionConfig(t_end=p["t_end"], dt=p["dt"], cfl=p["cfl"],
                                  record_every=p["record_every"])
            series = run_fermi(p["n"], law, cfg, n_points=p["points"])
            write_series(series, config.output, config.fmt)
            if figures_dir is not None:
                from .plots import save_series_figure

                save_series_figure(
                    series, figures_dir / f"{stem}_series.png",
                    f"driven box, eps = {p['eps']:g}, omega = {p['omega']:g}")
        else:
            raise DomainError(f"unknown command {config.command!r}")
        return 0
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    except BilliardError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = parse_args(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
