import json
import math

import numpy as np
import pytest

from diracbilliards import ObservableSeries
from diracbilliards.cli import (
    RunConfig,
    example_configs,
    main,
    parse_args,
    render_args,
    render_series_csv,
    render_series_json,
)
from diracbilliards.errors import DomainError


def test_parse_spectrum_1d():
    cfg = parse_args(["spectrum-1d", "--a", "0.5", "--n-max", "10"])
    assert cfg.command == "spectrum-1d"
    assert cfg.params == {"a": 0.5, "n_max": 10}
    assert cfg.fmt == "json"
    assert cfg.output is None


def test_parse_fermi_example():
    cfg = parse_args(["fermi", "--l0", "1", "--eps", "0.1", "--omega", "6.2831853",
                      "--n", "1", "--t-end", "50"])
    assert cfg.command == "fermi"
    assert cfg.params["l0"] == 1.0
    assert cfg.params["eps"] == 0.1
    assert cfg.params["omega"] == 6.2831853
    assert cfg.params["t_end"] == 50.0
    assert cfg.fmt == "csv"


def test_usage_errors_exit_2(capsys):
    assert main(["spectrum-1d", "--a", "1.5"]) == 2
    err = capsys.readouterr().err
    assert "--a" in err and "|a| < 1" in err
    assert main(["spectrum-1d"]) == 2  # missing required flag
    assert main(["spectrum-1d", "--a", "0.5", "--zzz", "1"]) == 2
    assert main(["bogus-command"]) == 2
    assert main(["evolve", "--system", "box", "--law", "linear", "--b", "1",
                 "--t-end", "1"]) == 2  # linear law needs --a


def test_config_file_merge(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"a": 0.3, "n-max": 2}))
    cfg = parse_args(["spectrum-1d", "--config", str(p)])
    assert cfg.params == {"a": 0.3, "n_max": 2}
    # explicit flags win over the file
    cfg = parse_args(["spectrum-1d", "--config", str(p), "--a", "0.5"])
    assert cfg.params["a"] == 0.5
    p.write_text(json.dumps({"unknown-key": 1}))
    assert main(["spectrum-1d", "--a", "0.5", "--config", str(p)]) == 2


def test_round_trip_all_variants():
    for cfg in example_configs():
        assert parse_args(render_args(cfg)) == cfg


def test_series_csv_format_contract():
    series = ObservableSeries(t=np.array([0.0]), L=np.array([1.0]),
                              norm=np.array([1.0]), energy=np.array([math.pi]))
    assert render_series_csv(series) == "t,L,norm,energy\n0,1,1,3.1415926535897931\n"
    payload = json.loads(render_series_json(series))
    assert payload == {"samples": [{"t": 0.0, "L": 1.0, "norm": 1.0, "energy": math.pi}]}


def test_empty_series_refused():
    series = ObservableSeries(t=np.array([]), L=np.array([]),
                              norm=np.array([]), energy=np.array([]))
    with pytest.raises(DomainError):
        render_series_csv(series)


def test_spectrum_1d_payload(tmp_path, capsys):
    assert main(["spectrum-1d", "--a", "0.5", "--n-max", "3"]) == 0
    payload = json.loads(capsys.readouterr().out)
    lam1 = math.pi / math.log(3.0)
    assert payload["case"] == "box1d"
    assert payload["a"] == 0.5
    assert payload["eigenvalues"] == pytest.approx([lam1, 2 * lam1, 3 * lam1], rel=1e-12)


def test_spectrum_disk_negative_k_flagged(tmp_path):
    out = tmp_path / "s.json"
    assert main(["spectrum-disk", "--k", "-1", "--a", "0.2", "--n-max", "1",
                 "-o", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["numerically_defined"] is True
    assert len(payload["eigenvalues"]) == 1
    assert payload["residuals"][0] <= 1e-8


def test_mode_csv_columns(tmp_path):
    out = tmp_path / "m.csv"
    assert main(["mode", "--system", "box", "--n", "1", "--a", "0.5",
                 "--points", "9", "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "y,re_psi1,im_psi1,re_psi2,im_psi2"
    assert len(lines) == 10
    first = lines[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[1]) == 0.0 and float(first[2]) == 0.0  # psi1(0) = 0


def test_evolve_cfl_violation_exit_3(capsys):
    rc = main(["evolve", "--system", "box", "--law", "linear", "--a", "0.5",
               "--b", "1", "--initial", "exact", "--t-end", "0.5",
               "--points", "101", "--dt", "0.1"])
    assert rc == 3
    assert "StabilityError" in capsys.readouterr().err


@pytest.mark.parametrize(
    "args",
    [
        ["spectrum-1d", "--a", "0.5", "--n-max", "4"],
        ["spectrum-disk", "--k", "0", "--a", "0.3", "--n-max", "2"],
        ["mode", "--system", "box", "--n", "1", "--a", "0.5", "--points", "33"],
        ["evolve", "--system", "box", "--law", "static", "--l0", "1", "--n", "1",
         "--t-end", "0.2", "--points", "101"],
        ["fermi", "--l0", "1", "--eps", "0.05", "--omega", "6.2831853", "--n", "1",
         "--t-end", "0.2", "--points", "101", "--record-every", "50"],
    ],
)
def test_byte_determinism(tmp_path, args):
    pa, pb = tmp_path / "a.out", tmp_path / "b.out"
    assert main(args + ["-o", str(pa)]) == 0
    assert main(args + ["-o", str(pb)]) == 0
    assert pa.read_bytes() == pb.read_bytes()


def test_figures_rendered(tmp_path):
    figs = tmp_path / "figs"
    assert main(["spectrum-1d", "--a", "0.5", "--n-max", "3",
                 "-o", str(tmp_path / "s.json"), "--figures", str(figs)]) == 0
    assert (figs / "s_spectrum.png").exists()
    assert main(["fermi", "--l0", "1", "--eps", "0.05", "--omega", "6.2831853",
                 "--n", "1", "--t-end", "0.2", "--points", "101",
                 "--record-every", "100", "-o", str(tmp_path / "f.csv"),
                 "--figures", str(figs)]) == 0
    assert (figs / "f_series.png").exists()
    assert main(["mode", "--system", "box", "--n", "1", "--a", "0.5", "--points", "33",
                 "-o", str(tmp_path / "m.csv"), "--figures", str(figs)]) == 0
    assert (figs / "m_profile.png").exists()


def test_output_write_failure_exit_4(tmp_path):
    target = tmp_path / "no" / "such" / "dir" / "out.json"
    assert main(["spectrum-1d", "--a", "0.5", "-o", str(target)]) == 4
