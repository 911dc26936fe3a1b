"""Scenario parsing, CLI exit codes and CSV output."""
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from photonmix import csvio
from photonmix.aperture import Point, Window
from photonmix.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, main
from photonmix.config import SCAN_DEFAULTS, loads_scenario
from photonmix.errors import ConfigError
from photonmix.modes import TransverseMode, eval_mode
from photonmix.quantum import BeamSplitter, LOState

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def write(tmp_path, text, name="scenario.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def run_cli(*argv):
    return main(list(argv))


def read_csv(path):
    meta, header, rows = csvio.parse(Path(path).read_text())
    return meta, header, np.array(rows, dtype=float)


# --- config -----------------------------------------------------------------

def test_minimal_config_defaults():
    sc = loads_scenario("lo_state.kind = fock\n")
    assert sc.lo_state == LOState.fock(1)
    assert sc.lo_mode == TransverseMode() and sc.photon_mode == TransverseMode()
    assert sc.symmetric_bs
    assert sc.detector1 == Point(0.5, 0.0) and sc.detector2 == Point(0.0, 0.0)
    assert (sc.eta, sc.dS, sc.eps, sc.seed) == (1.0, 1.0, 1.0, 0)
    assert sc.scan is None
    assert sc.scan_for("x_d").count == SCAN_DEFAULTS["x_d"][2]


def test_window_detector_defaults_follow_lo_waist():
    sc = loads_scenario("lo_state.kind = fock\nlo_mode.waist = 2\ndetector1.kind = window\n")
    assert sc.detector1 == Window(0.0, 0.0, 10.0, 12.0)


def test_comments_and_complex_values():
    sc = loads_scenario("# header\nlo_state.kind = coherent  # trailing\nlo_state.alpha = 1+2i\n")
    assert sc.lo_state.alpha == 1 + 2j


def test_custom_beam_splitter():
    text = ("lo_state.kind = fock\nbeam_splitter.preset = custom\n"
            "beam_splitter.s11 = 0.6\nbeam_splitter.s12 = 0.8\n"
            "beam_splitter.s21 = 0.8\nbeam_splitter.s22 = -0.6\n")
    sc = loads_scenario(text)
    assert sc.beam_splitter == BeamSplitter(0.6, 0.8, 0.8, -0.6)
    assert not sc.symmetric_bs


@pytest.mark.parametrize("text, key, line", [
    ("lo_state.kind = fock\nlo_state.colour = red\n", "lo_state.colour", 2),
    ("lo_state.kind = fock\nlo_state.kind = fock\n", "lo_state.kind", 2),
    ("lo_state.kind = squeezed\n", "lo_state.kind", 1),
    ("lo_state.kind = fock\nlo_state.n = 1.5\n", "lo_state.n", 2),
    ("lo_state.kind = fock\n\nscan.parameter = x2\nscan.count = 0\n", "scan.count", 4),
    ("lo_state.kind = fock\nseed = \n", "seed", 2),
])
def test_parse_errors_name_line_and_key(text, key, line):
    with pytest.raises(ConfigError) as info:
        loads_scenario(text)
    assert info.value.key == key and info.value.line == line
    assert f"line {line}" in str(info.value) and key in str(info.value)


def test_missing_equals_sign():
    with pytest.raises(ConfigError, match="line 2"):
        loads_scenario("lo_state.kind = fock\njust words\n")


@pytest.mark.parametrize("text, key", [
    ("photon_mode.order_x = 1\n", "lo_state.kind"),
    ("lo_state.kind = fock\nlo_state.n = -1\n", "lo_state"),
    ("lo_state.kind = fock\nlo_state.alpha = 1\n", "lo_state.alpha"),
    ("lo_state.kind = fock\nlo_mode.waist = 0\n", "lo_mode"),
    ("lo_state.kind = fock\nunits.eta = 1.5\n", "units.eta"),
    ("lo_state.kind = fock\nbeam_splitter.preset = custom\nbeam_splitter.s11 = 1\n", "beam_splitter.s12"),
    ("lo_state.kind = fock\ndetector1.half_width_x = 3\n", "detector1.half_width_x"),
    ("lo_state.kind = fock\nnoise.kind = gaussian\nnoise.sigma = -1\n", "noise"),
    ("lo_state.kind = fock\nscan.parameter = x2\nscan.start = 2\nscan.stop = 1\n", "scan.stop"),
    ("lo_state.kind = fock\nquadrature.order = 1\n", "quadrature.order"),
])
def test_semantic_errors_name_key(text, key):
    with pytest.raises(ConfigError) as info:
        loads_scenario(text)
    assert info.value.key == key


def test_non_unitary_beam_splitter_rejected():
    text = ("lo_state.kind = fock\nbeam_splitter.preset = custom\n"
            "beam_splitter.s11 = 1\nbeam_splitter.s12 = 1\n"
            "beam_splitter.s21 = 1\nbeam_splitter.s22 = 1\n")
    with pytest.raises(ConfigError, match="unitarity"):
        loads_scenario(text)


def test_scan_parameter_must_match_command():
    sc = loads_scenario("lo_state.kind = fock\nscan.parameter = x2\n")
    with pytest.raises(ConfigError, match="scan.parameter"):
        sc.scan_for("x_d")


# --- CLI ---------------------------------------------------------------------

def test_exit_code_config_error(tmp_path, capsys):
    cfg = write(tmp_path, "lo_state.kind = fock\nscan.parameter = x2\nscan.count = 0\n")
    assert run_cli("point-scan", "--config", cfg) == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "line 3" in err and "scan.count" in err


def test_exit_code_missing_file(tmp_path):
    assert run_cli("point-scan", "--config", str(tmp_path / "absent.cfg")) == EXIT_CONFIG


def test_exit_code_numerical_error(tmp_path, capsys):
    # vacuum LO: plateau and dip are both zero, so visibility is 0/0
    cfg = write(tmp_path, "lo_state.kind = fock\nlo_state.n = 0\n")
    assert run_cli("visibility", "--config", cfg) == EXIT_NUMERIC
    assert "numerical error" in capsys.readouterr().err


def test_reference_on_lo_node_is_a_parameter_error(tmp_path):
    cfg = write(tmp_path, "lo_state.kind = coherent\nlo_mode.order_x = 1\ndetector1.x = 0\n")
    assert run_cli("array", "--config", cfg) == EXIT_CONFIG


def test_integrated_commands_need_symmetric_splitter(tmp_path):
    cfg = write(tmp_path, "lo_state.kind = fock\nbeam_splitter.preset = custom\n"
                          "beam_splitter.s11 = 0.6\nbeam_splitter.s12 = 0.8\n"
                          "beam_splitter.s21 = 0.8\nbeam_splitter.s22 = -0.6\n")
    assert run_cli("misalignment", "--config", cfg) == EXIT_CONFIG


def test_point_scan_columns(tmp_path):
    out = tmp_path / "p.csv"
    assert run_cli("point-scan", "--config", str(SCENARIOS / "point_scan.cfg"), "--out", str(out)) == EXIT_OK
    meta, header, data = read_csv(out)
    assert header == ["x2", "lo_term", "het_term", "total"]
    assert meta["lo_state"] == "fock(1)" and meta["photon_mode"] == "TEM10"
    assert data.shape == (161, 4)
    np.testing.assert_allclose(data[:, 3], data[:, 1] + data[:, 2], rtol=0, atol=1e-15)
    # Fock(1): <n(n-1)> = 0, so the LO term vanishes
    assert np.all(data[:, 1] == 0)
    # het term vanishes where the two points coincide
    i = int(np.argmin(np.abs(data[:, 0] - 0.5)))
    assert data[i, 0] == pytest.approx(0.5) and abs(data[i, 2]) <= 1e-12


def test_point_scan_general_splitter_runs(tmp_path):
    cfg = write(tmp_path, "lo_state.kind = coherent\nbeam_splitter.preset = custom\n"
                          "beam_splitter.s11 = 0.6\nbeam_splitter.s12 = 0.8\n"
                          "beam_splitter.s21 = 0.8\nbeam_splitter.s22 = -0.6\n"
                          "scan.parameter = x2\nscan.count = 5\n")
    out = tmp_path / "g.csv"
    assert run_cli("point-scan", "--config", cfg, "--out", str(out)) == EXIT_OK
    assert read_csv(out)[2].shape == (5, 4)


def test_visibility_fock_row(tmp_path):
    cfg = write(tmp_path, "lo_state.kind = fock\nlo_state.n = 1\n")
    out = tmp_path / "v.csv"
    assert run_cli("visibility", "--config", cfg, "--out", str(out)) == EXIT_OK
    _, header, data = read_csv(out)
    assert header == ["alpha2", "visibility", "depth"]
    assert data.shape == (1, 3)
    assert data[0, 0] == 1.0 and data[0, 1] == pytest.approx(1.0, abs=1e-9)


def test_visibility_window_too_small(tmp_path):
    cfg = write(tmp_path, "lo_state.kind = coherent\ndetector1.kind = window\ndetector1.half_width_x = 5\n")
    assert run_cli("visibility", "--config", cfg) == EXIT_CONFIG


def test_array_reconstruct_round_trip(tmp_path):
    arr = tmp_path / "array.csv"
    rec = tmp_path / "rec.csv"
    assert run_cli("array", "--config", str(SCENARIOS / "array_tem10.cfg"), "--out", str(arr)) == EXIT_OK
    assert run_cli("reconstruct", "--config", str(SCENARIOS / "reconstruct_tem10.cfg"),
                   "--measurement", str(arr), "--out", str(rec)) == EXIT_OK
    meta, header, data = read_csv(rec)
    assert header == ["x_m", "y_m", "u_ph_est"]
    assert float(meta["residual"]) <= 1e-12
    truth = eval_mode(TransverseMode(1, 0), data[:, 0], data[:, 1])
    assert np.max(np.abs(data[:, 2] - truth)) <= 1e-6


def test_seed_override_changes_noisy_output(tmp_path):
    cfg = write(tmp_path, "lo_state.kind = coherent\nphoton_mode.order_x = 1\n"
                          "noise.kind = gaussian\nnoise.sigma = 0.05\n")
    outs = []
    for seed in ("1", "1", "2"):
        out = tmp_path / f"a{len(outs)}.csv"
        assert run_cli("array", "--config", cfg, "--seed", seed, "--out", str(out)) == EXIT_OK
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] and outs[0] != outs[2]


def test_stdout_matches_out_file(tmp_path, capsys):
    cfg = str(SCENARIOS / "point_scan.cfg")
    out = tmp_path / "p.csv"
    run_cli("point-scan", "--config", cfg)
    printed = capsys.readouterr().out
    run_cli("point-scan", "--config", cfg, "--out", str(out))
    assert printed == out.read_text()


def test_console_module_entry_point(tmp_path):
    out = tmp_path / "p.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "photonmix.cli", "point-scan", "--config",
         str(SCENARIOS / "point_scan.cfg"), "--out", str(out)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert out.read_text().startswith("# command = point-scan")
