import hashlib
import json
from pathlib import Path

import pytest

from lvfronts.cli import main

TINY_CONFIG = """
[model]
d = 1
r = 1
a = 2
b = 3

[grid]
x_min = -30
x_max = 30
n = 601

[ic]
scenario = compact-u
u_support = -6, 6
taper = 1.5
v_background = 1.0

[analysis]
t_end = 20
output_every = 4
window_start = 10
window_end = 20
ops = track-front, speed

[output]
dir = out
"""


@pytest.fixture()
def tiny_config(tmp_path):
    p = tmp_path / "tiny.ini"
    p.write_text(TINY_CONFIG)
    return p


def test_simulate_writes_artifacts_and_manifest(tiny_config, tmp_path):
    out = tmp_path / "run"
    code = main(["simulate", "--config", str(tiny_config),
                 "--out", str(out)])
    assert code == 0
    manifest = json.loads((out / "manifest.json").read_text())
    # every emitted data file is listed with a correct checksum
    data_files = {f.name for f in out.iterdir() if f.name != "manifest.json"}
    assert set(manifest["files"]) == data_files
    for name, digest in manifest["files"].items():
        actual = hashlib.sha256((out / name).read_bytes()).hexdigest()
        assert actual == digest
    assert manifest["errors"] == []
    # CSV basics: header row, '.' decimals, newline-terminated
    text = (out / "front_u.csv").read_text()
    assert text.splitlines()[0] == "t,position"
    assert text.endswith("\n")
    assert "," in text and ";" not in text


def test_simulate_deterministic(tiny_config, tmp_path):
    m = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main(["simulate", "--config", str(tiny_config),
                     "--out", str(out)]) == 0
        m.append(json.loads((out / "manifest.json").read_text())["files"])
    assert m[0] == m[1]


def test_config_error_exit_code(tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text(TINY_CONFIG.replace("d = 1", "d = -1"))
    assert main(["simulate", "--config", str(bad),
                 "--out", str(tmp_path / "x")]) == 1
    assert main(["simulate", "--config", str(tmp_path / "missing.ini"),
                 "--out", str(tmp_path / "x")]) == 1
    assert main(["sweep", "--config", str(tmp_path / "bad.ini"),
                 "--out", str(tmp_path / "x")]) == 1   # no --vary


def test_unknown_key_rejected(tmp_path):
    bad = tmp_path / "bad.ini"
    bad.write_text(TINY_CONFIG + "\n[model2]\nz = 1\n")
    assert main(["simulate", "--config", str(bad),
                 "--out", str(tmp_path / "x")]) == 1


def test_roots_command(tmp_path, capsys):
    out = tmp_path / "r"
    assert main(["roots", "--d", "1", "--r", "1", "--a", "2", "--b", "3",
                 "--out", str(out)]) == 0
    rep = json.loads((out / "roots.json").read_text())
    assert rep["sign_prediction"] == "positive"
    assert rep["c"] == pytest.approx(0.252392621454156, abs=1e-6)
    assert rep["gamma_plus"] == 1


def test_wave_command(tmp_path):
    out = tmp_path / "w"
    assert main(["wave", "--a", "2", "--b", "3", "--out", str(out)]) == 0
    rep = json.loads((out / "wave.json").read_text())
    assert rep["speed"] == pytest.approx(0.252392621454156, abs=1e-6)
    assert all(f["relative_error"] < 0.03
               for f in rep["tail_fits"].values())
    header = (out / "wave_profile.csv").read_text().splitlines()[0]
    assert header == "xi,u,v"


def test_supersub_verify_pass_and_fail(tmp_path):
    out = tmp_path / "s"
    assert main(["supersub-verify", "--family", "lower-simple",
                 "--out", str(out)]) == 0
    rep = json.loads((out / "supersub.json").read_text())
    assert rep["clean"] and rep["t_star"] == 18.0
    # constraint-violating p0: verification must fail with exit code 3
    assert main(["supersub-verify", "--family", "lower-simple",
                 "--p0", "0.3", "--out", str(out)]) == 3


def test_sweep_command(tmp_path, tiny_config):
    out = tmp_path / "sw"
    assert main(["sweep", "--config", str(tiny_config),
                 "--vary", "model.b=2,3", "--out", str(out),
                 "--threads", "2"]) == 0
    lines = (out / "sweep.csv").read_text().splitlines()
    assert lines[0].startswith("model.b,c_uv,")
    assert len(lines) == 3


def test_sweep_records_row_failures(tmp_path, tiny_config):
    out = tmp_path / "swf"
    # b = 0.5 breaks strong competition: that row fails, the other succeeds
    code = main(["sweep", "--config", str(tiny_config),
                 "--vary", "model.b=0.5,3", "--out", str(out)])
    assert code == 2
    lines = (out / "sweep.csv").read_text().splitlines()
    assert len(lines) == 3
    assert "nan" in lines[1]


def test_preset_configs_parse():
    from lvfronts.cli import PRESETS, _load_config_text
    from lvfronts.config import parse_config
    import argparse
    for name in PRESETS:
        args = argparse.Namespace(preset=name, config=None)
        cfg = parse_config(_load_config_text(args))
        assert cfg.model_params().strong_competition
