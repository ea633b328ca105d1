import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from polarcart.cli import main
from polarcart.io import REPORT_SCHEMAS, build_channel, check_config
from polarcart.exceptions import ConfigError
from polarcart.gf import field_new

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_code_f7(capsys):
    code, out, _ = _run(capsys, "code", "--config", str(CONFIGS / "f7_example.json"))
    assert code == 0
    rep = json.loads(out)
    assert (rep["n"], rep["k"], rep["k_formula"], rep["d"]) == (49, 34, 34, 5)
    jsonschema.validate(rep, REPORT_SCHEMAS["code"])


def test_repetition(capsys):
    code, out, _ = _run(capsys, "code", "--config", str(CONFIGS / "repetition.json"))
    rep = json.loads(out)
    assert code == 0 and rep["d"] == rep["n"] == rep["d_bruteforce"] == 9


def test_guard_exit(capsys):
    code, _, err = _run(capsys, "code", "--config", str(CONFIGS / "oversized_bruteforce.json"))
    assert code == 3 and "guard" in err


def test_config_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"field": {"p": 4}, "subsets": [[0, 1]], "generators": [[0]]}')
    assert _run(capsys, "code", "--config", str(bad))[0] == 2
    bad.write_text("{not json")
    assert _run(capsys, "code", "--config", str(bad))[0] == 2
    bad.write_text('{"field": {"p": 2}, "subsets": [[0, 5]], "generators": [[0]]}')
    assert _run(capsys, "code", "--config", str(bad))[0] == 2
    bad.write_text('{"field": {"p": 2}, "subsets": [[0, 1]], "channel": {"type": "qec", "p": 0.5}, "K": 9}')
    assert _run(capsys, "polarize", "--config", str(bad))[0] == 2
    assert _run(capsys, "code", "--config", str(tmp_path / "missing.json"))[0] == 2


def test_kernel_report(capsys):
    code, out, _ = _run(capsys, "kernel", "--config", str(CONFIGS / "f4_example.json"))
    rep = json.loads(out)
    assert code == 0 and rep["polarizes_sof"] and len(rep["G_m"]) == 12
    assert rep["exponent_lower_bound"] <= rep["exponent"]


def test_identity_kernel(capsys):
    code, out, _ = _run(capsys, "kernel", "--config", str(CONFIGS / "identity_kernel.json"))
    assert code == 0 and json.loads(out)["polarizes_sof"] is False


def test_polarize_and_rerun_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cfg = str(CONFIGS / "f4_example.json")
    assert _run(capsys, "polarize", "--config", cfg, "--out", str(a))[0] == 0
    assert _run(capsys, "polarize", "--config", cfg, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["certificates"]["polar_decreasing"] and rep["K"] == 6


def test_polarize_full_space(tmp_path, capsys):
    cfg = tmp_path / "full.json"
    cfg.write_text(json.dumps({"field": {"p": 2, "m": 2}, "subsets": [[0, 1, 2], [0, 1, 2, 3]],
                               "channel": {"type": "qec", "p": 0.5}, "K": 12}))
    code, out, _ = _run(capsys, "polarize", "--config", str(cfg))
    assert code == 0 and json.loads(out)["certificates"]["polar_decreasing"]


def test_polarize_certificate_failure(tmp_path, capsys):
    cfg = tmp_path / "z.json"
    cfg.write_text(json.dumps({"field": {"p": 2}, "subsets": [[1, 0]],
                               "channel": {"type": "custom", "matrix": [[1, 0], [0.5, 0.5]]}, "K": 1}))
    assert _run(capsys, "polarize", "--config", str(cfg))[0] == 4


def test_polarize_mc_seed(tmp_path, capsys):
    cfg = tmp_path / "mc.json"
    cfg.write_text(json.dumps({"field": {"p": 2}, "subsets": [[1, 0]], "m": 3, "method": "monte-carlo",
                               "channel": {"type": "qsc", "p": 0.2}, "K": 4}))
    outs = [_run(capsys, "polarize", "--config", str(cfg), "--seed", "7", "--trials", "500")[1]
            for _ in range(2)]
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["stats"]["meta"]["seed"] == 7


def test_simulate(capsys):
    code, out, _ = _run(capsys, "simulate", "--config", str(CONFIGS / "ga_simulate.json"))
    rep = json.loads(out)
    assert code == 0 and rep["union_bound"] == 0.25
    assert rep["block_error_rate"] <= 0.25 + 3 * rep["stderr"]


def test_verify_default(capsys):
    code, out, _ = _run(capsys, "verify", "--trials", "2000")
    rep = json.loads(out)
    assert code == 0 and rep["ok"]


def test_export_formats(capsys):
    code, out, _ = _run(capsys, "export", "--config", str(CONFIGS / "f4_example.json"))
    rep = json.loads(out)
    assert code == 0 and set(rep["matrices"]) >= {"generator", "dual", "T1", "T2", "G_m"}
    assert rep["field"] == {"p": 2, "m": 2, "modulus": [1, 1, 1]}
    code, out, _ = _run(capsys, "export", "--config", str(CONFIGS / "f4_example.json"), "--format", "csv")
    assert code == 0 and out.startswith("# generator over GF(2^2)")


def test_csv_reports(capsys):
    code, out, _ = _run(capsys, "polarize", "--config", str(CONFIGS / "f4_example.json"), "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "index,monomial,I,Z,method,selected" and len(lines) == 13
    code, out, _ = _run(capsys, "simulate", "--config", str(CONFIGS / "ga_simulate.json"), "--format", "csv",
                        "--trials", "100")
    assert code == 0 and out.startswith("key,value")


def test_channel_specs():
    F = field_new(2, 2)
    assert build_channel(F, {"type": "qec", "erasure_prob": 0.25}).param == 0.75
    with pytest.raises(ConfigError):
        build_channel(F, {"type": "qec", "p": 0.5, "erasure_prob": 0.5})
    with pytest.raises(ConfigError):
        build_channel(F, {"type": "qsc", "p": 3})
    with pytest.raises(ConfigError):
        build_channel(F, {"type": "custom"})
    with pytest.raises(ConfigError):
        check_config({"field": {"p": 2}, "channel": {"type": "awgn"}})


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "polarcart", "kernel", "--config",
                           str(CONFIGS / "identity_kernel.json"), "--format", "csv"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("# G_m")
