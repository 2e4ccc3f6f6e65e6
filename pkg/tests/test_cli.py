import json
import subprocess
import sys

import pytest

from decoherence import io as dio
from decoherence.cli import SCHEMA, ScenarioConfig, execute, main, read_config_file, run_sweep, validate


@pytest.fixture(autouse=True)
def outdir(tmp_path, monkeypatch):
    monkeypatch.setenv("DECOHERENCE_OUTPUT_DIR", str(tmp_path))
    return tmp_path


def test_ratio_example(capsys):
    assert main(["ratio", "--mass-g", "1", "--temp-K", "300", "--dx-cm", "1"]) == 0
    out = capsys.readouterr().out
    assert "ratio: 3.72" in out and "lambda_th_cm" in out


def test_zeno_example(capsys):
    assert main(["zeno", "--levels", "2", "--V", "1", "--t", "1.5707963", "--N", "10"]) == 0
    assert "survival: 0.7805" in capsys.readouterr().out


def test_table1_writes_csv(outdir):
    assert main(["table1"]) == 0
    rows = (outdir / "table1_table1.csv").read_text().splitlines()
    assert len(rows) == 16
    assert rows[0].endswith("lambda_paper,log10_error")
    meta = json.loads((outdir / "table1_meta.json").read_text())
    assert meta["workers"] == 1 and "trace" in meta["tolerances"]


def test_unknown_key_names_nearest():
    diags = validate(ScenarioConfig("evolve", {"lamda": "0.1"}))
    assert len(diags) == 1
    assert "'lamda'" in diags[0] and "'lambda'" in diags[0]


def test_stability_bound_quoted():
    diags = validate(ScenarioConfig("evolve", {"dt": "1"}))
    assert any("dt <= 0.25*m*dx^2" in d for d in diags)


def test_valid_config_has_no_diagnostics():
    for cmd in SCHEMA:
        params = {"mass-g": "1", "temp-K": "300", "dx-cm": "1"} if cmd == "ratio" else {}
        params.update({"preset": "air molecules"} if cmd == "localize" else {})
        assert validate(ScenarioConfig(cmd, params)) == [], cmd


def test_exit_codes(capsys):
    assert main(["ratio", "--mass-g", "1", "--temp-K", "300", "--dx-cm", "1", "--lamda", "3"]) == 2
    err = capsys.readouterr().err
    assert err.count("\n") == 1 and "lamda" in err
    # a packet launched at the box edge is a numerical-domain error
    assert main(["evolve", "--x0", "9.5"]) == 3
    assert main(["nonsense"]) == 2
    assert main(["ratio"]) == 2


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# gravity run\ncommand = gravity\nL-cm = 2\nt-s = 0.5\n")
    assert read_config_file(cfg)["L-cm"] == "2"
    assert main(["--config", str(cfg), "--json"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["L"] == 2.0


def test_deterministic_outputs(tmp_path):
    for name in ("a", "b"):
        cfg = ScenarioConfig("schmidt", {"dim-a": "3", "dim-b": "4"}, str(tmp_path / name / "s"), seed=5)
        assert execute(cfg).status == 0
    assert (tmp_path / "a" / "s_weights.csv").read_bytes() == (tmp_path / "b" / "s_weights.csv").read_bytes()


def test_sweep_naming_and_concurrency(tmp_path):
    base = ScenarioConfig("ratio", {"mass-g": "1", "temp-K": "300"}, str(tmp_path / "r"))
    serial = run_sweep(base, "dx-cm=1:3:3")
    assert [r.status for r in serial] == [0, 0, 0]
    first = [(tmp_path / f"r_sweep{i:03d}_ratio.csv").read_bytes() for i in range(3)]
    run_sweep(base, "dx-cm=1:3:3", workers=2)
    second = [(tmp_path / f"r_sweep{i:03d}_ratio.csv").read_bytes() for i in range(3)]
    assert first == second
    assert (tmp_path / "r_sweep_index.csv").exists()


def test_small_evolve_run(outdir):
    argv = ["cl", "--x-min", "-8", "--x-max", "8", "--n-points", "48", "--steps", "20", "--p0", "0.5",
            "--record-every", "10"]
    assert main(argv) == 0
    summary = (outdir / "cl_summary.csv").read_text().splitlines()
    assert summary[0] == "t,trace,purity,mean_x,mean_p,offdiag_peak"
    assert len(summary) == 4
    snap = (outdir / "cl_snapshots.csv").read_text().splitlines()
    assert len(snap[1].split(",")) == 1 + 48 * 48


def test_complex_columns_split(outdir):
    assert main(["chiral", "--t-max", "0.1", "--dt", "0.05"]) == 0
    header = (outdir / "chiral_chiral.csv").read_text().splitlines()[0]
    assert header == "t,rho_LL,rho_RR,rho_LR_re,rho_LR_im"


def test_format_float():
    assert dio.format_float(0.1) == "0.10000000000000001"
    assert dio.format_float(3) == "3"


def test_console_script_module():
    res = subprocess.run([sys.executable, "-m", "decoherence.cli", "gravity", "--json"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["dgRel"] == pytest.approx(7.3856e-7, rel=1e-4)
