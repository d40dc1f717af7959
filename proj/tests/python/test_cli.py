import json
import subprocess


def run(exe, *args):
    return subprocess.run([exe, *map(str, args)], capture_output=True, text=True)


def test_version(ima_exe):
    r = run(ima_exe, "--version")
    assert r.returncode == 0
    assert r.stdout.strip() == "ima 0.1.0"


def test_round_trip(ima_exe, tmp_path, validate):
    series = tmp_path / "s.csv"
    assert run(ima_exe, "simulate", "--theta", 0.6, "--shifted-exp", 300, 1, "--seed", 11, "-o", series).returncode == 0
    r = run(ima_exe, "fit", series)
    assert r.returncode == 0
    assert "theta_hat" in r.stderr
    fit = json.loads(r.stdout)
    validate(fit, "fit.schema.json")

    out = tmp_path / "boot.json"
    assert run(ima_exe, "bootstrap", series, "-B", 20, "-q", "-o", out).returncode == 0
    validate(json.loads(out.read_text()), "bootstrap.schema.json")

    pj = tmp_path / "p.json"
    assert run(ima_exe, "predict", series, "--refit", "-o", tmp_path / "p.csv", "--json", pj).returncode == 0
    validate(json.loads(pj.read_text()), "prediction.schema.json")

    d = tmp_path / "diag"
    assert run(ima_exe, "diagnose", series, "--refit", "-o", d).returncode == 0
    assert sorted(p.name for p in d.iterdir()) == ["acf.csv", "lb.csv", "mse.csv", "qq.csv", "report.json"]
    validate(json.loads((d / "report.json").read_text()), "diagnostics.schema.json")


def test_mc_output(ima_exe, tmp_path, validate):
    cfg = tmp_path / "m.cfg"
    cfg.write_text("name = m\ntheta0 = 0.1, 0.9\nn_obs = 60\nreplications = 6\n")
    assert run(ima_exe, "mc", cfg, "-o", tmp_path).returncode == 0
    validate(json.loads((tmp_path / "m.json").read_text()), "mc.schema.json")
    rows = (tmp_path / "m.csv").read_text().splitlines()
    assert rows[0].startswith("N,theta0,estimate,se_hat,se_tilde,bias,rmse,cv")
    assert len(rows) == 3


def test_exit_codes(ima_exe, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("time,value\n0,1\n0,2\n1,3\n")
    r = run(ima_exe, "fit", bad)
    assert r.returncode == 2
    assert "row 2" in r.stderr
    assert run(ima_exe, "fit", tmp_path / "missing.csv").returncode == 3
    short = tmp_path / "short.csv"
    short.write_text("time,value\n0,1\n1,2\n")
    assert run(ima_exe, "fit", short).returncode == 4
    assert run(ima_exe, "nonsense").returncode == 2
