import json
import os
import subprocess
import sys

import pytest

from hamkac import cli
from hamkac.kacmod import ConfigError


def run_main(tmp_path, *args, env_cache=None, monkeypatch=None):
    out = tmp_path / "report.json"
    argv = ["run", *args, "--out", str(out)]
    if monkeypatch is not None:
        if env_cache:
            monkeypatch.setenv(cli.ENV_CACHE, env_cache)
        else:
            monkeypatch.delenv(cli.ENV_CACHE, raising=False)
    status = cli.main(argv)
    report = json.loads(out.read_text()) if out.exists() else None
    return status, report, out


def test_bad_prime_exits_2(capsys):
    assert cli.main(["run", "--p", "4", "--t", "1,1"]) == 2
    assert "p must be prime > 3" in capsys.readouterr().err


def test_bad_prime_exits_2_as_subprocess(tmp_path):
    r = subprocess.run([sys.executable, "-m", "hamkac", "run", "--p", "4"],
                       capture_output=True, text=True, cwd=tmp_path)
    assert r.returncode == 2
    assert "p must be prime > 3" in r.stderr


def test_height_one_character_needs_flag(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    args = ["--p", "5", "--t", "1,1", "--chi", "custom:h=1", "--lambda", "0", "--checks", "osp"]
    status, _, _ = run_main(tmp_path, *args, monkeypatch=monkeypatch)
    assert status == 2
    assert "height 1" in capsys.readouterr().err
    status, report, _ = run_main(tmp_path, *args, "--allow-any-height", monkeypatch=monkeypatch)
    assert status == 0 and report["cells"][0]["dim"] == 50


@pytest.mark.parametrize("values,msg", [
    ({"p": None}, "--p is required"),
    ({"p": "x"}, "p must be prime > 3"),
    ({"p": "5", "t": "1"}, "two integers"),
    ({"p": "5", "t": "0,1"}, "positive"),
    ({"p": "5", "lambda": "7"}, "lie in"),
    ({"p": "5", "checks": "gr,bogus"}, "unknown checks"),
    ({"p": "5", "mode": "partial"}, "full or sampled"),
])
def test_config_validation(values, msg):
    v = dict(cli.DEFAULTS)
    v.update(values)
    with pytest.raises(ConfigError, match=msg):
        cli.make_config(v)


def test_config_file_and_precedence(tmp_path):
    cfg_file = tmp_path / "job.cfg"
    cfg_file.write_text("# job\np = 5\nt = 1,1\nchi = II\nlambda = 0\nchecks = osp\nseed = 4\n")
    out = tmp_path / "a.json"
    assert cli.main(["run", "--config", str(cfg_file), "--seed", "9", "--out", str(out)]) == 0
    key = json.loads(out.read_text())["config"]
    assert key["chi"] == ["II"] and key["seed"] == 9 and key["lambdas"] == [0]


def test_config_file_rejects_unknown_key(tmp_path):
    f = tmp_path / "bad.cfg"
    f.write_text("colour = blue\n")
    with pytest.raises(ConfigError, match="unknown key"):
        cli.read_config_file(str(f))


def test_env_cache_overrides_flag(tmp_path, monkeypatch):
    env_dir = tmp_path / "env"
    flag_dir = tmp_path / "flag"
    status, _, _ = run_main(tmp_path, "--p", "5", "--chi", "III", "--lambda", "0",
                            "--checks", "chi_reduced", "--cache", str(flag_dir),
                            env_cache=str(env_dir), monkeypatch=monkeypatch)
    assert status == 0
    assert any(n.startswith("kac_") for n in os.listdir(env_dir))
    assert not flag_dir.exists()


def test_reports_byte_identical_cold_and_warm(tmp_path, monkeypatch):
    monkeypatch.delenv(cli.ENV_CACHE, raising=False)
    cache = tmp_path / "cache"
    args = ["run", "--p", "5", "--chi", "I,III", "--lambda", "0,2",
            "--checks", "gr,osp,module_law,chi_reduced,meataxe", "--cache", str(cache)]
    texts = []
    for name in ("cold.json", "warm.json"):
        assert cli.main(args + ["--out", str(tmp_path / name)]) == 0
        texts.append((tmp_path / name).read_bytes())
    assert texts[0] == texts[1]
    # a damaged cache file is recomputed, never trusted
    victim = sorted(p for p in cache.iterdir() if p.name.startswith("kac_"))[0]
    victim.write_text(victim.read_text()[:-40] + "}")
    assert cli.main(args + ["--out", str(tmp_path / "healed.json")]) == 0
    assert (tmp_path / "healed.json").read_bytes() == texts[0]


def test_default_report_name_is_content_hash(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv(cli.ENV_CACHE, raising=False)
    assert cli.main(["run", "--p", "5", "--lambda", "0", "--checks", "osp"]) == 0
    cfg = cli.make_config({**cli.DEFAULTS, "p": "5", "lambda": "0", "checks": "osp"})
    assert (tmp_path / ("hamkac-report-%s.json" % cfg.digest())).exists()


def test_failed_check_exits_1_with_witness(tmp_path, monkeypatch):
    # K(1) has a proper submodule, so the simplicity check fails
    status, report, _ = run_main(tmp_path, "--p", "5", "--chi", "I", "--lambda", "1",
                                 "--checks", "meataxe", monkeypatch=monkeypatch)
    assert status == 1 and report["passed"] is False
    mx = report["cells"][0]["meataxe"]
    assert mx["verdict"] == "reducible" and mx["subspace_dim"] < 150
    assert report["cells"][0]["row"]["irreducible"] is False


def test_gr_reports_both_phi_sources(tmp_path, monkeypatch):
    status, report, _ = run_main(tmp_path, "--p", "5", "--t", "2,1", "--lambda", "",
                                 "--checks", "gr", monkeypatch=monkeypatch)
    gr = report["checks"]["gr"]
    assert gr["closed_form"]["passed"] is False and gr["solved"]["passed"] is True
    assert status == 0 and any("solved phi" in n for n in report["notes"])


def test_json_flag_and_table(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv(cli.ENV_CACHE, raising=False)
    out = tmp_path / "r.json"
    cli.main(["run", "--p", "5", "--lambda", "0", "--checks", "osp", "--json", "--out", str(out)])
    assert json.loads(capsys.readouterr().out) == json.loads(out.read_text())
    cli.main(["run", "--p", "5", "--lambda", "0", "--checks", "osp", "--out", str(out)])
    text = capsys.readouterr().out
    assert "osp          pass" in text and "overall: pass" in text


def test_timings_are_opt_in(tmp_path, monkeypatch):
    base = ["--p", "5", "--lambda", "0", "--checks", "meataxe"]
    _, report, _ = run_main(tmp_path, *base, monkeypatch=monkeypatch)
    assert report["cells"][0]["row"]["elapsed_ms"] is None
    _, report, _ = run_main(tmp_path, *base, "--timings", monkeypatch=monkeypatch)
    assert isinstance(report["cells"][0]["row"]["elapsed_ms"], int)
