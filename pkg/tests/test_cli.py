import json

import pytest

from bohrkit import BohrSeries, read_series, write_series
from bohrkit.cli import main
from bohrkit.dilation import noor_series
from bohrkit.series import reciprocal_kernel


def run(capsys, *argv):
    code = main(["--no-timestamp", *argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    paths = {
        "kp": tmp_path / "kp.json",
        "f13": tmp_path / "f13.json",
        "eta": tmp_path / "eta06.json",
        "unit": tmp_path / "unit.json",
    }
    write_series(reciprocal_kernel(200), paths["kp"])
    write_series(BohrSeries(6, {1: -1, 2: -1, 3: -1, 6: 1}), paths["f13"])
    write_series(BohrSeries.from_function(300, lambda n: (-1.0) ** n / n**0.6), paths["eta"])
    write_series(BohrSeries.unit(50), paths["unit"])
    return paths


def test_series_mul_inv_norm(capsys, files, tmp_path):
    out = tmp_path / "c.json"
    code, _, _ = run(capsys, "series", "mul", str(files["kp"]), str(files["unit"]), "--out", str(out))
    assert code == 0 and read_series(out).n_max == 50
    code, text, _ = run(capsys, "series", "inv", str(files["kp"]))
    assert code == 0
    mob = json.loads(text)
    vals = {r["n"]: r["re"] for r in mob["coeffs"]}
    assert vals[6] == pytest.approx(1 / 6) and vals[2] == pytest.approx(-0.5) and 4 not in vals
    code, text, _ = run(capsys, "series", "norm", str(files["unit"]))
    assert json.loads(text)["result"]["norm"] == 1


def test_series_eval_and_restrict(capsys, files, tmp_path):
    code, text, _ = run(capsys, "series", "eval", str(files["f13"]), "--point", "1:-1/2,2:-1/3")
    assert code == 0 and json.loads(text)["result"]["abs"] < 1e-15
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "series", "restrict", str(files["kp"]), "--k", "1", "--out", str(out))
    assert sorted(read_series(out).coeffs) == [1, 2, 4, 8, 16, 32, 64, 128]


def test_decide(capsys, files):
    code, text, _ = run(capsys, "decide", str(files["kp"]))
    doc = json.loads(text)
    assert code == 0 and doc["result"]["status"] == "Cyclic"
    assert [s["rule"] for s in doc["result"]["trace"]] == ["R2"]
    code, text, _ = run(capsys, "decide", str(files["f13"]), "--zero", "1:-0.5,2:-0.33333333333333")
    res = json.loads(text)["result"]
    assert res["status"] == "NotCyclic"
    assert res["certificate"]["bound"] == pytest.approx(0.8165, abs=1e-4)
    code, text, _ = run(capsys, "decide", str(files["eta"]))
    res = json.loads(text)["result"]
    assert res["status"] == "NotCyclic" and "R7" in [s["rule"] for s in res["trace"]]


def test_decide_with_hints(capsys, files):
    code, text, _ = run(capsys, "decide", str(files["kp"]), "--kernel", "reciprocal-primes", "--S", "2,3")
    assert code == 0 and json.loads(text)["result"]["status"] == "Cyclic"
    code, _, err = run(capsys, "decide", str(files["kp"]), "--partition", "{not json")
    assert code == 2 and "partition" in err


def test_delta_csv(capsys, files):
    code, text, _ = run(capsys, "delta", str(files["unit"]), "--N-list", "1,2,4", "--M", "50", "--csv")
    lines = text.splitlines()
    assert code == 0 and lines[0] == "N,M,delta_hat,cond"
    assert [float(l.split(",")[2]) for l in lines[1:4]] == [0, 0, 0]
    assert any(l.startswith("# config") for l in lines)
    code, text, _ = run(capsys, "delta", str(files["kp"]), "--N-list", "200", "--M", "200")
    assert json.loads(text)["result"]["rows"][0]["delta_hat"] <= 1e-8


def test_kozlov(capsys, tmp_path):
    code, text, _ = run(capsys, "kozlov", "--theta", "1/2", "--nmax", "500", "--report", "support", "--out-dir", str(tmp_path))
    res = json.loads(text)["result"]
    assert code == 0 and res["G_support"] == [1, 2, 4]
    assert (tmp_path / "kozlov" / "theta_1_2.json").exists()
    code, text, _ = run(capsys, "kozlov", "--theta", "1/4", "--nmax", "200", "--report", "evidence")
    ev = dict(json.loads(text)["result"]["prime_evidence"])
    assert ev[3] == pytest.approx(0.2122, abs=1e-4)
    code, text, _ = run(capsys, "kozlov", "--theta", "1/3", "--nmax", "300", "--report", "verdict")
    assert json.loads(text)["result"]["verdict"]["status"] == "NotCyclic"


def test_noor(capsys):
    code, text, _ = run(capsys, "noor", "--m", "2", "--N-list", "1,2,4,8", "--M", "500")
    res = json.loads(text)["result"]
    vals = [r["delta_hat"] for r in res["rows"]]
    assert code == 0 and all(b < a for a, b in zip(vals, vals[1:]))
    assert res["intertwining_defect"] == 0 and res["factorization_error"] < 1e-15
    code, _, _ = run(capsys, "noor", "--m", "1", "--N-list", "1", "--M", "10")
    assert code == 2


def test_ingest(capsys, tmp_path):
    out = tmp_path / "ind.json"
    code, _, _ = run(capsys, "ingest", "--breakpoints", "0,1/2,1", "--values", "1,0", "--nmax", "40", "--out", str(out))
    assert code == 0 and read_series(out)[2] == pytest.approx(2 ** 0.5 / 3.141592653589793)
    samples = tmp_path / "s.txt"
    samples.write_text(" ".join(["1.0"] * 10))
    code, _, err = run(capsys, "ingest", "--samples", str(samples), "--nmax", "5")
    assert code == 2 and "aliasing" in err


def test_error_codes(capsys, files, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"format": "bohr-series/2", "n_max": 3, "coeffs": []}))
    assert run(capsys, "series", "norm", str(bad))[0] == 2
    assert run(capsys, "series", "norm", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "series", "eval", str(files["kp"]), "--point", "1:1")[0] == 3
    assert run(capsys, "series", "inv", str(files["f13"]), "--out", str(tmp_path / "x.json"))[0] == 0
    zero_a1 = tmp_path / "z.json"
    write_series(BohrSeries(4, {2: 1}), zero_a1)
    assert run(capsys, "series", "inv", str(zero_a1))[0] == 3


def test_config_file_and_override(capsys, files, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"zero_tol": 1e-6, "seed": 3}))
    code, text, _ = run(capsys, "--config", str(cfg), "--seed", "7", "series", "norm", str(files["unit"]))
    conf = json.loads(text)["config"]
    assert conf["zero_tol"] == 1e-6 and conf["seed"] == 7
    cfg.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "--config", str(cfg), "series", "norm", str(files["unit"]))[0] == 2
    assert run(capsys, "--zero-tol", "-1", "series", "norm", str(files["unit"]))[0] == 2


def test_reproducible_bytes(capsys, files):
    a = run(capsys, "decide", str(files["eta"]))[1]
    b = run(capsys, "decide", str(files["eta"]))[1]
    assert a == b
    doc = json.loads(a)
    assert "timestamp" not in doc and str(files["eta"]) in doc["inputs"]


def test_solver_failure_exit_code(capsys, files, monkeypatch):
    import bohrkit.cli as cli
    from bohrkit.errors import SolverError

    def boom(*a, **k):
        raise SolverError("not monotone")

    monkeypatch.setattr(cli, "delta_sweep", boom)
    assert run(capsys, "delta", str(files["unit"]), "--N-list", "1", "--M", "10")[0] == 4


def test_noor_series_matches_alternating():
    b = noor_series(2, 20)
    assert b[2] == pytest.approx(-0.5)
