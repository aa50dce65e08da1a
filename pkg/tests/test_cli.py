import cmath
import csv
import io
import json
import math

import pytest

from gbdilog import cli
from gbdilog import representation as rep
from gbdilog.qdilog import eval_Gb


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), stdout=out)
    return code, out.getvalue()


@pytest.mark.parametrize("text,value", [("1.5", 1.5), ("-2", -2), ("1.0326+0i", 1.0326),
                                        ("0.3-1.25i", 0.3 - 1.25j), ("-0.5+2i", -0.5 + 2j)])
def test_complex_grammar(text, value):
    assert cli.parse_complex(text) == value


@pytest.mark.parametrize("text", ["1e-3", "1.", ".5", "2i", "1 + 2i", "1+2j", "1.2.3", "", "nan"])
def test_complex_grammar_rejects(text):
    with pytest.raises(cli.InputError):
        cli.parse_complex(text)


def test_help_documents_grammar(capsys):
    code, _ = run("--help")
    assert code == 0
    assert "[-]ddd[.ddd][(+|-)ddd[.ddd]i]" in capsys.readouterr().out


def test_eval_gb_half_q(p):
    code, out = run("eval", "gb", "--b", "0.775", "--z", "1.0326+0i")
    assert code == 0
    fields = dict(kv.split("=") for kv in out.split())
    v = complex(fields["value"].replace("i", "j"))
    assert abs(abs(v) - 1) < 1e-4
    assert abs(v - cmath.exp(-1j * math.pi * p.Q ** 2 / 8)) < 1e-3
    lib = eval_Gb(1.0326, p)
    assert fields["value"] == cli.fmt_complex(lib)
    assert float(fields["err_estimate"]) < 1e-12


def test_eval_plancherel_zero():
    code, out = run("eval", "plancherel", "--b", "0.775", "--lambda", "0")
    assert code == 0 and out.startswith("value=0 ")


def test_eval_phi_matches_library(p):
    code, out = run("eval", "phi", "--b", "0.775", "--lambda", "0.5", "--x", "0.3")
    assert code == 0
    assert out.split()[0] == "value=" + cli.fmt_complex(rep.eval_Phi(0.5, 0.3, p))


def test_eval_json(p):
    code, out = run("eval", "sb", "--z", "0.3+0.2i", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["function"] == "sb" and d["err_estimate"] < 1e-12


@pytest.mark.parametrize("argv", [["eval", "fb", "--alpha", "0.6", "--beta", "0.5", "--gamma", "1.4", "--z", "-0.5"],
                                  ["eval", "g_small", "--x", "0.5+0.1i"],
                                  ["eval", "plancherel", "--lambda", "0.4", "--convention", "printed"]])
def test_eval_other_functions(argv):
    code, out = run(*argv)
    assert code == 0 and out.startswith("value=")


@pytest.mark.parametrize("argv,code", [
    (["eval", "gb", "--z", "1.2.3"], 2),
    (["eval", "gb"], 2),
    (["eval", "gb", "--z", "1", "--b", "1.5"], 2),
    (["eval", "gamma", "--z", "1"], 2),
    (["eval", "gb", "--z", "0"], 3),
    (["eval", "g_small", "--x", "-1"], 3),
    (["eval", "plancherel", "--lambda", "-1"], 3),
])
def test_eval_exit_codes(argv, code, capsys):
    assert run(*argv)[0] == code


def test_verify_tau_beta(tmp_path):
    out = tmp_path / "r.json"
    code, _ = run("verify", "--suite", "tau-beta", "--b", "0.775", "--tol", "1e-6", "--report", str(out))
    data = json.loads(out.read_text())
    assert code == 0 and len(data) == 6 and all(d["pass"] for d in data)
    assert [d["name"] for d in data] == sorted(d["name"] for d in data)


@pytest.mark.parametrize("tol", ["0", "-1e-3", "abc"])
def test_verify_bad_tol(tol, capsys):
    assert run("verify", "--suite", "tau-beta", "--tol", tol)[0] == 2


def test_verify_bad_b(capsys):
    code, _ = run("verify", "--suite", "tau-beta", "--b", "1.5")
    assert code == 2 and "DomainError" in capsys.readouterr().err


def test_verify_unknown_suite(capsys):
    assert run("verify", "--suite", "nope")[0] == 2


def test_verify_failure_still_writes_report(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _ = run("verify", "--suite", "plancherel,plancherel-printed", "--out", str(out))
    data = json.loads(out.read_text())
    assert code == 1
    assert {d["name"]: d["pass"] for d in data} == {"plancherel": True, "plancherel-printed": False}


def test_verify_csv(tmp_path):
    out = tmp_path / "r.csv"
    code, _ = run("verify", "--suite", "reflection", "--format", "csv", "--out", str(out))
    rows = list(csv.reader(out.open()))
    assert code == 0 and rows[0] == ["suite", "name", "params", "abs_err", "rel_err", "pass"]
    assert len(rows) == 2


def test_verify_thread_count_does_not_change_bytes(monkeypatch):
    outs = []
    for n in ("1", "3"):
        monkeypatch.setenv("QDILOG_THREADS", n)
        outs.append(run("verify", "--suite", "special,reflection,regular-rep,plancherel", "--seed", "3")[1])
    assert outs[0] == outs[1]


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "gb.conf"
    cfg.write_text("# settings\nb = 0.5\nsuite = unitarity\nseed = 4\n")
    code, out = run("verify", "--config", str(cfg))
    data = json.loads(out)
    assert code == 0 and data[0]["params"]["b"] == 0.5 and data[0]["params"]["suite"] == "unitarity"
    code, out = run("verify", "--config", str(cfg), "--b", "0.6")
    assert json.loads(out)[0]["params"]["b"] == 0.6
    bad = tmp_path / "bad.conf"
    bad.write_text("b 0.5\n")
    assert run("verify", "--config", str(bad))[0] == 2
    assert run("verify", "--config", str(tmp_path / "missing.conf"))[0] == 2


def test_scan_grid(tmp_path):
    out = tmp_path / "s.csv"
    code, _ = run("scan", "gb", "--re", "0.2:0.4:0.1", "--im=-0.5:0.5:0.5", "--out", str(out))
    rows = list(csv.reader(out.open()))
    assert code == 0 and rows[0] == ["re", "im", "abs", "arg"] and len(rows) == 10


def test_scan_unitarity_line(p):
    q2 = cli.fmt(p.Q / 2)
    code, out = run("scan", "gb", "--re", f"{q2}:{q2}:1", "--im=-3:3:0.5")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 13
    assert all(abs(float(r["abs"]) - 1) < 1e-8 for r in rows)


def test_scan_poles_are_blank(p):
    code, out = run("scan", "gb", "--re", "0:0.2:0.1", "--im", "0:0:1")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert rows[0]["abs"] == "" and rows[0]["arg"] == ""
    assert rows[1]["abs"] != ""


@pytest.mark.parametrize("spec", ["0:1", "1:0:0.1", "0:1:-0.1", "a:b:c"])
def test_scan_bad_grid(spec, capsys):
    assert run("scan", "gb", "--re", spec, "--im", "0:0:1")[0] == 2


def test_casimir_command():
    code, out = run("casimir", "--lambda", "0.4", "--t", "0.5")
    d = json.loads(out)
    assert code == 0 and d["casimir_variance"] < 1e-10
    assert abs(complex(*d["casimir_mean"]) - complex(*d["casimir_closed_form"])) < 1e-10
    assert max(d["relation_residuals"].values()) < 1e-10


def test_verify_all_has_many_suites(tmp_path):
    out = tmp_path / "all.json"
    code, _ = run("verify", "--suite", "all", "--b", "0.775", "--out", str(out))
    data = json.loads(out.read_text())
    assert code == 0
    assert len({d["params"]["suite"] for d in data}) >= 12
