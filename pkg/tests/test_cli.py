import json


from moontrace.cli import main


def run(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_expand_T2A(capsys):
    code, out, _ = run(capsys, "expand", "--level", "2", "--starred", "--n-max", "3")
    assert code == 0
    assert out.strip() == "q^-1 + 4372*q + 96256*q^2 + 1240002*q^3 + O(q^4)"


def test_expand_j(capsys):
    _, out, _ = run(capsys, "expand", "--level", "1", "--n-max", "1")
    assert out.strip() == "q^-1 + 744 + 196884*q + O(q^2)"


def test_expand_theta(capsys):
    _, out, _ = run(capsys, "expand", "--target", "theta", "--n-max", "4")
    assert out.strip() == "1 + 2*q + 2*q^4 + O(q^5)"


def test_expand_json_and_csv(capsys):
    _, out, _ = run(capsys, "expand", "--level", "3", "--n-max", "2", "--format", "json")
    obj = json.loads(out)
    assert obj["den"] == 24 and obj["coeffs"][0] == "1"
    _, out, _ = run(capsys, "expand", "--target", "eisenstein", "--level", "2", "--n-max", "2", "--format", "csv")
    assert out.splitlines() == ["exponent,coefficient", "0,1", "1,24", "2,24"]


def test_expand_eta(capsys):
    _, out, _ = run(capsys, "expand", "--target", "eta-quotient", "--eta", "1:24", "--n-max", "3")
    assert out.strip() == "q - 24*q^2 + 252*q^3 + O(q^4)"


def test_faber(capsys):
    _, out, _ = run(capsys, "faber", "--level", "10", "--starred")
    assert out.strip() == "phi_2(j_10*) = X^2 - 44"


def test_classlist(capsys):
    code, out, _ = run(capsys, "classlist", "--level", "6", "--d", "8", "--paranoid", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["mu"] == 1
    assert all(r["scan_agrees"] for r in obj["residues"])


def test_trace(capsys):
    _, out, _ = run(capsys, "trace", "--level", "6", "--d-max", "8", "--format", "csv")
    assert "8,-58,-29,computed" in out.splitlines()
    _, out, _ = run(capsys, "trace", "--level", "10", "--d-max", "4", "--format", "csv")
    assert "4,-14,-7,computed" in out.splitlines()


def test_trace_cache_deterministic(capsys, tmp_path):
    args = ("trace", "--level", "5", "--d-max", "20", "--format", "json", "--cache-dir", str(tmp_path))
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
    assert list(tmp_path.iterdir())


def test_trace_cache_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("MOONTRACE_CACHE_DIR", str(tmp_path))
    run(capsys, "trace", "--level", "3", "--d-max", "8")
    assert list(tmp_path.glob("*.json"))


def test_trace_paranoid_verbose(capsys):
    code, out, _ = run(capsys, "trace", "--level", "7", "--d-max", "12", "--paranoid", "--verbose", "--format", "json")
    assert code == 0
    assert "diagnostics" in json.loads(out)


def test_verify_kaneko(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "kaneko", "--n-max", "12")
    assert code == 0 and "pass" in out


def test_verify_all_level6(capsys):
    code, out, _ = run(capsys, "verify", "--identity", "all", "--level", "6", "--n-max", "8", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["pass"]
    eis = [r for r in obj["reports"] if r["identity"] == "eisenstein"][0]
    assert eis["extra"]["coefficients"] == ["7/24", "13/12", "-1/8"]


def test_verify_bad_level(capsys):
    code, _, err = run(capsys, "verify", "--level", "4")
    assert code == 2 and "level 4" in err


def test_usage_errors(capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "trace", "--d-max", "2")[0] == 2
    assert run(capsys, "verify", "--identity", "kaneko", "--level", "6")[0] == 2


def test_deterministic_verify_output(capsys):
    _, a, _ = run(capsys, "verify", "--identity", "u-relations", "--level", "10", "--format", "json")
    _, b, _ = run(capsys, "verify", "--identity", "u-relations", "--level", "10", "--format", "json")
    assert a == b
