import io
import json
import subprocess
import sys

import pytest

from conftest import CORPUS, corpus_names, load
from pbwkit.cli import COMMANDS, main, parse, parse_text, serialize
from pbwkit.errors import ParseError, ValidationError


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def path(name):
    return str(CORPUS / f"{name}.alg")


@pytest.mark.parametrize("name", corpus_names())
def test_round_trip(name):
    pf = parse(CORPUS / f"{name}.alg")
    text = serialize(pf)
    again = parse_text(text)
    assert again == pf
    assert serialize(again) == text


EXIT_CODES = [
    ("check-pbw-a", "poly_xy_q", 0),
    ("check-pbw-a", "weyl_q", 0),
    ("check-pbw-a", "poly_xyz_q", 1),
    ("check-pbw-a", "sympl_refl_z2_q", 0),
    ("check-pbw-a", "broken_theta", 1),
    ("check-pbw-a", "refl_z2_theta", 1),
    ("check-pbw-a", "dual_twisted_eps", 0),
    ("check-pbw-a", "dual_twisted_one", 1),
    ("check-pbw-a", "usl2_q", 3),
    ("check-pbw-a", "unstable_swap", 1),
    ("check-pbw-b", "usl2_q", 0),
    ("check-pbw-b", "usl2_broken_q", 1),
    ("check-pbw-b", "usl2_z2_nonequivariant_q", 1),
    ("oracle", "weyl_q", 0),
    ("oracle", "refl_z2_theta", 1),
    ("check-braiding", "dual_twisted_eps", 0),
    ("check-koszul", "sympl_refl_z2_q", 0),
    ("check-algebra", "sympl_refl_z2_gf2", 0),
    ("gorenstein", "sympl_refl_z2_q", 0),
    ("deform-sigma", "sympl_refl_z2_q", 0),
    ("deform-sigma", "dual_twisted_eps", 0),
    ("deform-sigma", "dual_twisted_one", 1),
    ("resolution", "poly_xy_q", 0),
]


@pytest.mark.parametrize("command,name,code", EXIT_CODES)
def test_exit_codes(command, name, code):
    got, text = run(command, path(name), "--deg-max", "4", "--n-max", "3")
    assert got == code, text
    if code != 3:
        assert text.rstrip().splitlines()[-1].startswith("overall")


def test_report_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run("oracle", path("weyl_q"), "--n-max", "3", "--report", str(p), "--quiet") == (0, "")
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["overall"] == "pass" and doc["command"] == "oracle"
    assert doc["bounds"]["n_max"] == 3
    assert len(doc["input_sha256"]) == 64


def test_bounds_from_file(tmp_path):
    text = (CORPUS / "weyl_q.alg").read_text() + "n_max = 2\n"
    f = tmp_path / "w.alg"
    f.write_text(text)
    rep = tmp_path / "r.json"
    run("oracle", str(f), "--report", str(rep), "--quiet")
    assert json.loads(rep.read_text())["bounds"]["n_max"] == 2
    run("oracle", str(f), "--n-max", "1", "--report", str(rep), "--quiet")
    assert json.loads(rep.read_text())["bounds"]["n_max"] == 1


BAD_INPUTS = {
    "non_prime": "field = GF(4)\nalgebra = ground\nmodule = bimodule\nM.dim = 1\n",
    "relation_out_of_range": ("field = Q\nalgebra = ground\nmodule = bimodule\nM.dim = 2\n"
                              "begin left 0\n1 0\n0 1\nend\nbegin right 0\n1 0\n0 1\nend\n"
                              "begin relations\n7:1\nend\n"),
    "unclosed_block": "field = Q\nbegin relations\n0:1\n",
    "duplicate_key": "field = Q\nfield = Q\n",
    "not_associative": ("field = Q\nalgebra = structure 2\nS.unit = 1 0\n"
                        "begin S.mult\n1 0  0 1\n0 1  0 1\nend\n"
                        "module = bimodule\nM.dim = 1\n"),
}


@pytest.mark.parametrize("case", sorted(BAD_INPUTS))
def test_invalid_inputs_exit_3(case, tmp_path):
    f = tmp_path / "bad.alg"
    f.write_text(BAD_INPUTS[case])
    assert run("check-algebra", str(f))[0] == 3


def test_invalid_inputs_raise():
    with pytest.raises(ValidationError):
        parse_text(BAD_INPUTS["non_prime"])
    with pytest.raises(ValidationError):
        parse_text(BAD_INPUTS["relation_out_of_range"])
    with pytest.raises(ParseError):
        parse_text(BAD_INPUTS["unclosed_block"])


def test_missing_file():
    assert run("oracle", "/nonexistent/file.alg")[0] == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pbwkit", "check-algebra", path("poly_xy_q")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "overall\tpass" in proc.stdout


def test_parse_bundled_fixture():
    m = load("sympl_refl_z2_q")
    assert m.S.dim == 2 and m.braiding.dimV == 2


def test_oracle_table_for_symplectic_reflection():
    code, text = run("oracle", "--n-max", "4", path("sympl_refl_z2_q"))
    assert code == 0
    rows = text.split("## filtered\n")[1].splitlines()[1:6]
    assert [int(r.split("\t")[2]) for r in rows] == [2, 4, 6, 8, 10]


def test_non_central_theta_has_witness(tmp_path):
    rep = tmp_path / "r.json"
    code, _ = run("check-pbw-a", path("broken_theta"), "--report", str(rep))
    assert code == 1
    doc = json.loads(rep.read_text())
    failed = [c for c in doc["checks"] if c["status"] == "fail"]
    assert failed and all(c["witness"] is not None for c in failed)


STATUS_CODE = {"pass": 0, "fail": 1, "undecided": 2}


@pytest.mark.parametrize("name", corpus_names())
def test_exit_code_contract(name, tmp_path):
    rep = tmp_path / "r.json"
    for command in COMMANDS:
        code, _ = run(command, path(name), "--deg-max", "3", "--n-max", "2",
                      "--report", str(rep), "--quiet")
        if code == 3:
            assert not rep.exists()
            continue
        doc = json.loads(rep.read_text())
        assert code == STATUS_CODE[doc["overall"]], (command, doc)
        if code == 1:
            assert any(c["status"] == "fail" for c in doc["checks"])
        rep.unlink()
