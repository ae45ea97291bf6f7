import json
import subprocess
import sys

import pytest

from hodgemicro import cli, monodromic
from hodgemicro.corelin import Matrix


def run(args, **kw):
    report, code = cli.run(args, **kw)
    return (report.to_json() if report else None), code


def statuses(report):
    return {c["name"]: c["status"] for c in report["checks"]}


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(path)


def test_verify_homtables():
    report, code = run(["verify-homtables", "--smax", "6"])
    assert code == 0 and len(report["checks"]) == 42
    report, code = run(["verify-homtables", "--smax", "1"])
    assert code == 0 and set(statuses(report)) == {"hom(A_1,P_1)", "hom(Sky,A_1)"}


def test_verify_homtables_corrupted_catalog():
    def corrupted(kind, size=1):
        t = monodromic.block_tuple(kind, size)
        if kind == "A" and size == 3:  # var = 0 instead of J_3
            return monodromic.MonodromicTuple(3, 3, t.can, Matrix.zeros(3, 3))
        return t

    report, code = run(["verify-homtables", "--smax", "4"], catalog=corrupted)
    assert code == 1
    failed = [c["name"] for c in report["checks"] if c["status"] == "fail"]
    assert failed and all("A_3" in name for name in failed)


def test_fourier_input(tmp_path):
    report, code = run(["fourier", "--input", write(tmp_path, "sky.json", {"psi": 0, "phi": 1})])
    assert code == 0
    assert report["data"]["fourier"] == "{P_1(1/2)}"
    blocks = {"blocks": [{"kind": "A", "size": 2}]}
    report, code = run(["fourier", "--input", write(tmp_path, "a2.json", blocks)])
    assert code == 0 and report["data"]["fourier"] == "{B_2(1/2)}"


def test_fourier_roundtrip():
    report, code = run(["fourier", "--roundtrip", "--dims", "12", "--trials", "100"])
    assert code == 0 and report["parameters"]["seed"] == 0


def test_fourier_errors(tmp_path):
    bad = {"psi": 1, "phi": 1, "can": [["1"]], "var": [["1"]]}
    assert run(["fourier", "--input", write(tmp_path, "bad.json", bad)])[1] == 3
    assert run(["fourier", "--input", write(tmp_path, "junk.json", "{nope")])[1] == 2
    assert run(["fourier", "--input", write(tmp_path, "short.json", {"phi": 1})])[1] == 2
    assert run(["fourier"])[1] == 2


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("HODGE_MICRO_SEED", "17")
    report, code = run(["fourier", "--roundtrip", "--dims", "8", "--trials", "5"])
    assert code == 0 and report["parameters"]["seed"] == 17
    monkeypatch.setenv("HODGE_MICRO_SEED", "x")
    assert run(["fourier", "--roundtrip"])[1] == 2


def test_endo():
    report, code = run(["endo", "--n", "1", "--a-cutoff", "5", "--b-cutoff", "10"])
    assert code == 0
    assert report["data"]["table"] == [{"a": m, "b": 2 * m, "dim": 1} for m in range(6)]
    report, code = run(["endo", "--n", "4", "--variant", "relcore"])
    assert code == 0 and all(s == "pass" for s in statuses(report).values())
    assert run(["endo", "--n", "0"])[1] == 2
    assert run(["endo", "--n", "two"])[1] == 2


def test_endo_markdown(capsys):
    assert cli.main(["endo", "--n", "2", "--a-cutoff", "2", "--b-cutoff", "3",
                     "--format", "md"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("| a | b | dim |")
    assert "- core_equals_ginzburg_cohomology: pass" in out


@pytest.mark.parametrize("args", [
    ["--algebra", "lgamma", "--n", "5", "--cutoff", "10"],
    ["--algebra", "agamma", "--n", "3", "--cutoff", "12"],
    ["--algebra", "mgamma", "--n", "2"],
])
def test_koszul(args):
    report, code = run(["koszul", *args])
    assert code == 0, report["checks"]


def test_koszul_flag_errors():
    assert run(["koszul", "--algebra", "bgamma", "--n", "2"])[1] == 2
    assert run(["koszul", "--algebra", "lgamma", "--n", "1"])[1] == 2


def test_bar(caplog):
    assert run(["bar", "--pn", "1", "--degree-cutoff", "8"])[1] == 0
    report, code = run(["bar", "--pn", "2", "--degree-cutoff", "9"])
    assert code == 0
    assert {"degree": 4, "weight": 6, "dim": 1} in report["data"]["table"]
    report, code = run(["bar", "--pn", "2", "--degree-cutoff", "1"])
    assert code == 0
    assert "below" in caplog.text


def test_decompose(tmp_path):
    b3 = monodromic.block_tuple("B", 3).to_json()
    report, code = run(["decompose", "--input", write(tmp_path, "b3.json", b3)])
    assert code == 0 and report["data"]["normal_form"] == "{B_3}"
    zero = {"psi": 0, "phi": 0}
    report, code = run(["decompose", "--input", write(tmp_path, "zero.json", zero)])
    assert code == 0 and report["data"]["normal_form"] == "{}"
    mixed = monodromic.direct_sum([monodromic.block_tuple("A", 2),
                                   monodromic.block_tuple("Sky")]).to_json()
    report, code = run(["decompose", "--input", write(tmp_path, "mixed.json", mixed)])
    assert report["data"]["normal_form"] == "{A_2, Sky}"


def test_report_schema_and_determinism():
    first, _ = run(["verify-homtables", "--smax", "3"])
    second, _ = run(["verify-homtables", "--smax", "3"])
    assert set(first) == {"command", "parameters", "checks", "data", "elapsed_ms"}
    assert isinstance(first["elapsed_ms"], int) and first["elapsed_ms"] >= 0
    names = [c["name"] for c in first["checks"]]
    assert names == sorted(names)
    for c in first["checks"]:
        assert set(c) == {"name", "status", "expected", "actual"}
    first.pop("elapsed_ms")
    second.pop("elapsed_ms")
    assert json.dumps(first) == json.dumps(second)


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "hodgemicro", "bar", "--pn", "1",
                           "--degree-cutoff", "4"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "bar"
    proc = subprocess.run([sys.executable, "-m", "hodgemicro", "endo", "--n", "0"],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stdout == "" and proc.stderr
