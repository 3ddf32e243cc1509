import json
import subprocess
import sys
from pathlib import Path

import pytest

from monozeta.cli import main
from monozeta.factory import family
from monozeta.resolution import dumps, parse, serialize

GOLDEN = Path(__file__).parent / "golden"

CASES = {
    "realize_cusp_5_6": ["realize", "--family", "pq", "--params", "2,3", "--target", "5/6"],
    "monodromy_ex28": ["monodromy", "--fixture", "ex28"],
    "zeta_fermat4_omega2": ["zeta", "--family", "fermat", "--params", "d=4", "--form", "omega_i:i=2"],
    "zeta_morse4": ["zeta", "--fixture", "morse-4"],
    "resolve_ex28": ["resolve", "--fixture", "ex28"],
    "verify_ex28": ["verify-principle", "--fixture", "ex28", "--form", "omega_ij:i=1..3,j=1..5",
                    "--drop", "omega_ij:i=2,j=4"],
    "realize_all_cusp": ["realize", "--fixture", "cusp", "--all"],
    "fixtures": ["fixtures"],
}


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, capsys, request):
    code, out, _ = run(capsys, CASES[name])
    assert code == 0
    path = GOLDEN / f"{name}.json"
    if request.config.getoption("--regold"):
        path.write_text(out, encoding="utf-8")
    assert out == path.read_text(encoding="utf-8")
    # and a second run is byte-identical
    assert run(capsys, CASES[name])[1] == out


def test_documented_values(capsys):
    doc = json.loads(run(capsys, CASES["realize_cusp_5_6"])[1])
    assert doc["s0"] == "-7/6" and doc["residue"] == "-7/12" and doc["pole_order"] == 1
    doc = json.loads(run(capsys, CASES["monodromy_ex28"])[1])
    assert doc["eigenvalue_orders"] == [1, 6, 10, 12, 30]
    doc = json.loads(run(capsys, CASES["zeta_fermat4_omega2"])[1])
    assert doc["display"] == "(1+4s)/(2(1+s)^2)"
    assert doc["poles"] == [{"s0": "-1", "order": 2, "leading": "-3/2"}]
    doc = json.loads(run(capsys, CASES["verify_ex28"])[1])
    assert doc["poles_are_eigenvalues"] and doc["eigenvalues_are_hit"]


def test_resolve_round_trip(tmp_path, capsys):
    blow = tmp_path / "ex28.blow"
    blow.write_text(dumps(family("ex28").program.to_doc()), encoding="utf-8")
    out = tmp_path / "ex28.resdata"
    assert main(["resolve", str(blow), "-o", str(out)]) == 0
    text = out.read_text(encoding="utf-8")
    assert serialize(parse(text)) == text
    assert parse(text).curvette_matrix[5] == (4, 6, 12, 14, 15, 30)
    # the file feeds the other commands
    code, body, _ = run(capsys, ["monodromy", str(out)])
    assert code == 0 and json.loads(body)["eigenvalue_orders"] == [1, 6, 10, 12, 30]


def test_form_file(tmp_path, capsys):
    form = tmp_path / "w.form"
    form.write_text('{"terms": [{"host": "E1", "m": 1}]}', encoding="utf-8")
    code, body, _ = run(capsys, ["zeta", "--fixture", "cusp", "--form", str(form)])
    assert code == 0
    assert {"s0": "-7/6", "order": 1, "leading": "-7/12"} in json.loads(body)["poles"]


def test_exit_codes(tmp_path, capsys):
    assert run(capsys, ["realize", "--fixture", "cusp", "--target", "1/7"])[0] == 3
    code, _, err = run(capsys, ["realize", "--fixture", "cusp", "--target", "0", "--radius", "0"])
    assert code == 4 and json.loads(err)["error"]["kind"] == "radius-exhausted"
    bad = tmp_path / "bad.resdata"
    bad.write_text('{"ambient_dim": 2,', encoding="utf-8")
    code, _, err = run(capsys, ["zeta", str(bad)])
    assert code == 2 and "line" in json.loads(err)["error"]["message"]
    invalid = tmp_path / "invalid.resdata"
    doc = json.loads(serialize(family("cusp").rd))
    doc["components"].append({"id": "C9", "kind": "curvette", "N": 1, "nu": 1})
    invalid.write_text(json.dumps(doc), encoding="utf-8")
    code, _, err = run(capsys, ["zeta", str(invalid)])
    assert code == 2 and "curvette with nonzero N" in err
    assert run(capsys, ["zeta", "--family", "pq", "--params", "2,4"])[0] == 2
    assert run(capsys, ["zeta", "--fixture", "cusp", "--family", "pq"])[0] == 2
    assert run(capsys, ["zeta", str(tmp_path / "missing.resdata")])[0] == 2


def test_global_requires_global_data(capsys):
    code, _, err = run(capsys, ["zeta", "--fixture", "cusp", "--global"])
    assert code == 2 and "chi_global" in err


def test_fixture_materialization(tmp_path, capsys):
    assert main(["fixtures", "--out", str(tmp_path)]) == 0
    capsys.readouterr()
    assert (tmp_path / "ex28.resdata").exists() and (tmp_path / "ex28.blow").exists()
    assert (tmp_path / "fermat-5.resdata").exists() and not (tmp_path / "fermat-5.blow").exists()
    for path in tmp_path.glob("*.resdata"):
        text = path.read_text(encoding="utf-8")
        assert serialize(parse(text)) == text


def test_pretty_output(capsys):
    code, out, _ = run(capsys, ["zeta", "--fixture", "cusp", "--pretty"])
    assert code == 0 and out == "dx: (5+4s)/((1+s)(5+6s))\n"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "monozeta", "monodromy", "--fixture", "cusp"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["eigenvalue_orders"] == [1, 6]
