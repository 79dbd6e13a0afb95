import json
from pathlib import Path

import pytest

from reflectron.cli import RunConfig, emit_report, main

FIXTURE = Path(__file__).parent / "data" / "f5_synthetic.csv"


def run_main(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["cubic-tab", "--xmax", "0"],
        ["classgroup"],
        ["classgroup", "--d", "45"],
        ["classgroup", "--d", "-23", "--dmax", "100"],
        ["predict", "--d", "-23"],
        ["predict", "--ell", "4", "--d", "-23"],
        ["predict", "--ell", "7", "--corollary5", "--d", "-3"],
        ["corollary5", "--d", "-15"],
        ["check-table", "--table", "x.csv", "--d", "-3"],
        ["check-table", "--table", "/no/such/file.csv", "--ell", "5", "--d", "-3"],
        ["classgroup", "--d", "-23", "--format", "xml"],
    ],
)
def test_bad_invocations_exit_1(capsys, argv):
    assert main(argv) == 1
    captured = capsys.readouterr()
    assert captured.err.startswith(("usage error:", "error:"))


def test_classgroup_row(capsys):
    code, out = run_main(capsys, ["classgroup", "--d", "-23"])
    assert code == 0
    assert out == "D,h,divisors,narrow\n-23,3,3,false\n"


def test_classgroup_range(capsys):
    code, out = run_main(capsys, ["classgroup", "--dmax", "8"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "D,h,divisors,narrow"
    assert lines[1] == "-3,1,1,false"
    # positive discriminants report the narrow group
    assert "8,1,1,true" in lines
    assert "5,1,1,true" in lines


def test_cubic_tab_output(capsys):
    code, out = run_main(capsys, ["cubic-tab", "--xmax", "100"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "disc,count"
    assert lines[1] == "-23,1"
    assert "49,1" in lines and "81,1" in lines


def test_verify_on_rows(capsys):
    code, out = run_main(capsys, ["verify-on", "--dmax", "24"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "ell,D,N3_Dstar,N3_27D,rhs,verdict"
    assert "3,-23,0,1,1,pass" in lines
    assert "3,5,0,1,1,pass" in lines
    assert all(line.endswith("pass") for line in lines[1:])
    assert not any(",-3," in line for line in lines)


def test_predict_json(capsys):
    code, out = run_main(capsys, ["predict", "--ell", "3", "--d", "-23"])
    assert code == 0
    rows = json.loads(out)
    assert rows == [
        {
            "ell": 3,
            "D": -23,
            "g": 2,
            "dl_count": 1,
            "lhs": 1,
            "targets": [{"r2": 0, "disc": 69}, {"r2": 0, "disc": 621}],
            "star_required": False,
        }
    ]


def test_predict_csv(capsys):
    code, out = run_main(
        capsys, ["predict", "--ell", "3", "--d", "-23", "--format", "csv"]
    )
    assert code == 0
    assert out == (
        "ell,D,g,dl_count,lhs,target1,target2,star_required\n"
        "3,-23,2,1,1,69,621,false\n"
    )


def test_corollary5_json(capsys):
    code, out = run_main(capsys, ["corollary5", "--d", "-47"])
    assert code == 0
    rows = json.loads(out)
    assert rows == [
        {
            "ell": 5,
            "D": -47,
            "lhs": 1,
            "targets": [
                {"r2": 0, "disc": 276125},
                {"r2": 0, "disc": 6903125},
                {"r2": 0, "disc": 172578125},
            ],
        }
    ]


def test_corollary5_csv(capsys):
    code, out = run_main(capsys, ["corollary5", "--d", "29", "--format", "csv"])
    assert code == 0
    assert out == (
        "ell,D,lhs,target1,target2,target3\n"
        "5,29,2,105125,2628125,65703125\n"
    )


def test_predict_flag_matches_corollary5_command(capsys):
    _, via_flag = run_main(
        capsys, ["predict", "--ell", "5", "--corollary5", "--dmax", "30"]
    )
    _, via_command = run_main(capsys, ["corollary5", "--dmax", "30"])
    assert via_flag == via_command
    assert all(row["D"] % 5 for row in json.loads(via_command))


def test_check_table_fixture_passes(capsys):
    code, out = run_main(
        capsys,
        ["check-table", "--table", str(FIXTURE), "--corollary5", "--dmax", "100"],
    )
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 50
    assert all(row["verdict"] == "pass" for row in rows)
    by_d = {row["D"]: row for row in rows}
    assert (by_d[-47]["expected"], by_d[-47]["observed"]) == (1, 1)
    assert (by_d[-11]["expected"], by_d[-11]["observed"]) == (0, 0)


def test_check_table_missing_field_exits_2(capsys, tmp_path):
    doctored = tmp_path / "doctored.csv"
    lines = FIXTURE.read_text().splitlines()
    doctored.write_text("\n".join(l for l in lines if "f5-d-47-" not in l) + "\n")
    code, out = run_main(
        capsys,
        ["check-table", "--table", str(doctored), "--corollary5", "--dmax", "100"],
    )
    assert code == 2
    rows = json.loads(out)
    bad = [row for row in rows if row["verdict"] == "fail"]
    assert [row["D"] for row in bad] == [-47]
    assert bad[0]["missing"] == [276125, 6903125, 172578125]


def test_check_table_csv_columns(capsys):
    code, out = run_main(
        capsys,
        ["check-table", "--table", str(FIXTURE), "--corollary5", "--d", "-47",
         "--format", "csv"],
    )
    assert code == 0
    assert out == (
        "mode,ell,D,expected,observed,verdict\n"
        "exact,5,-47,1,1,pass\n"
    )


def test_workers_do_not_change_output(capsys, tmp_path, monkeypatch):
    paths = [tmp_path / name for name in ("w1.csv", "w3.csv", "env.csv")]
    assert main(["cubic-tab", "--xmax", "2000", "--workers", "1", "--out", str(paths[0])]) == 0
    assert main(["cubic-tab", "--xmax", "2000", "--workers", "3", "--out", str(paths[1])]) == 0
    monkeypatch.setenv("REFLECTRON_WORKERS", "2")
    assert main(["cubic-tab", "--xmax", "2000", "--out", str(paths[2])]) == 0
    capsys.readouterr()
    first = paths[0].read_bytes()
    assert first == paths[1].read_bytes() == paths[2].read_bytes()


def test_out_file_matches_stdout(capsys, tmp_path):
    code, out = run_main(capsys, ["classgroup", "--dmax", "50"])
    assert code == 0
    path = tmp_path / "report.csv"
    assert main(["classgroup", "--dmax", "50", "--out", str(path)]) == 0
    capsys.readouterr()
    assert path.read_text() == out


def test_emit_report():
    assert emit_report([], "json") == "[]\n"
    assert emit_report([{"a": 1}], "json") == '[\n  {\n    "a": 1\n  }\n]\n'
    assert emit_report([{"a": True, "b": 0}], "csv") == "a,b\ntrue,0\n"
    assert emit_report([{"a": 'x,"y"'}], "csv") == 'a\n"x,""y"""\n'
    assert emit_report([{"a": 1, "b": 2}], "csv", columns=["b", "a"]) == "b,a\n2,1\n"
    with pytest.raises(ValueError):
        emit_report([], "yaml")


def test_runconfig_validation():
    for bad in (
        dict(command="frobnicate"),
        dict(command="classgroup", workers=0),
        dict(command="cubic-tab", xmax=-5),
        dict(command="classgroup", dmax=0),
        dict(command="classgroup", format="xml"),
    ):
        with pytest.raises(ValueError):
            RunConfig(**bad)
    assert RunConfig(command="classgroup", dmax=100).workers == 1
