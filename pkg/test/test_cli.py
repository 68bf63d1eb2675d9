import json

import pytest

from main import create_argument_parser, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parser_lists_every_command():
    parser = create_argument_parser()
    help_text = parser.format_help()
    for command in ("caps", "embed-lower", "obstruction", "reduce", "find-classes", "staircase", "blocking",
                    "acc", "acc-inv", "min-obstructing-k", "verify-b15", "plot", "symmetry"):
        assert command in help_text


def test_usage_errors_exit_with_one(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["caps"])
    assert excinfo.value.code == 1
    code, _, err = run(capsys, "caps", "--b", "x", "--count", "3")
    assert code == 1
    assert "✗" in err


def test_domain_errors_exit_with_two(capsys):
    assert run(capsys, "acc", "--b", "1")[0] == 2
    assert run(capsys, "symmetry", "--map", "Psi", "--z", "6")[0] == 2
    assert run(capsys, "reduce", "--class", "2,0;[1^4]")[0] == 2


def test_caps_to_stdout(capsys):
    code, out, _ = run(capsys, "caps", "--b", "1/5", "--scale", "5", "--count", "25")
    assert code == 0
    payload = json.loads(out)
    assert payload["caps"][5] == "10"
    assert payload["caps"][19] == "24"


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "--class", "48,14;111/19")
    assert code == 0
    assert out.strip().splitlines()[-1] == "FAKE"
    code, out, _ = run(capsys, "reduce", "--class", "2,0;[1^5]", "--log")
    lines = out.strip().splitlines()
    assert "0 | 2 | 1^5" in lines
    assert lines[-1] == "EXCEPTIONAL"


def test_accumulation_commands(capsys):
    assert run(capsys, "acc", "--b", "1/5")[1].strip() == "6"
    assert run(capsys, "acc", "--b", "0")[1].strip() == "7/2+3/2*sqrt(5)"
    assert run(capsys, "acc-inv", "--z", "6", "--branch", "U")[1].strip() == "5/11"
    assert run(capsys, "acc-inv", "--z", "6", "--branch", "L")[1].strip() == "1/5"
    assert run(capsys, "symmetry", "--map", "Phi", "--z", "7")[1].strip() == "41/7"


def test_symmetry_maps_a_class_center(capsys):
    assert run(capsys, "symmetry", "--map", "Sh", "--class", "4,3;8")[1].strip() == "47/8"
    assert run(capsys, "symmetry", "--map", "Phi", "--class", "3,2;6")[1].strip() == "6"
    with pytest.raises(SystemExit):
        main(["symmetry", "--map", "Sh", "--z", "8", "--class", "4,3;8"])


def test_lower_bound_pipeline(tmp_path, capsys):
    caps = tmp_path / "caps.json"
    lower = tmp_path / "lower.csv"
    figure = tmp_path / "figure.svg"
    code, out, err = run(capsys, "caps", "--b", "0", "--count", "50", "--out", str(caps))
    assert code == 0
    assert out == ""
    assert err.strip().endswith(f"capacities to {caps}")
    assert "✓ Wrote" in err
    code, out, err = run(capsys, "embed-lower", "--caps", str(caps), "--zmin", "4", "--zmax", "5", "--step", "1",
                     "--with-volume", "--out", str(lower))
    assert code == 0
    assert out == ""
    assert "✓ Wrote" in err
    assert lower.read_text(encoding="utf-8") == "z,c_lower,volume\n4,2,2\n5,2.5,2.23606797749979\n"
    code, out, err = run(capsys, "plot", "--in", str(lower), "--out", str(figure))
    assert code == 0
    assert out == ""
    assert err.strip().endswith(f"✓ Wrote {figure}")
    assert figure.read_bytes().startswith(b"<?xml")


def test_obstruction_by_index(capsys):
    code, out, _ = run(capsys, "obstruction", "--k", "6", "--b", "0", "--zmin", "6", "--zmax", "6", "--step", "1")
    assert code == 0
    assert out == 'z,"mu (3,2;w(6))"\n6,2\n'


def test_min_obstructing_k(tmp_path, capsys):
    caps = tmp_path / "caps.json"
    run(capsys, "caps", "--b", "5/11", "--count", "10", "--out", str(caps))
    assert run(capsys, "min-obstructing-k", "--b", "5/11", "--caps", str(caps))[1].strip() == "6"


def test_staircase_listing(capsys):
    code, out, _ = run(capsys, "staircase", "--spec", "U:u:0", "--kmax", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "0  (14,9;4w(29/4))"
    assert lines[-2].startswith("b_inf = ")
    assert lines[-1].startswith("a_inf = ")


def test_staircase_extension_row(capsys):
    out = run(capsys, "staircase", "--spec", "L:u:1", "--kmax", "0")[1]
    assert out.splitlines()[0].startswith("-1  ")


def test_staircase_one_third(capsys):
    out = run(capsys, "staircase", "--one-third", "2", "--kmax", "3")[1]
    assert out.strip().splitlines()[-1] == "3  (74,24;29w(169/29))"


def test_staircase_verify(capsys):
    code, out, _ = run(capsys, "staircase", "--spec", "U:u:0", "--kmax", "2", "--verify")
    assert code == 0
    assert json.loads(out)["is_valid"] is True
    assert run(capsys, "staircase", "--spec", "L:l:0", "--kmax", "2", "--verify")[0] == 2


def test_blocking(capsys):
    code, out, _ = run(capsys, "blocking", "--family", "U", "--n", "0")
    assert code == 0
    report = json.loads(out)
    assert report["klass"] == "(3,2;w(6))"
    assert report["decimals"]["z_low"] == "5.85410196624968"
    assert report["exact"] is True
    assert run(capsys, "blocking", "--family", "U")[0] == 1


def test_find_classes(capsys):
    out = run(capsys, "find-classes", "--k", "6")[1]
    assert "(3,2;w(6))  [6]" in out
    assert "(6,6)  no quasi-perfect center" in out
    out = run(capsys, "find-classes", "--cf", "[5;1,6]", "--ending", "4")[1]
    assert out.strip() == "(73,20;29w(170/29))  [5;1,6,4]"
    out = run(capsys, "find-classes", "--range", "5", "7", "--qmax", "2")[1]
    assert "(3,2;w(6))  [6]" in out
    assert run(capsys, "find-classes", "--range", "5", "7")[0] == 1


def test_verify_b15(capsys):
    code, out, _ = run(capsys, "verify-b15", "--tmax", "60")
    assert code == 0
    assert json.loads(out)["passed"] is True
