import subprocess
import sys

import pytest

from eqloc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "argv,expected",
    [
        (["integrate", "--builtin", "cpn:2", "--chern-power"], "result = 1\n"),
        (["integrate", "--builtin", "s2", "--scale", "1", "--power", "1"], "result = 2\n"),
        (["integrate", "--builtin", "s2", "--scale", "3/2", "--power", "1"], "result = 3\n"),
        (["integrate", "--builtin", "cpn:1", "--power", "2"], "result = t0 + t1\n"),
        (["volume", "--builtin", "s2", "--scale", "1"], "2\n"),
        (["volume", "--builtin", "product:s2,s2"], "4\n"),
        (["volume", "--builtin", "cpn:1"], "1\n"),
        (["volume", "--builtin", "cpn:3"], "1/6\n"),
        (["chi", "--builtin", "s2"], "2\n"),
        (["chi", "--builtin", "cpn:3"], "4\n"),
        (["chi", "--builtin", "product:s2,cpn:1"], "4\n"),
        (["dh", "--builtin", "cpn:2", "--order", "2"], "0!: 0\n1!: 0\n2!: 1/2\n"),
        (["dh", "--builtin", "gaussian", "--closed-form"], "result = 1 / (t0)\n"),
    ],
)
def test_outputs(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    assert out == expected


def test_contributions(capsys):
    code, out, _ = run(capsys, "integrate", "--builtin", "cpn:1", "--power", "1", "--contributions")
    assert code == 0
    assert out.splitlines() == ["result = 1", "f0: t0 / (t0 - t1)", "f1: -t1 / (t0 - t1)"]


def test_scale_two_pi(capsys):
    code, out, _ = run(capsys, "integrate", "--builtin", "s2", "--power", "1", "--scale-two-pi")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "result = 2"
    assert lines[1].startswith("4π ≈ 12.566370614")
    code, out, _ = run(capsys, "volume", "--builtin", "product:s2,s2", "--scale-two-pi")
    assert out.splitlines()[1].startswith("16π^2 ≈ 157.91367")


def test_scale_two_pi_needs_s2(capsys):
    code, _, err = run(capsys, "volume", "--builtin", "cpn:2", "--scale-two-pi")
    assert code == 2 and "s2" in err


def test_tampered_model_exit_3(capsys, fixtures_dir):
    code, out, err = run(capsys, "integrate", "--model", str(fixtures_dir / "tampered_cp1.json"), "--power", "1")
    assert code == 3
    assert out == ""
    assert "remainder = (t0^2 - t0*t1 - t1^2) / (t0 - 2*t1)*(t0 - t1)" in err


def test_zero_weight_exit_2(capsys, fixtures_dir):
    code, out, err = run(capsys, "chi", "--model", str(fixtures_dir / "zero_weight.json"))
    assert code == 2 and out == ""
    assert "f1" in err and "zero" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["chi", "--builtin", "torus"],
        ["chi", "--model", "/nonexistent/model.json"],
        ["integrate", "--builtin", "s2", "--power", "1", "--chern-power"],
        ["integrate", "--builtin", "s2"],
        ["integrate", "--builtin", "s2", "--scale", "x", "--power", "1"],
        ["chi"],
        ["frobnicate", "--builtin", "s2"],
    ],
)
def test_input_errors_exit_2(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 2
    assert out == ""


def test_bad_json_exit_2(capsys, fixtures_dir):
    code, _, err = run(capsys, "volume", "--model", str(fixtures_dir / "bad_json.json"))
    assert code == 2 and "line 4" in err


def test_class_file(capsys, fixtures_dir):
    code, out, _ = run(
        capsys,
        "integrate",
        "--model", str(fixtures_dir / "cp2_line_component.json"),
        "--class-file", str(fixtures_dir / "cp2_line_classes.json"),
        "--contributions",
    )
    assert code == 0
    assert out.splitlines() == ["result = 1", "L: 1 / 1", "f2: 0 / 1"]


def test_class_file_errors(capsys, tmp_path, fixtures_dir):
    bad = tmp_path / "bad.json"
    bad.write_text('{"classes": {"L": ["t0^2", "2*t7"], "f2": "0"}}')
    code, _, err = run(
        capsys, "integrate", "--model", str(fixtures_dir / "cp2_line_component.json"), "--class-file", str(bad)
    )
    assert code == 2 and "classes.L" in err
    missing = tmp_path / "missing.json"
    missing.write_text('{"classes": {"L": ["t0^2", "2*t0"]}}')
    code, _, err = run(
        capsys, "integrate", "--model", str(fixtures_dir / "cp2_line_component.json"), "--class-file", str(missing)
    )
    assert code == 2 and "f2" in err


def test_class_file_inconsistent_exit_3(capsys, tmp_path):
    f = tmp_path / "cls.json"
    f.write_text('{"classes": {"f0": "t0", "f1": "0"}}')
    code, _, err = run(capsys, "integrate", "--builtin", "cpn:1", "--class-file", str(f))
    assert code == 3 and "remainder" in err


def test_check_builtin_file_passes(capsys, fixtures_dir):
    code, out, _ = run(capsys, "check", "--model", str(fixtures_dir / "s2.json"))
    assert code == 0
    assert "FAIL" not in out
    assert out.splitlines()[0] == "validation: PASS"


def test_check_zero_weight_fails_validation(capsys, fixtures_dir):
    code, out, _ = run(capsys, "check", "--model", str(fixtures_dir / "zero_weight.json"))
    assert code == 1
    assert out.startswith("validation: FAIL")


def test_check_tampered_fails_polynomiality(capsys, fixtures_dir):
    code, out, _ = run(capsys, "check", "--model", str(fixtures_dir / "tampered_cp1.json"))
    assert code == 1
    assert "polynomiality of power 1: FAIL" in out


def test_check_component_model_skips(capsys, fixtures_dir):
    code, out, _ = run(capsys, "check", "--model", str(fixtures_dir / "cp2_line_component.json"))
    assert code == 0
    assert "SKIP" in out


@pytest.mark.parametrize("spec", ["s2", "cpn:1", "cpn:2", "cpn:3", "product:s2,cpn:1", "product:s2,s2"])
def test_output_is_deterministic(capsys, spec):
    outs = []
    for _ in range(2):
        text = ""
        for cmd in (["integrate", "--power", "3", "--contributions"], ["dh", "--order", "3"], ["chi"], ["volume"]):
            text += run(capsys, cmd[0], "--builtin", spec, *cmd[1:])[1]
        outs.append(text)
    assert outs[0] == outs[1] and outs[0]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "eqloc", "integrate", "--builtin", "cpn:2", "--chern-power"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "result = 1\n"
