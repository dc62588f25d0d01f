from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from diffclass.cli import main

FAST = ["--max-degree", "3", "--max-n", "2", "--max-denom-power", "2", "--darboux-degree", "2"]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_examples_listing(capsys):
    code, out, _ = run(["examples"], capsys)
    assert code == 0 and out.split() == ["order0", "order1", "order2", "riccati", "vdp"]


@pytest.mark.parametrize("name, order", [("order0", 0), ("order1", 1), ("order2", 2), ("riccati", 3), ("vdp", None)])
def test_classify_examples_json(name, order, capsys):
    code, out, _ = run(["classify", "--example", name, *FAST], capsys)
    assert code == 0
    assert json.loads(out)["verdict"]["order"] == order


def test_classify_file_and_stdin(tmp_path, capsys, monkeypatch):
    path = tmp_path / "sys.txt"
    path.write_text("x1' = 1\nx2' = 2*x1\n")
    code, out, _ = run(["classify", str(path), "--human", *FAST], capsys)
    assert code == 0 and "omega = -x1^2 + x2" in out
    code2, out2, _ = run(["classify", "--input", str(path), *FAST], capsys)
    assert code2 == 0 and json.loads(out2)["verdict"]["order"] == 0
    monkeypatch.setattr(sys, "stdin", io.StringIO("x1' = 1; x2' = x1*x2"))
    code3, out3, _ = run(["classify", "-", *FAST], capsys)
    assert code3 == 0 and json.loads(out3)["verdict"]["order"] == 1


def test_json_output_is_byte_identical(capsys):
    _, a, _ = run(["classify", "--example", "riccati", *FAST], capsys)
    _, b, _ = run(["classify", "--example", "riccati", *FAST], capsys)
    assert a == b


@pytest.mark.parametrize(
    "argv, fragment",
    [
        (["classify", "--input", "-"], None),
        (["classify", "/no/such/file"], "No such file"),
        (["classify", "--example", "nope"], "no bundled example"),
        (["classify"], "exactly one"),
        (["classify", "--example", "vdp", "--max-degree", "0"], "positive"),
        (["classify", "--example", "vdp", "--series-order", "0"], "positive"),
    ],
)
def test_usage_errors_exit_2(argv, fragment, capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("x1' = 0; x2' = x1"))
    code, _, err = run(argv, capsys)
    assert code == 2
    assert err.startswith("diffclass: ")
    if fragment:
        assert fragment in err
    else:
        assert "parse error: line 1, column 1" in err


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify", "--bogus"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "diffclass", "classify", "--example", "order1", "--human", *FAST],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert "a = x2, n = -1" in proc.stdout
