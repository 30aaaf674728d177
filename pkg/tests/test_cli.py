import io
import json
import subprocess
import sys

import pytest

from eichlerkit import config
from eichlerkit.cli import load_expected, run


@pytest.fixture(autouse=True)
def restore_config():
    saved = config.get_config()
    yield
    config.set_config(saved)


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_mh_and_classify(capsys):
    assert call(capsys, "mh", "Q(8)")[:2] == (0, "1\n")
    code, out, _ = call(capsys, "classify", "C(7)")
    assert code == 0 and "status=PC" in out
    code, out, _ = call(capsys, "periodic", "Q(28)")
    assert "FAILS_SFC" in out and "cyclic" in out


def test_json_output_round_trips(capsys):
    code, out, _ = call(capsys, "--format", "json", "classify", "Q8xC2")
    data = json.loads(out)
    assert code == 0 and data["status"] == "FAILS_SFC" and data["mH"] == 2
    code, out, _ = call(capsys, "--format", "json", "chartab", "Q(8)")
    tab = json.loads(out)
    assert tab["degrees"] == [1, 1, 1, 1, 2] and tab["fs_indicators"][-1] == -1


def test_output_is_deterministic(capsys):
    first = call(capsys, "--format", "json", "quotients", "Q8:Q12")
    second = call(capsys, "--format", "json", "quotients", "Q8:Q12")
    assert first == second
    assert json.loads(first[1])["binary_polyhedral"] == ["Q12", "BO"]


def test_mnec_and_eichler_simple(capsys):
    code, out, _ = call(capsys, "mnec", "Q8xC2", "C(1)")
    assert out.split() == ["non-Eichler", "cover:", "true", "minimal:", "false"]
    assert call(capsys, "eichler-simple", "C4.Q8")[1] == "true\n"


def test_stdin(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("Q(12) x C(2)\n"))
    assert call(capsys, "mh", "-")[1] == "2\n"


@pytest.mark.parametrize("argv, code", [
    (["mh", "Q(7)"], 2),
    (["nosuchcommand"], 2),
    (["--order-cap", "0", "mh", "Q(8)"], 2),
    (["classify2", "Q(12)"], 1),
    (["periodic", "Q8xC2"], 1),
    (["gamma", "--depth", "40"], 2),
])
def test_exit_codes(capsys, argv, code):
    assert call(capsys, *argv)[0] == code


@pytest.mark.parametrize("argv", [
    ["--order-cap", "10", "mh", "Q(24)"],
    ["--class-cap", "3", "chartab", "Q(24)"],
])
def test_resource_caps_exit_3(argv):
    # a fresh process, so no cached tables bypass the caps
    res = subprocess.run([sys.executable, "-m", "eichlerkit.cli", *argv],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 3 and "resource limit" in res.stderr


def test_shipped_reference_rows():
    rows = load_expected()
    assert len(rows) == 38
    assert rows["BTxC2"] == {"mnec": [2, 7], "edges": [[1, 5]], "mH": 2, "status": "PC"}


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "eichlerkit.cli", "mh", "BT x BT"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout.strip() == "2"
