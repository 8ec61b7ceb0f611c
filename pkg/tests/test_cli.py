import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cqlax import cli
from cqlax.report import read_csv

ALL = [(g, c) for g, c in cli.COMMANDS]
FAST = [gc for gc in ALL if gc != ("lsp", "two-term")]


def run(tmp_path, *argv):
    return cli.main([*argv, "--out", str(tmp_path)])


@pytest.mark.parametrize("group,cmd", ALL)
def test_every_command_passes_with_defaults(tmp_path, group, cmd, capsys):
    assert run(tmp_path, group, cmd, "--format", "json,csv,svg") == cli.EXIT_PASS
    rep = json.loads((tmp_path / f"{group}-{cmd}.json").read_text())
    assert rep["passed"] and rep["command"] == f"{group} {cmd}"
    assert "wall" not in json.dumps(rep)
    assert "wall time" in capsys.readouterr().out


@pytest.mark.parametrize("argv,code", [
    ([], cli.EXIT_ERROR),
    (["poly"], cli.EXIT_ERROR),
    (["poly", "nope"], cli.EXIT_ERROR),
    (["susy", "vq", "--family", "morse"], cli.EXIT_ERROR),
    (["susy", "vq", "--omega", "abc"], cli.EXIT_ERROR),
    (["susy", "vq", "--family", "pt", "--omega", "1"], cli.EXIT_ERROR),
    (["susy", "vq", "--n-points", "3"], cli.EXIT_ERROR),
    (["susy", "vq", "--tol-override", "eigen"], cli.EXIT_ERROR),
    (["susy", "vq", "--tol-override", "bogus=1"], cli.EXIT_ERROR),
    (["susy", "vq", "--format", "pdf"], cli.EXIT_ERROR),
    (["susy", "vq", "--config", "/nonexistent.json"], cli.EXIT_ERROR),
    (["bogus-group"], cli.EXIT_ERROR),
    (["susy", "vq", "--family", "hydrogen", "--l", "1", "--N", "1"], cli.EXIT_ERROR),
    (["corr", "vc", "--k3-sign", "-1"], cli.EXIT_TOLERANCE),
    (["corr", "vq", "--k1", "0.7"], cli.EXIT_TOLERANCE),
    (["susy", "vq", "--tol-override", "eigen=1e-30"], cli.EXIT_TOLERANCE),
    (["corr", "vc", "--k3-sign", "1"], cli.EXIT_PASS),
    (["susy", "defect", "--family", "pt-hyperbolic"], cli.EXIT_PASS),
    (["acceptance", "--criteria", "99"], cli.EXIT_ERROR),
    (["acceptance", "--criteria", "x"], cli.EXIT_ERROR),
])
def test_exit_codes(tmp_path, argv, code):
    assert run(tmp_path, *argv) == code


@settings(max_examples=25)
@given(st.sampled_from(FAST), st.lists(st.sampled_from(["--format", "--x-min", "--tol-override", "--bogus",
                                                          "--family", "csv", "1e-3", "-2", "zz", "nan"]),
                                       max_size=3))
def test_exit_code_always_documented(tmp_path_factory, gc, extra):
    out = tmp_path_factory.mktemp("fuzz")
    code = cli.main([*gc, *extra, "--out", str(out)])
    assert code in (cli.EXIT_PASS, cli.EXIT_ERROR, cli.EXIT_TOLERANCE)


def test_malformed_config_exits_1_with_position(tmp_path, capsys):
    p = tmp_path / "c.json"
    p.write_text('{"params": {"omega": 1.0,,}}')
    assert run(tmp_path, "susy", "vq", "--config", str(p)) == cli.EXIT_ERROR
    assert "line 1 column" in capsys.readouterr().err


def test_config_file_and_flag_precedence(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"command": "susy vq", "family": "ho", "params": {"omega": 2.0, "l": 0.5}}))
    assert run(tmp_path, "susy", "vq", "--config", str(p), "--l", "1.5") == cli.EXIT_PASS
    cfg = json.loads((tmp_path / "susy-vq.json").read_text())["config"]
    assert cfg["params"]["omega"] == 2.0 and cfg["params"]["l"] == 1.5
    assert cfg["provenance"]["params.omega"] == "file" and cfg["provenance"]["params.l"] == "flag"


def test_two_term_example(tmp_path):
    assert run(tmp_path, "lsp", "two-term", "--n", "0", "--l", "1", "--omega", "1", "--format", "json,csv") == 0
    res = json.loads((tmp_path / "lsp-two-term.json").read_text())["results"]
    assert res["E"] == 3.0
    assert res["ratio"][0] == 0.0 and res["ratio"][1] == pytest.approx(-2 ** -0.5, rel=1e-15)
    meta, cols = read_csv(tmp_path / "lsp-two-term.csv")
    assert set(cols) == {"x", "re", "im"}


def test_outputs_are_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert cli.main(["corr", "master", "--out", str(d), "--format", "json,csv,svg"]) == 0
    for f in a.iterdir():
        assert f.read_bytes() == (b / f.name).read_bytes()


def test_integrate_then_zcc_from_csv(tmp_path):
    assert run(tmp_path, "lax", "integrate", "--family", "piv", "--format", "csv") == 0
    csv = tmp_path / "lax-integrate.csv"
    assert run(tmp_path, "lax", "zcc", "--family", "piv", "--trajectory", str(csv)) == 0
    assert run(tmp_path, "lax", "zcc", "--family", "ho", "--trajectory", str(csv)) == cli.EXIT_ERROR


def test_no_color_plain_output(tmp_path):
    env = {"NO_COLOR": "1", "PATH": "/usr/bin:/bin"}
    p = subprocess.run([sys.executable, "-m", "cqlax", "susy", "k1", "--out", str(tmp_path)],
                       capture_output=True, text=True, env=env)
    assert p.returncode == 0
    assert "\033[" not in p.stdout and "PASS" in p.stdout


def test_colour_only_on_tty(monkeypatch):
    class Tty:
        def isatty(self):
            return True
    monkeypatch.delenv("NO_COLOR", raising=False)
    assert cli._colour("PASS", True, Tty()).startswith("\033[32m")
    monkeypatch.setenv("NO_COLOR", "1")
    assert cli._colour("PASS", True, Tty()) == "PASS"
