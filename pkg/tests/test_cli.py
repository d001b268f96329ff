import io
import json
import shutil
import subprocess
from importlib import resources

import jsonschema
import pytest

from ffk.cli import run

COMMANDS = {
    "field-info": ["--p", "3", "--e", "2"],
    "irreducibles": ["--p", "5", "--n", "2", "--max-degree", "2"],
    "hensel-root": ["--p", "5", "--poly", "t^2+2", "--n", "2", "--prec", "6"],
    "place-val": ["--p", "5", "--r", "t^2/(t-1)", "--place", "t"],
    "weak-approx": ["--p", "5", "--constraint", "t:0:2", "--constraint", "t-1:1:1"],
    "place-split": ["--p", "5", "--place", "inf", "--poly", "t^2+2", "--n", "2"],
    "kochen-eval": ["--p", "5", "--place", "t", "--a", "1/t"],
    "kochen-check": ["--p", "5", "--place", "t", "--samples", "50", "--seed", "3"],
    "kochen-represent": ["--p", "5", "--place", "t", "--levels", "t^2+2", "--r", "1/t"],
    "tower-norm": ["--p", "5", "--n", "2", "--levels", "t^2+2", "--x", "t*u1"],
    "tower-enumerate": ["--p", "5", "--n", "2", "--levels", "t^2+2", "--N", "1"],
    "tower-disc": ["--p", "7", "--poly", "t^3+3", "--n", "3"],
    "csa-invariants": ["--p", "5", "--a", "2", "--b", "t"],
    "csa-pair": ["--p", "5", "--place", "t", "--q1", "inf", "--q2", "t-1"],
    "csa-sample": ["--p", "5", "--a", "2", "--b", "t", "--count", "20", "--seed", "1"],
    "csa-split": ["--p", "5", "--x", "(t^2-t+1)/(t-1)", "--delta-a", "t,inf", "--delta-b", "t,t-1"],
}


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def schema(name):
    return json.loads(resources.files("ffk").joinpath("schemas", f"{name}.json").read_text())


@pytest.mark.parametrize("command", sorted(COMMANDS))
def test_json_output_matches_schema(command):
    code, out, err = call(command, *COMMANDS[command], "--format", "json")
    assert code == 0, err
    data = json.loads(out)
    assert data["command"] == command
    jsonschema.validate(data, schema(command))
    assert err == ""


@pytest.mark.parametrize("command", sorted(COMMANDS))
def test_text_output_and_determinism(command):
    first = call(command, *COMMANDS[command])
    assert first[0] == 0 and first[1].strip()
    assert call(command, *COMMANDS[command]) == first


def test_examples():
    code, out, _ = call("hensel-root", "--p", "5", "--poly", "t^2+2", "--n", "2", "--prec", "6", "--format", "text")
    assert (code, out) == (0, "t + t^-1 + 2*t^-3 + O(t^-5)\n")
    code, out, _ = call("csa-invariants", "--p", "5", "--a", "2", "--b", "t", "--l", "2", "--format", "json")
    profile = {(e["place"], e["num"], e["den"]) for e in json.loads(out)["profile"]}
    assert profile == {("t", 1, 2), ("inf", 1, 2)}
    code, out, _ = call("tower-enumerate", "--p", "5", "--n", "2", "--levels", "t^2+2", "--N", "5", "--count-only")
    assert (code, out.strip()) == (0, "125")


def test_text_values_reparse():
    from ffk.ffield import field
    from ffk.laurent import parse_series
    from ffk.poly import parse_ratfunc

    _, out, _ = call(*["hensel-root"] + COMMANDS["hensel-root"])
    assert str(parse_series(field(5), out.strip())) == out.strip()
    _, out, _ = call("weak-approx", "--p", "5", "--constraint", "t:0:2", "--constraint", "t-1:1:1", "--format", "json")
    value = json.loads(out)["y"]
    assert str(parse_ratfunc(field(5), value)) == value


@pytest.mark.parametrize(
    "argv,code",
    [
        (["place-val", "--p", "5", "--r", "t^^2", "--place", "t"], 2),
        (["place-val", "--p", "5", "--r", "t"], 2),
        (["no-such-command"], 2),
        (["place-val", "--p", "5", "--r", "1/(t-t)", "--place", "t"], 3),
        (["place-val", "--p", "5", "--r", "t", "--place", "t^2+4"], 3),
        (["csa-split", "--p", "5", "--x", "1/t", "--delta-a", "t,inf", "--delta-b", "t,t-1"], 3),
        (["hensel-root", "--p", "5", "--poly", "t^3+2", "--n", "2"], 4),
        (["csa-invariants", "--p", "5", "--a", "2", "--b", "t", "--l", "3"], 4),
        (["field-info", "--p", "2"], 4),
    ],
)
def test_exit_codes(argv, code):
    got, out, err = call(*argv)
    assert got == code
    assert out == ""
    assert err.strip()


def test_figures_written(tmp_path):
    for command, extra in [
        ("hensel-root", COMMANDS["hensel-root"]),
        ("kochen-check", COMMANDS["kochen-check"]),
        ("tower-enumerate", COMMANDS["tower-enumerate"]),
        ("csa-invariants", COMMANDS["csa-invariants"]),
    ]:
        target = tmp_path / f"{command}.png"
        code, _, err = call(command, *extra, "--figure", str(target))
        assert code == 0, err
        assert target.stat().st_size > 0


@pytest.mark.skipif(shutil.which("ffk") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["ffk", "tower-disc", "--p", "7", "--poly", "t^3+3", "--n", "3", "--format", "json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    jsonschema.validate(json.loads(proc.stdout), schema("tower-disc"))
    proc = subprocess.run(["ffk", "field-info", "--p", "4"], capture_output=True, text=True, check=False)
    assert proc.returncode == 4 and proc.stderr and not proc.stdout
