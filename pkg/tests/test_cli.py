from importlib import resources
import json
import pathlib
import re

import jsonschema
import pytest

from tameray import cli

GOLDEN = pathlib.Path(__file__).parent / "golden"
SCHEMA = json.loads((resources.files("tameray") / "data" / "certificate.schema.json").read_text())


def run(capsys, *argv):
    code = cli.run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def validate(payload, kind):
    jsonschema.validate(payload, {**SCHEMA, "$ref": f"#/$defs/{kind}"})


# (argv, schema kind)
COMMANDS = [
    (["classgroup", "-d", "-23"], "classgroup"),
    (["classgroup", "-d", "-65"], "classgroup"),
    (["rayclass", "-d", "-1", "-m", "7", "-p", "3"], "rayclass"),
    (["rayclass", "-d", "-23", "-m", "13.1,2.1^2", "-p", "3", "--oracle"], "rayclass"),
    (["find-primes", "--theorem", "s1", "-d", "-23", "-p", "3", "--max-norm", "400"], "find_primes"),
    (["present", "--theorem", "s1", "-d", "-23", "-p", "3", "--q", "151.2"], "certificate"),
    (["present", "--theorem", "s2", "-d", "-1", "-p", "3", "--q", "7", "--q2", "31.1"], "certificate"),
    (["present", "--theorem", "s2", "-d", "-1", "-p", "3", "--q", "7", "--q2", "13.1"], "certificate"),
    (["finite", "--theorem", "3.7", "-d", "-1", "-p", "3", "--q", "7", "--q2", "31.1"], "certificate"),
    (["finite", "--theorem", "3.8", "-d", "-1", "--search"], "certificate"),
    (["finite", "--theorem", "3.9", "-d", "-5", "--q", "3.1"], "certificate"),
    (["verify-example", "5.1"], "report"),
    (["verify-example", "appendix"], "report"),
    (["fetch", "--label", "6.0.141911930944.3"], "fetch"),
]


def _numbers(x):
    if isinstance(x, bool):
        return set()
    if isinstance(x, int):
        return {x}
    if isinstance(x, str):
        return {int(t) for t in re.findall(r"-?\d+", x)}
    if isinstance(x, dict):
        return set().union(*(_numbers(k) | _numbers(v) for k, v in x.items())) if x else set()
    if isinstance(x, (list, tuple)):
        return set().union(*(_numbers(v) for v in x)) if x else set()
    return set()


@pytest.mark.parametrize("argv, kind", COMMANDS, ids=[" ".join(a) for a, _ in COMMANDS])
def test_json_validates_and_agrees_with_text(capsys, argv, kind):
    code, text, _ = run(capsys, *argv)
    assert code == 0
    code, out, _ = run(capsys, *argv, "--json")
    assert code == 0
    payload = json.loads(out)
    validate(payload, kind)
    # every number printed in text mode is a number carried by the JSON payload
    missing = {n for n in _numbers(text) if n not in _numbers(payload) and abs(n) > 1}
    assert not missing, missing


@pytest.mark.parametrize(
    "name, argv",
    [
        ("classgroup_m23", ["classgroup", "-d", "-23"]),
        ("rayclass_m1_7", ["rayclass", "-d", "-1", "-m", "7", "-p", "3"]),
        ("present_s2", ["present", "--theorem", "s2", "-d", "-1", "-p", "3", "--q", "7", "--q2", "31.1", "--json"]),
        ("present_s1", ["present", "--theorem", "s1", "-d", "-23", "-p", "3", "--q", "151.1"]),
    ],
)
def test_golden(capsys, name, argv):
    _, out, _ = run(capsys, *argv)
    assert out == (GOLDEN / f"{name}.txt").read_text()


def test_spec_examples(capsys):
    assert run(capsys, "classgroup", "-d", "-23")[1].strip() == "Z/3"
    code, out, _ = run(capsys, "rayclass", "-d", "-1", "-m", "7", "-p", "3", "--json")
    d = json.loads(out)
    assert d["order"] == 12 and d["p_part"] == [3]
    code, out, _ = run(capsys, "present", "--theorem", "s2", "-d", "-1", "-p", "3", "--q", "7", "--q2", "31", "--json")
    assert code == 0 and json.loads(out)["conclusion"]["order"] == 27


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["present", "--theorem", "s1", "-d", "-23", "-p", "3", "--q", "151"], "--q"),
        (["present", "--theorem", "s1", "-d", "-23", "-p", "3", "--q", "151.3"], "--q"),
        (["present", "--theorem", "s1", "-d", "-23", "-p", "3", "--q", "15"], "--q"),
        (["present", "--theorem", "s1", "-d", "-23", "-p", "3", "--q", "abc"], "--q"),
        (["present", "--theorem", "s2", "-d", "-1", "-p", "3", "--q", "7"], "--q2"),
        (["classgroup", "-d", "-12"], "-d"),
        (["classgroup", "-d", "7"], "-d"),
        (["rayclass", "-d", "-1", "-m", "3", "-p", "3"], "-p"),
        (["rayclass", "-d", "-1", "-m", "5.1,5.1"], "-m"),
        (["finite", "--theorem", "3.9", "-d", "-5", "--q", "3"], "--q"),
        (["classgroup", "-d", "-23", "--threads", "0"], "--threads"),
    ],
)
def test_usage_errors_name_the_flag(capsys, argv, flag):
    code, _, err = run(capsys, *argv)
    assert code == 1
    assert flag in err


def test_usage_error_for_bad_subcommand_and_p(capsys):
    assert run(capsys, "bogus")[0] == 1
    code, _, err = run(capsys, "present", "--theorem", "s1", "-d", "-23", "-p", "4", "--q", "151.1")
    assert code == 1 and "p = 4" in err


def test_hypotheses_not_met_is_exit_zero(capsys):
    code, out, _ = run(capsys, "present", "--theorem", "s1", "-d", "-1", "-p", "3", "--q", "7")
    assert code == 0 and "hypotheses not met" in out


def test_data_errors(capsys):
    code, _, err = run(capsys, "fetch", "--label", "4.0.999999.1")
    assert code == 2 and "data error" in err
    # 9 | N(q) - 1 needs the degree-6 field H(K), which is not bundled for d = -31
    code, _, err = run(capsys, "present", "--theorem", "s1", "-d", "-31", "-p", "3", "--q", "1279.1")
    assert code == 2 and "H_p(K) profile" in err


def test_internal_error_exit_code(capsys, monkeypatch):
    def boom(*a, **k):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli, "class_group", boom)
    code, _, err = run(capsys, "classgroup", "-d", "-23")
    assert code == 3 and "internal error" in err


def test_seed_is_accepted_and_output_stable(capsys):
    a = run(capsys, "rayclass", "-d", "-23", "-m", "151.1", "--seed", "7", "--json")[1]
    b = run(capsys, "rayclass", "-d", "-23", "-m", "151.1", "--seed", "0", "--json")[1]
    assert a == b
