import json
from fractions import Fraction

import pytest

from pseudodyn import InputError
from pseudodyn.cli import main, render, to_jsonable
from pseudodyn.model import parse_model

LINE_MODEL = {
    "points": ["a", "b", "c"],
    "dist": [[0, 1, 2], [1, 0, 1], [2, 1, 0]],
    "generators": [
        {"name": "g", "dom": ["a", "b"], "map": {"a": "b", "b": "c"},
         "core": ["a"]}
    ],
    "mu": {"a": "1/3", "b": "1/3", "c": "1/3"},
    "phi": {"a": "p", "b": "q", "c": "r"},
}


@pytest.fixture
def model_path(tmp_path):
    path = tmp_path / "line.json"
    path.write_text(json.dumps(LINE_MODEL))
    return str(path)


def test_parse_model_valid():
    model = parse_model(json.dumps(LINE_MODEL))
    assert [m.name for m in model.system.generators] == ["id", "g", "g^-1"]
    assert set(model.report.auto_added) == {"id", "g^-1"}
    assert model.measure is not None and model.measure.weight("a") == Fraction(1, 3)
    assert model.iso is not None and model.iso.is_isometric()
    # the auto-linked inverse core is the image of the given core
    assert model.system.cores[2] == {1}


def test_parse_model_exact_decimal():
    doc = {"points": ["a", "b"], "dist": [[0, 0.5], [0.5, 0]]}
    model = parse_model(json.dumps(doc))
    assert model.space.d(0, 1) == Fraction(1, 2)


def test_parse_model_errors_name_the_invariant():
    bad_sym = dict(LINE_MODEL, dist=[[0, 1, 2], [1, 0, 1], [9, 1, 0]])
    with pytest.raises(InputError, match="symmetry"):
        parse_model(json.dumps(bad_sym))

    bad_mu = dict(LINE_MODEL, mu={"a": "1/2", "b": "1/4", "c": "24/100"})
    with pytest.raises(InputError, match="sum to 1"):
        parse_model(json.dumps(bad_mu))

    bad_dom = dict(LINE_MODEL, generators=[
        {"name": "g", "dom": ["a"], "map": {"a": "b", "b": "c"}}])
    with pytest.raises(InputError, match="disagrees"):
        parse_model(json.dumps(bad_dom))

    with pytest.raises(InputError, match="JSON"):
        parse_model("not json{")


def test_to_jsonable_round_trip():
    payload = {"eps": Fraction(3, 2), "members": frozenset({1, 0}),
               "nested": [{"v": Fraction(1, 3)}]}
    data = to_jsonable(payload)
    assert data == {"eps": "3/2", "members": [0, 1], "nested": [{"v": "1/3"}]}
    text = render(payload, "json")
    assert json.loads(text)["result"] == data
    # idempotent: rendering the parsed result again changes nothing
    assert json.loads(render(json.loads(text)["result"], "json"))["result"] == data


def test_cli_ball(model_path, capsys):
    code = main(["ball", "--model", model_path, "--x", "a",
                 "--n", "1", "--eps", "3/2"])
    out = capsys.readouterr().out
    assert code == 0
    assert "members" in out and "- a" in out and "- b" in out
    assert "c" in out  # exclusion listed with its witness


def test_cli_bowen(model_path, capsys):
    code = main(["--format", "json", "bowen", "--model", model_path,
                 "--x", "a", "--delta", "1"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["result"]["members"] == ["a", "b"]


def test_cli_check_negative_exit(model_path, capsys):
    code = main(["check", "--model", model_path, "--what", "expansive",
                 "--delta", "1"])
    assert code == 1
    assert "neither" in capsys.readouterr().out


def test_cli_check_invariant(model_path, capsys):
    code = main(["check", "--model", model_path, "--what", "invariant"])
    assert code == 0


def test_cli_input_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"points": ["a", "b"],
                               "dist": [[0, 1], [2, 0]]}))
    code = main(["ball", "--model", str(bad), "--x", "a",
                 "--n", "1", "--eps", "1"])
    assert code == 2
    assert "symmetry" in capsys.readouterr().err


def test_cli_unknown_point_is_input_error(model_path, capsys):
    code = main(["ball", "--model", model_path, "--x", "z",
                 "--n", "1", "--eps", "1"])
    assert code == 2


def test_cli_htop_csv(model_path, capsys):
    code = main(["--format", "csv", "htop", "--model", model_path,
                 "--n-max", "2"])
    out = capsys.readouterr().out
    assert code == 0
    assert "count_lower" in out


def test_cli_entropy(model_path, capsys):
    code = main(["entropy", "--model", model_path, "--x", "a", "--n-max", "3"])
    assert code == 0
    assert "limit: 0.0" in capsys.readouterr().out


def test_cli_conjugate_entropy(model_path, capsys):
    code = main(["--format", "json", "conjugate", "--model", model_path,
                 "--check", "entropy"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["result"]["isometric"] is True
    assert out["result"]["tables_equal"] is True


def test_cli_equicont(model_path, capsys):
    code = main(["equicont", "--model", model_path])
    assert code == 0
    assert "audit_ok: True" in capsys.readouterr().out


def test_cli_shift_entropy(capsys):
    code = main(["--format", "json", "shift", "entropy",
                 "--eps", "3/5", "--n", "1000"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["result"]["log2_multiple"] == "2003/1000"
    assert out["result"]["limit"] == "2 log 2"


def test_cli_shift_ball(capsys):
    code = main(["--format", "json", "shift", "ball", "--x", "00101",
                 "--center", "0", "--n", "2", "--eps", "3/5"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["result"]["cylinder"]["interval"] == [-3, 3]
    assert out["result"]["measure"] == "1/128"


def test_cli_probe_small(capsys):
    code = main(["--format", "json", "probe", "--seeds", "3"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert set(out["result"]["statements"]) >= {"ball-formula-identity"}


def test_cli_probe_survey(capsys):
    code = main(["probe", "--seeds", "3", "--survey", "homogeneity"])
    assert code == 0


def test_cli_verify_alias(capsys):
    code = main(["verify", "--seeds", "2",
                 "--statements", "germ-equivalence,inverse-composition"])
    assert code == 0


def test_cli_probe_violation_exit_code(capsys, monkeypatch):
    """A statement violation in the suite maps to exit code 3."""
    from pseudodyn import cli
    from pseudodyn.probes import ProbeReport, Violation

    def fake_suite(spec, statements="all", threads=None):
        rep = ProbeReport(statement="germ-equivalence", instances=1,
                          violations=[Violation(index=0, witness=("x",),
                                                genome_size=(3, 1))])
        return {"germ-equivalence": rep}

    monkeypatch.setattr(cli.probes, "run_suite", fake_suite)
    code = main(["probe", "--seeds", "1"])
    assert code == 3


def test_manifest_and_payload_reproducible(model_path, capsys):
    main(["--format", "json", "bowen", "--model", model_path,
          "--x", "a", "--delta", "1"])
    first = json.loads(capsys.readouterr().out)
    main(["--format", "json", "bowen", "--model", model_path,
          "--x", "a", "--delta", "1"])
    second = json.loads(capsys.readouterr().out)
    assert first["result"] == second["result"]
    assert first["manifest"]["model_sha256"] == second["manifest"]["model_sha256"]
    assert first["manifest"]["version"] == second["manifest"]["version"]
