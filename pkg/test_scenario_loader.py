"""
Tests for scenario and expectation loading.
"""

import json

import pytest

from name_matching import UnknownNameError
from scenario_loader import (
    ScenarioParseError,
    ScenarioValidationError,
    load_expectations,
    load_scenario,
    parse_scenario,
)

BUNDLED = ["g422-local", "m2xm2-local", "type-c", "surfaces", "s3", "descent"]

PLUS_MINUS = {
    "name": "plus-minus",
    "kind": "linear",
    "generators": {"minus": {"matrix": [[-1, 0], [0, -1]]}},
    "modules": {"O0": {"ideal": ["x", "y"]}, "Q": {"ideal": ["x^2", "y^2"]}},
}


@pytest.fixture(scope="module")
def g422():
    return load_scenario("g422-local")


def write(tmp_path, text, name="scenario.json"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_empty_file(tmp_path):
    with pytest.raises(ScenarioParseError) as info:
        load_scenario(write(tmp_path, "  \n"))
    assert (info.value.line, info.value.column) == (1, 1)


def test_invalid_json_reports_line_and_column(tmp_path):
    path = write(tmp_path, '{"name": "broken",\n "kind": }\n')
    with pytest.raises(ScenarioParseError) as info:
        load_scenario(path)
    assert info.value.line == 2
    assert info.value.column > 1
    assert info.value.path == path


def test_top_level_must_be_an_object(tmp_path):
    with pytest.raises(ScenarioParseError):
        load_scenario(write(tmp_path, "[1, 2]"))


@pytest.mark.parametrize("data, fields", [
    ({"name": "x"}, ["kind"]),
    ({"kind": "linear"}, ["name"]),
    ({"name": "x", "kind": "linear"}, ["generators", "modules"]),
    ({"name": "x", "kind": "torus"}, ["actions"]),
])
def test_missing_fields_are_listed(data, fields):
    with pytest.raises(ScenarioValidationError) as info:
        parse_scenario(data)
    assert info.value.fields == fields


def test_unknown_kind():
    with pytest.raises(ScenarioValidationError, match="expected linear or torus"):
        parse_scenario({"name": "x", "kind": "cubic"})


def test_module_without_ideal():
    data = dict(PLUS_MINUS, modules={"O0": {"twist": "1"}})
    with pytest.raises(ScenarioValidationError) as info:
        parse_scenario(data)
    assert info.value.fields == ["modules.O0.ideal"]


def test_torus_action_fields():
    data = {"name": "x", "kind": "torus", "actions": {"E": {"factors": 1}}}
    with pytest.raises(ScenarioValidationError) as info:
        parse_scenario(data)
    assert info.value.fields == ["actions.E.cm", "actions.E.generators"]


def test_unknown_complex_multiplication():
    data = {"name": "x", "kind": "torus",
            "actions": {"E": {"factors": 1, "cm": "quaternionic", "generators": {"m": {"monomial": [2, 0, 0]}}}}}
    with pytest.raises(ScenarioValidationError, match="actions.E.cm"):
        parse_scenario(data)


def test_inline_linear_scenario():
    spec = parse_scenario(PLUS_MINUS)
    model = spec.linear
    assert spec.kind == "linear"
    assert model.group.order == 2
    assert model.module("O0").dimension == 1
    assert model.module("Q").dimension == 4
    assert model.module("Q") is model.module("Q")


def test_inline_torus_scenario():
    data = {"name": "E", "kind": "torus",
            "actions": {"E": {"factors": 1, "cm": "gaussian", "order": 4,
                              "generators": {"zeta": {"linear": [[0, -1], [1, 0]]}}}}}
    spec = parse_scenario(data)
    model = spec.torus("E")
    assert model.group.order == 4
    assert model.torsion == 8


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_scenarios_load(name):
    spec = load_scenario(name)
    assert spec.name == name
    assert spec.suites
    assert spec.path.stem == name


def test_scenario_file_path(tmp_path):
    path = write(tmp_path, json.dumps(PLUS_MINUS))
    assert load_scenario(path).name == "plus-minus"
    assert load_scenario(str(path)).path == path


def test_unknown_scenario_suggests_a_bundled_name():
    with pytest.raises(UnknownNameError) as info:
        load_scenario("g422-locl")
    assert info.value.suggestion == "g422-local"


def test_g422_model(g422):
    model = g422.linear
    assert model.group.order == 16
    assert len(model.table) == 10
    assert model.irreducible_order[0] == "1"
    assert model.class_names[0] == "D1"


def test_module_references(g422):
    model = g422.linear
    assert model.module("O0*chi2").dimension == 1
    assert model.module("O0*V").dimension == 2
    assert model.module("O0*χ₂").dimension == 1
    with pytest.raises(UnknownNameError, match="did you mean"):
        model.module("Phi5")


def test_collections_and_subgroups():
    model = load_scenario("m2xm2-local").linear
    assert model.collection("curves")["objects"]
    assert len(model.subgroup_indices("mu2")) == 2


def test_expectations_from_a_directory(tmp_path):
    records = {
        "rep-theory.group-order": {"anchor": "order of the group", "expected": 32},
        "rep-theory.center-order": {"anchor": "center", "expected": 2, "kind": "informational"},
    }
    write(tmp_path, json.dumps({"schema_version": 1, "expectations": records}), "expectations.json")
    loaded = load_expectations(tmp_path)
    assert loaded["rep-theory.group-order"].kind == "hard"
    assert loaded["rep-theory.center-order"].kind == "informational"
    assert loaded["rep-theory.center-order"].expected == 2


def test_expectations_need_anchor_and_expected(tmp_path):
    records = {"a.b": {"expected": 1}, "a.c": {"anchor": "c", "expected": 1, "kind": "soft"}}
    write(tmp_path, json.dumps({"expectations": records}), "expectations.json")
    with pytest.raises(ScenarioValidationError) as info:
        load_expectations(tmp_path)
    assert info.value.fields == ["a.b", "a.c.kind"]


def test_expectations_parse_error(tmp_path):
    write(tmp_path, '{"expectations": {\n', "expectations.json")
    with pytest.raises(ScenarioParseError):
        load_expectations(tmp_path)


def test_bundled_expectations_are_valid():
    expectations = load_expectations()
    assert expectations
    assert all(key.count(".") >= 1 for key in expectations)
    assert any(e.kind == "informational" for e in expectations.values())


def test_fixture_directory_from_environment(tmp_path, monkeypatch):
    write(tmp_path, json.dumps({"expectations": {}}), "expectations.json")
    monkeypatch.setenv("SOD_FIXTURES_DIR", str(tmp_path))
    assert load_expectations() == {}


def test_torsion_override_reaches_descent_cases():
    spec = load_scenario("descent")
    assert [case["torsion"] for case in spec.descent] == [None, None, None]
    spec.override_torsion(2)
    assert {model.torsion for model in spec.actions.values()} == {2}
    assert [case["torsion"] for case in spec.descent] == [2, 2, 2]
