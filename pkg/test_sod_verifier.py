"""
End-to-end tests: every bundled suite on its scenario, report serialization and the CLI.
"""

import json
from dataclasses import replace

import pytest

from scenario_loader import ScenarioValidationError, load_expectations, load_scenario
from sod_verifier import (
    SUITES,
    UnknownSuiteError,
    census_payload,
    emit_census,
    emit_report,
    main,
    msod_census,
    resolve_suite,
    run_suite,
)
from torus_geometry import TorsionBoundTooSmallError

SUITE_SCENARIOS = [
    ("g422-local", "rep-theory"),
    ("g422-local", "fm-images"),
    ("g422-local", "ext-lemma"),
    ("g422-local", "ext-table"),
    ("g422-local", "exceptional-collection"),
    ("g422-local", "local-assembly"),
    ("m2xm2-local", "m2xm2-local"),
    ("type-c", "type-c"),
    ("surfaces", "surfaces"),
    ("s3", "s3"),
    ("descent", "descent"),
]


@pytest.fixture(scope="module")
def expectations():
    return load_expectations()


@pytest.fixture(scope="module")
def scenarios():
    return {name: load_scenario(name) for name in {s for s, _ in SUITE_SCENARIOS}}


def test_every_suite_has_a_bundled_scenario():
    assert sorted(s for _, s in SUITE_SCENARIOS) == sorted(SUITES)


@pytest.mark.parametrize("scenario, suite", SUITE_SCENARIOS)
def test_bundled_suites_pass(scenarios, expectations, scenario, suite):
    report = run_suite(scenarios[scenario], suite, expectations)
    assert report.passed, [c.to_json() for c in report.hard_failures]
    assert report.checks
    assert {c.provenance for c in report.checks} <= {"cited", "derived", "trivial"}


def test_informational_mismatches_do_not_fail(scenarios, expectations):
    record = expectations["rep-theory.group-order"]
    changed = dict(expectations)
    changed["rep-theory.group-order"] = replace(record, expected=record.expected + 1, kind="informational")
    report = run_suite(scenarios["g422-local"], "rep-theory", changed)
    assert report.passed
    assert record.anchor in [c.anchor for c in report.informational_mismatches]
    assert report.summary().startswith("PASS with")


def test_hard_mismatches_fail(scenarios, expectations):
    record = expectations["rep-theory.group-order"]
    changed = dict(expectations)
    changed["rep-theory.group-order"] = replace(record, expected=record.expected + 1)
    report = run_suite(scenarios["g422-local"], "rep-theory", changed)
    assert not report.passed
    assert report.status == "fail"
    assert report.hard_failures[0].computed == record.expected
    assert "## Failing checks" in emit_report(report, "markdown").decode()


def test_missing_expectation(scenarios):
    with pytest.raises(ScenarioValidationError, match="rep-theory.group-order"):
        run_suite(scenarios["g422-local"], "rep-theory", {})


def test_suite_must_apply_to_the_scenario(scenarios, expectations):
    with pytest.raises(ScenarioValidationError, match="does not apply"):
        run_suite(scenarios["s3"], "type-c", expectations)


def test_suite_names():
    assert resolve_suite("fixed-loci") == "type-c"
    assert resolve_suite("Ext Table") == "ext-table"
    with pytest.raises(UnknownSuiteError) as info:
        resolve_suite("ext-tabel")
    assert info.value.suggestion == "ext-table"


def test_alias_runs_the_type_c_suite(scenarios, expectations):
    assert run_suite(scenarios["type-c"], "fixed-loci", expectations).suite == "type-c"


def test_reports_are_deterministic(scenarios, expectations):
    first = emit_report(run_suite(scenarios["s3"], "s3", expectations))
    second = emit_report(run_suite(load_scenario("s3"), "s3", expectations))
    assert first == second
    payload = json.loads(first)
    assert payload["schema_version"] == 1
    assert payload["status"] == "pass"
    assert payload["suite"] == "s3"


def test_markdown_report(scenarios, expectations):
    text = emit_report(run_suite(scenarios["s3"], "s3", expectations), "markdown").decode()
    assert text.startswith("# s3 on s3")
    assert "| status | provenance | anchor | cell | computed | expected |" in text
    with pytest.raises(ValueError):
        emit_report(run_suite(scenarios["s3"], "s3", expectations), "yaml")


def test_census_of_type_c(scenarios):
    payload = census_payload(scenarios["type-c"], action="A")
    assert payload["group_order"] == 16
    assert payload["torsion"] == 4
    assert sum(e["class_size"] for e in payload["entries"]) == 16
    dimensions = [e["dimension"] for e in payload["entries"]]
    assert dimensions == sorted(dimensions, reverse=True)
    assert dimensions[0] == 2
    assert payload["entries"][0]["name"] == "D1"
    assert emit_census(payload) == emit_census(census_payload(scenarios["type-c"], action="A"))


def test_census_of_a_linear_model(scenarios):
    entries = msod_census(scenarios["g422-local"].linear)
    assert len(entries) == 10
    assert entries[0].dimension == 2
    assert "| class | size |" in emit_census(census_payload(scenarios["g422-local"]), "markdown").decode()


def test_cli_verify(tmp_path):
    out = tmp_path / "report.json"
    assert main(["verify", "--scenario", "s3", "--suite", "s3", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["status"] == "pass"


def test_cli_census(tmp_path):
    out = tmp_path / "census.md"
    assert main(["census", "--scenario", "s3", "--format", "markdown", "--out", str(out)]) == 0
    assert out.read_text().startswith("# Census: s3")


@pytest.mark.parametrize("argv", [
    ["verify", "--scenario", "s3", "--suite", "nonsense"],
    ["verify", "--scenario", "s3", "--suite", "type-c"],
    ["verify", "--scenario", "no-such-scenario", "--suite", "s3"],
])
def test_cli_usage_errors(argv):
    assert main(argv) == 2


def test_cli_missing_file(tmp_path):
    assert main(["verify", "--scenario", str(tmp_path / "missing.json"), "--suite", "s3"]) == 2


def test_cli_rejects_unknown_formats():
    with pytest.raises(SystemExit):
        main(["verify", "--scenario", "s3", "--suite", "s3", "--format", "yaml"])


def test_census_reports_burnside(scenarios):
    burnside = census_payload(scenarios["type-c"], action="A")["burnside"]
    assert burnside["holds"]
    assert burnside["orbit_count"] == burnside["average_fixed"]
    assert census_payload(scenarios["g422-local"])["burnside"] is None


def test_census_refuses_a_torsion_level_missing_components():
    with pytest.raises(TorsionBoundTooSmallError) as info:
        msod_census(load_scenario("surfaces").torus("n3"), 2)
    assert info.value.needed == 6
    assert main(["census", "--scenario", "surfaces", "--action", "n3", "--torsion", "2"]) == 2


def test_torus_suites_check_conjugation_and_burnside(scenarios, expectations):
    for scenario in ("type-c", "surfaces", "s3", "descent"):
        anchors = {c.anchor for c in run_suite(scenarios[scenario], scenario, expectations).checks}
        assert "conjugate elements fix equally many torsion points" in anchors
        assert "Burnside: orbit count equals the average number of fixed points" in anchors


def test_descent_torsion_follows_the_override(expectations):
    spec = load_scenario("descent")
    assert all(case["torsion"] is None for case in spec.descent)
    spec.override_torsion(2)
    report = run_suite(spec, "descent", expectations)
    assert report.passed, [c.to_json() for c in report.hard_failures]
    k_orbits = next(c for c in report.checks
                    if c.anchor == "K-orbits on n-torsion number n^(2g) / |K|" and c.cell == "translation-and-sign")
    assert k_orbits.computed == 8
    assert main(["verify", "--scenario", "descent", "--suite", "descent", "--torsion", "2"]) == 0
