import json

import pytest

from main import main
from schemas.report import EnumerationReport, VerificationReport


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_verify_passes(capsys, scenario_dir):
    code, out, _ = _run(capsys, "--json", "verify", str(scenario_dir / "qutrit_pairs.json"))
    report = json.loads(out)
    assert code == 0
    assert report["kind"] == "verification"
    assert report["summary"]["passed"] is True
    assert report["summary"]["label_count"] == 9
    assert report["summary"]["feasible_count"] == 9


def test_verify_human_output(capsys, scenario_dir):
    code, out, _ = _run(capsys, "verify", str(scenario_dir / "three_bell_to_ghz.json"))
    assert code == 0
    assert "result: PASS" in out
    assert "0.12500000000000" in out


def test_global_flags_after_command(capsys, scenario_dir):
    code, out, _ = _run(capsys, "verify", str(scenario_dir / "reference_measured.json"), "--json")
    assert code == 0
    assert json.loads(out)["scenario"]["measured"] == [[0, 2], [3]]


@pytest.mark.parametrize("term", ["phase", "bridge", "offset"])
def test_verify_negative_control_fails(capsys, scenario_dir, term):
    code, out, _ = _run(capsys, "--json", "verify", str(scenario_dir / "qutrit_pairs.json"), "--negative-control", term)
    assert code == 1
    assert json.loads(out)["summary"]["passed"] is False


def test_verify_fully_measured_system_is_an_input_error(capsys, scenario_dir):
    code, out, err = _run(capsys, "verify", str(scenario_dir / "bell_full_measurement.json"))
    assert code == 2
    assert out == ""
    assert "unmeasured" in err


def test_malformed_scenario(capsys, write_scenario):
    path = write_scenario('{"dimension": 3,\n  "systems": [}')
    code, out, err = _run(capsys, "verify", str(path))
    assert code == 2
    assert out == ""
    assert "line 2" in err


def test_invalid_field(capsys, write_scenario):
    path = write_scenario({"dimension": 3, "systems": [{"l": 0, "k": []}], "measure": {"mode": "last", "counts": [1]}})
    code, _, err = _run(capsys, "verify", str(path))
    assert code == 2
    assert "field systems.0.k" in err


def test_missing_file(capsys, tmp_path):
    code, _, err = _run(capsys, "measure", str(tmp_path / "absent.json"))
    assert code == 2
    assert "cannot read scenario file" in err


def test_size_guard_flag(capsys, scenario_dir):
    code, out, err = _run(capsys, "--max-amplitudes", "10", "verify", str(scenario_dir / "qutrit_pairs.json"))
    assert code == 2
    assert out == ""
    assert "size guard" in err


def test_measure_explicit_outcome(capsys, scenario_dir):
    code, out, _ = _run(capsys, "--json", "measure", str(scenario_dir / "ghz_pair_swap.json"))
    report = json.loads(out)
    assert code == 0
    assert report["mode"] == "explicit"
    assert report["label"]["text"] == "bell(1; 1,0)"
    assert report["feasible"] is True
    assert report["probability"] == pytest.approx(1 / 9)
    assert report["fidelity"] == pytest.approx(1.0, abs=1e-10)


def test_measure_sampled_is_deterministic(capsys, scenario_dir):
    path = str(scenario_dir / "three_bell_to_ghz.json")
    first = _run(capsys, "--json", "measure", path, "--dump-state")
    second = _run(capsys, "--json", "measure", path, "--dump-state")
    assert first == second
    report = json.loads(first[1])
    assert report["mode"] == "sampled"
    assert report["seed"] == 2024
    assert report["post_state"]["num_qudits"] == 3


def test_measure_seed_flag_overrides_file(capsys, scenario_dir):
    _, out, _ = _run(capsys, "--json", "measure", str(scenario_dir / "qutrit_pairs.json"), "--seed", "99")
    assert json.loads(out)["seed"] == 99


@pytest.mark.parametrize("seed", ["-1", str(2 ** 64)])
def test_measure_seed_out_of_range(capsys, scenario_dir, seed):
    with pytest.raises(SystemExit) as exc:
        main(["measure", str(scenario_dir / "qutrit_pairs.json"), "--seed", seed])
    assert exc.value.code == 2
    assert "--seed" in capsys.readouterr().err


def test_measure_file_seed_out_of_range(capsys, scenario_dir, write_scenario):
    payload = json.loads((scenario_dir / "qutrit_pairs.json").read_text())
    payload["seed"] = -1
    code, out, err = _run(capsys, "measure", str(write_scenario(payload)))
    assert code == 2
    assert out == ""
    assert "seed" in err


def test_measure_without_seed(capsys, write_scenario):
    path = write_scenario({"dimension": 2, "systems": [{"l": 0, "k": [0, 0]}], "measure": {"mode": "last", "counts": [1]}})
    code, out, err = _run(capsys, "measure", str(path))
    assert code == 2
    assert out == ""
    assert "seed" in err


def test_measure_infeasible_outcome(capsys, write_scenario):
    path = write_scenario({
        "dimension": 3,
        "systems": [{"l": 0, "k": [1, 2]}, {"l": 0, "k": [0]}],
        "measure": {"mode": "last", "counts": [2, 1]},
        "outcome": {"r": 0, "s": [0, 0]},
    })
    code, out, _ = _run(capsys, "--json", "measure", str(path))
    report = json.loads(out)
    assert code == 0
    assert report["feasible"] is False
    assert report["probability"] == 0.0
    assert report["predicted"] is None


def test_measure_whole_system(capsys, scenario_dir):
    code, out, _ = _run(capsys, "--json", "measure", str(scenario_dir / "bell_full_measurement.json"), "--dump-state")
    report = json.loads(out)
    assert code == 0
    assert report["probability"] == pytest.approx(1.0)
    assert report["predicted"] is None
    assert report["post_state"]["num_qudits"] == 0
    assert len(report["post_state"]["amplitudes"]) == 1


def test_enumerate_full_measurement(capsys, scenario_dir):
    code, out, _ = _run(capsys, "--json", "enumerate", str(scenario_dir / "bell_full_measurement.json"))
    report = json.loads(out)
    assert code == 0
    assert report["unmeasured"] == []
    assert len(report["rows"]) == 9
    assert report["feasible_count"] == 1
    assert report["total_probability"] == pytest.approx(1.0)
    feasible = [row for row in report["rows"] if row["feasible"]]
    assert feasible[0]["label"]["text"] == "bell(1; 2)"


def test_enumerate_with_predictions(capsys, scenario_dir):
    code, out, _ = _run(capsys, "--json", "enumerate", str(scenario_dir / "ghz_pair_swap.json"))
    report = json.loads(out)
    assert code == 0
    assert len(report["rows"]) == 27
    assert report["feasible_count"] == 9
    for row in report["rows"]:
        assert (row["predicted"] is not None) == row["feasible"]


def test_enumerate_human_output(capsys, scenario_dir):
    code, out, _ = _run(capsys, "enumerate", str(scenario_dir / "bell_full_measurement.json"))
    assert code == 0
    assert "none (empty record)" in out
    assert "bell(1; 2)" in out


def test_dump_basis(capsys):
    code, out, _ = _run(capsys, "--json", "dump-basis", "--dimension", "2", "--particles", "2")
    report = json.loads(out)
    assert code == 0
    assert len(report["entries"]) == 4
    first = report["entries"][0]
    assert first["label"]["text"] == "bell(0; 0)"
    assert first["support"] == [[0, 0], [1, 1]]


def test_dump_basis_rejects_small_dimension(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["dump-basis", "--dimension", "1", "--particles", "2"])
    assert exc.value.code == 2


def test_campaign(capsys):
    code, out, _ = _run(capsys, "--json", "campaign", "--count", "3", "--seed", "10", "--max-qudits", "6")
    report = json.loads(out)
    assert code == 0
    assert report["passed"] is True
    assert [run["seed"] for run in report["runs"]] == [10, 11, 12]


def test_campaign_empty_range(capsys):
    code, _, err = _run(capsys, "campaign", "--min-dimension", "4", "--max-dimension", "3")
    assert code == 2
    assert "empty range" in err


def test_record_and_history(capsys, scenario_dir):
    assert _run(capsys, "verify", str(scenario_dir / "qutrit_pairs.json"), "--record")[0] == 0
    assert _run(capsys, "verify", str(scenario_dir / "qutrit_pairs.json"), "--record", "--negative-control", "phase")[0] == 1

    code, out, _ = _run(capsys, "--json", "history")
    report = json.loads(out)
    assert code == 0
    assert report["total"] == 2
    assert report["summary"]["passed"] == 1

    _, out, _ = _run(capsys, "--json", "history", "--failed-only")
    assert [run["passed"] for run in json.loads(out)["runs"]] == [False]


@pytest.mark.parametrize("document", ["scenario", "verification", "measurement"])
def test_schema(capsys, document):
    code, out, _ = _run(capsys, "schema", document)
    assert code == 0
    assert "properties" in json.loads(out)


def test_qutrit_outcome_prediction(capsys, scenario_dir, write_scenario):
    payload = json.loads((scenario_dir / "qutrit_pairs.json").read_text())
    payload["outcome"] = {"r": 1, "s": [2]}
    code, out, _ = _run(capsys, "--json", "measure", str(write_scenario(payload)))
    report = json.loads(out)
    assert code == 0
    assert report["predicted"]["text"] == "psi(2; 0)"
    assert report["fidelity"] == pytest.approx(1.0, abs=1e-10)
    assert report["probability"] == pytest.approx(1 / 9, abs=1e-12)


def test_qutrit_enumeration_is_uniform(capsys, scenario_dir):
    code, out, _ = _run(capsys, "--json", "enumerate", str(scenario_dir / "qutrit_pairs.json"))
    rows = json.loads(out)["rows"]
    assert code == 0
    assert len(rows) == 9
    assert all(row["probability"] == pytest.approx(1 / 9, abs=1e-12) for row in rows)


def test_three_bell_pairs_origin_label(capsys, scenario_dir):
    _, out, _ = _run(capsys, "--json", "verify", str(scenario_dir / "three_bell_to_ghz.json"))
    records = json.loads(out)["records"]
    assert records[0]["label"]["text"] == "bell(0; 0,0)"
    assert records[0]["predicted"]["text"] == "psi(0; 0,0)"


def test_bundled_infeasible_outcome(capsys, scenario_dir):
    code, out, _ = _run(capsys, "--json", "measure", str(scenario_dir / "ghz_internal_infeasible.json"))
    report = json.loads(out)
    assert code == 0
    assert report["feasible"] is False
    assert report["probability"] == 0.0


def test_reports_validate_against_their_models(capsys, scenario_dir):
    _, out, _ = _run(capsys, "--json", "verify", str(scenario_dir / "ghz_pair_swap.json"))
    VerificationReport.model_validate_json(out)
    _, out, _ = _run(capsys, "--json", "enumerate", str(scenario_dir / "ghz_pair_swap.json"))
    EnumerationReport.model_validate_json(out)
