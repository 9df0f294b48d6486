import dataclasses
import json

import pytest

from cubicdescent.cli import EXIT_HYPOTHESES, EXIT_OK, EXIT_TANGENT, EXIT_USAGE, main
from cubicdescent.descent import DescentReport


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# report fields that are written under another name or split into several keys
_RENAMED = {"t": "input", "hyperplane": "input", "basis": "input", "s_sets": ("S", "S_prime", "R")}


def test_report_example(capsys):
    code, out, _ = run(capsys, "report", "--t", "-27", "--hyperplane", "0,0,1")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["schema_version"] == "1"
    assert doc["input"]["t"] == "-27/1" and doc["input"]["hyperplane"] == ["0/1", "0/1", "1/1"]
    assert doc["S"] == [3, 73] and doc["S_prime"] == []
    assert (doc["dim_selmer_phi"], doc["dim_selmer_phi_hat"]) == (2, 2)
    assert (doc["rank_lower"], doc["rank_upper"]) == (1, 3)
    assert doc["norm_gamma"] == "-657/1"
    assert "timings" not in doc


def test_schema_completeness(capsys):
    _, out, _ = run(capsys, "report", "--t", "1", "--hyperplane", "0,0,1")
    doc = json.loads(out)
    for f in dataclasses.fields(DescentReport):
        keys = _RENAMED.get(f.name, f.name)
        for k in (keys,) if isinstance(keys, str) else keys:
            assert k in doc, f.name
    assert {"schema_version", "certification"} <= set(doc)


def test_rationals_are_strings(capsys):
    _, out, _ = run(capsys, "report", "--t", "1/2", "--hyperplane", "0,0,1")
    doc = json.loads(out)
    assert doc["input"]["t"] == "1/2"
    for v in [doc["discriminant"], doc["j_invariant"], doc["norm_gamma"]] + doc["input"]["hyperplane"]:
        num, den = v.split("/")
        assert int(den) > 0 and int(num) == int(num)


def test_output_is_byte_identical(capsys):
    a = run(capsys, "report", "--t", "-27", "--hyperplane", "0,0,1")[1]
    b = run(capsys, "report", "--t", "-27", "--hyperplane", "0,0,1")[1]
    assert a == b


def test_timings_only_on_request(capsys):
    _, out, _ = run(capsys, "report", "--t", "1", "--hyperplane", "0,0,1", "--timings")
    assert "seconds" in json.loads(out)["timings"]


def test_reducible_exit(capsys):
    code, out, _ = run(capsys, "report", "--t", "-3/2", "--hyperplane", "0,0,1")
    assert code == EXIT_USAGE and json.loads(out)["error"] == "Reducible"


def test_tangent_exit(capsys):
    code, out, _ = run(capsys, "report", "--t", "1", "--hyperplane", "3,-1,-1")
    assert code == EXIT_TANGENT
    doc = json.loads(out)
    assert doc["error"] == "Tangent" and doc["parametrization"]["samples"]


def test_power_basis_is_not_tangent(capsys):
    code, _, _ = run(capsys, "report", "--t", "1", "--hyperplane", "3,-1,-1", "--basis", "power", "--search-bound", "20")
    assert code in (EXIT_OK, EXIT_HYPOTHESES)


def test_hypotheses_exit_still_reports(capsys):
    code, out, _ = run(capsys, "report", "--t", "2", "--hyperplane", "0,0,1")
    assert code == EXIT_HYPOTHESES
    doc = json.loads(out)
    assert doc["selmer_exact"] is False and doc["rank_upper"] >= doc["rank_lower"]


@pytest.mark.parametrize(
    "argv",
    [
        ["report", "--t", "abc", "--hyperplane", "0,0,1"],
        ["report", "--t", "1", "--hyperplane", "0,0,0"],
        ["report", "--t", "1", "--hyperplane", "0,0,1", "--basis", "1,2,3"],
        ["scan", "--t-from", "3", "--t-to", "1"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_argparse_errors_exit_with_usage_code(capsys):
    with pytest.raises(SystemExit) as info:
        main(["report", "--hyperplane", "0,0,1"])
    assert info.value.code == EXIT_USAGE


def test_effort_environment_override(capsys, monkeypatch):
    monkeypatch.setenv("DESCENT_EFFORT", "bogus")
    assert run(capsys, "report", "--t", "1", "--hyperplane", "0,0,1", "--effort", "low")[0] == EXIT_USAGE


def test_scan_lines_sorted(capsys):
    code, out, _ = run(capsys, "scan", "--t-from", "-5", "--t-to", "5", "--search-bound", "30")
    assert code == EXIT_OK
    lines = [json.loads(line) for line in out.splitlines()]
    assert [d["input"]["t"] for d in lines] == [f"{t}/1" for t in range(-5, 6)]
    for d in lines:
        if d["selmer_exact"]:
            assert d["rank_lower"] == 1


def test_scan_rational_step_skips_reducible(capsys):
    _, out, _ = run(capsys, "scan", "--t-from", "-2", "--t-to", "-1", "--step", "1/2", "--search-bound", "0")
    ts = [json.loads(line)["input"]["t"] for line in out.splitlines()]
    assert ts == ["-2/1", "-1/1"]
    _, out, _ = run(capsys, "scan", "--t-from", "-2", "--t-to", "0", "--step", "1/2", "--integral-only", "--search-bound", "0")
    assert len(out.splitlines()) == 3


def test_scan_parallel_matches_serial(capsys):
    serial = run(capsys, "scan", "--t-from", "0", "--t-to", "4", "--search-bound", "20")[1]
    parallel = run(capsys, "scan", "--t-from", "0", "--t-to", "4", "--search-bound", "20", "--jobs", "2")[1]
    assert serial == parallel


def test_classgroup_file_round_trip(capsys, tmp_path):
    path = tmp_path / "cg.json"
    code, out, _ = run(capsys, "classgroup", "--t", "1", "--output", str(path))
    assert code == EXIT_OK and json.loads(out)["class_number"] == 1
    code, out, _ = run(capsys, "report", "--t", "1", "--hyperplane", "0,0,1", "--classgroup-file", str(path))
    doc = json.loads(out)
    assert doc["class_group"]["class_number"] == 1
    assert doc["n_cl_g3_agrees"] is True


def test_classgroup_file_for_wrong_field(capsys, tmp_path):
    path = tmp_path / "cg.json"
    run(capsys, "classgroup", "--t", "1", "--output", str(path))
    assert run(capsys, "report", "--t", "0", "--hyperplane", "0,0,1", "--classgroup-file", str(path))[0] == EXIT_USAGE


@pytest.mark.parametrize("suite,samples", [("torsion", 100), ("maps", 50), ("duality", 30), ("conductor", 30)])
def test_verify_suites(capsys, suite, samples):
    code, out, _ = run(capsys, "verify", "--suite", suite, "--samples", str(samples), "--seed", "7" if suite == "torsion" else "1")
    assert code == EXIT_OK, out
    assert out.startswith(f"suite {suite}: pass")
