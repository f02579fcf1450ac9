import json

import jsonschema
import pytest

from ramspace import cli
from ramspace.audit import AxiomCheck, AxiomReport, AuditBounds


@pytest.fixture(scope="module")
def schema():
    import importlib.resources

    ref = importlib.resources.files("ramspace") / "schemas" / "cli_output.schema.json"
    return json.loads(ref.read_text())


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, schema, *argv):
    code, out = run(capsys, *argv, "--format", "json")
    payload = json.loads(out)
    jsonschema.validate(payload, schema)
    return code, payload


# ----- audit -----

def test_audit_ellentuck_ok(capsys, schema):
    code, payload = run_json(
        capsys, schema, "audit", "--space", "ellentuck", "--ground", "6",
        "--depth", "4", "--a6",
    )
    assert code == 0
    assert payload["outcome"] == "bounded-pass"
    assert any(row["axiom"] == "A6" for row in payload["report"])


def test_audit_matrix_ok(capsys, schema):
    code, payload = run_json(
        capsys, schema, "audit", "--space", "matrix", "--q", "2",
        "--max-cols", "3", "--depth", "3",
    )
    assert code == 0 and payload["outcome"] == "bounded-pass"


def test_audit_usage_error(capsys):
    code, _ = run(capsys, "audit", "--space", "ellentuck", "--ground", "0")
    assert code == 2


def test_audit_missing_param(capsys):
    code, _ = run(capsys, "audit", "--space", "ellentuck")
    assert code == 2


def test_audit_refusal(capsys):
    code, _ = run(capsys, "audit", "--space", "ellentuck", "--ground", "25")
    assert code == 4


def test_audit_counterexample_exit(capsys, monkeypatch):
    # exit-code mapping for a failing report (real spaces all pass)
    report = AxiomReport("space=test", AuditBounds())
    report.checks.append(
        AxiomCheck("A1", "empty-base", "counterexample", 1, witness="w")
    )
    monkeypatch.setattr(cli, "audit_axioms", lambda space, bounds: report)
    code, out = run(capsys, "audit", "--space", "ellentuck", "--ground", "4")
    assert code == 1
    assert "counterexample" in out


# ----- galvin -----

def test_galvin_family_file(tmp_path, capsys, schema):
    path = tmp_path / "family.txt"
    path.write_text(
        "space=ellentuck;ground=20\nlength_bound=1\n"
        + "\n".join("{%d}" % x for x in range(0, 20, 2))
        + "\n"
    )
    code, payload = run_json(capsys, schema, "galvin", "--family", str(path))
    assert code == 0
    assert payload["outcome"] == "alt1"
    assert payload["stem"] == "{1,3,5,7,9,11,13,15,17,19}"


def test_galvin_inline_members(capsys, schema):
    code, payload = run_json(
        capsys, schema, "galvin", "--space", "ellentuck", "--ground", "8",
        "--member", "{0}", "--member", "{2}", "--member", "{4}", "--member", "{6}",
    )
    assert code == 0
    assert payload["outcome"] == "alt1"
    assert payload["stem"] == "{1,3,5,7}"


def test_galvin_alt2(capsys, schema):
    argv = ["galvin", "--space", "ellentuck", "--ground", "6"]
    for x in range(6):
        argv += ["--member", "{%d}" % x]
    code, payload = run_json(capsys, schema, *argv)
    assert code == 0 and payload["outcome"] == "alt2"


def test_galvin_malformed_family(tmp_path, capsys):
    path = tmp_path / "family.txt"
    path.write_text("space=ellentuck;ground=5\nnot-a-member\n")
    code, _ = run(capsys, "galvin", "--family", str(path))
    assert code == 2


def test_galvin_horizon_below_bound(capsys):
    code, _ = run(
        capsys, "galvin", "--space", "ellentuck", "--ground", "5",
        "--member", "{0,1}", "--horizon", "1",
    )
    assert code == 2


def test_galvin_inconclusive_exit(capsys, schema):
    code, payload = run_json(
        capsys, schema, "galvin", "--space", "partition", "--domain", "6",
        "--member", "({0},{1})", "--max-reducts", "3",
    )
    assert code == 3
    assert payload["outcome"] == "inconclusive"


def test_galvin_refusal_without_greedy(capsys):
    code, _ = run(
        capsys, "galvin", "--space", "partition", "--domain", "6",
        "--member", "({0},{1})", "--max-reducts", "3", "--no-greedy",
    )
    assert code == 4


# ----- ramsey -----

def test_ramsey_classical_found(capsys, schema):
    code, payload = run_json(
        capsys, schema, "ramsey", "classical",
        "--k", "2", "--n", "3", "--s", "2", "--bound", "8",
    )
    assert code == 0
    assert payload["value"] == 6
    assert "found" in payload["certificates"]
    assert "lower_bound" in payload["certificates"]


def test_ramsey_glr_found(capsys, schema):
    code, payload = run_json(
        capsys, schema, "ramsey", "glr",
        "--q", "2", "--k", "1", "--n", "2", "--s", "2", "--bound", "4",
    )
    assert code == 0 and payload["value"] == 3


def test_ramsey_exhausted(capsys, schema):
    code, payload = run_json(
        capsys, schema, "ramsey", "classical",
        "--k", "2", "--n", "3", "--s", "2", "--bound", "4",
    )
    assert code == 3
    assert payload["outcome"] == "exhausted"
    assert payload["value"] is None


def test_ramsey_lower_bound_exit(capsys, schema):
    code, payload = run_json(
        capsys, schema, "ramsey", "classical",
        "--k", "2", "--n", "3", "--s", "2", "--bound", "8",
        "--mode", "backtracking", "--node-budget", "5",
    )
    assert code == 1
    assert payload["outcome"] == "lower_bound"


def test_ramsey_ceiling_refusal(capsys, monkeypatch):
    monkeypatch.setenv(cli.ENV_CEILING, "4")
    code, _ = run(
        capsys, "ramsey", "classical",
        "--k", "2", "--n", "3", "--s", "2", "--bound", "8",
    )
    assert code == 4


def test_ramsey_paramset(capsys, schema):
    code, payload = run_json(
        capsys, schema, "ramsey", "paramset",
        "--k", "1", "--m", "3", "--s", "2", "--bound", "5",
    )
    assert code == 0 and payload["value"] == 3


def test_ramsey_generic_witness(capsys, schema):
    code, payload = run_json(
        capsys, schema, "ramsey", "witness", "--space", "ellentuck",
        "--k", "2", "--n", "3", "--s", "2", "--bound", "6",
    )
    assert code == 0 and payload["value"] == 4


def test_ramsey_jobs_flag_matches_sequential(capsys, schema):
    argv = (
        "ramsey", "glr", "--q", "2", "--k", "1", "--n", "2", "--s", "2",
        "--bound", "4",
    )
    _, seq = run_json(capsys, schema, *argv)
    _, par = run_json(capsys, schema, *argv, "--jobs", "2")
    assert seq == par


def test_ramsey_csv_format(capsys):
    code, out = run(
        capsys, "ramsey", "classical", "--k", "2", "--n", "3", "--s", "2",
        "--bound", "8", "--format", "csv",
    )
    lines = out.strip().splitlines()
    assert lines[0] == "instance,outcome,value,count_checked,seconds"
    fields = lines[1].split(",")
    assert fields[1] == "found" and fields[2] == "6"
    assert fields[-1] == ""  # no timing by default


# ----- reduce -----

def _write_parity_coloring(tmp_path):
    path = tmp_path / "coloring.txt"
    lines = ["space=ellentuck;ground=10", "k=1;s=2"]
    lines += ["{%d}:%d" % (x, x % 2) for x in range(10)]
    path.write_text("\n".join(lines) + "\n")
    return path


def test_reduce_parity(tmp_path, capsys, schema):
    path = _write_parity_coloring(tmp_path)
    code, payload = run_json(capsys, schema, "reduce", "--coloring", str(path))
    assert code == 0
    assert payload["outcome"] == "mono"
    assert payload["stem"] == "{1,3,5,7,9}"
    assert payload["color"] == 1


def test_reduce_bad_file(tmp_path, capsys):
    path = tmp_path / "coloring.txt"
    path.write_text("space=ellentuck;ground=5\n")
    code, _ = run(capsys, "reduce", "--coloring", str(path))
    assert code == 2


# ----- output plumbing -----

def test_output_file(tmp_path, capsys):
    out_path = tmp_path / "result.json"
    code = cli.main([
        "ramsey", "glr", "--q", "2", "--k", "1", "--n", "2", "--s", "2",
        "--bound", "4", "--format", "json", "--output", str(out_path),
    ])
    assert code == 0
    payload = json.loads(out_path.read_text())
    assert payload["value"] == 3
    assert capsys.readouterr().out == ""


def test_byte_identical_output_without_timing(capsys):
    argv = (
        "ramsey", "classical", "--k", "2", "--n", "3", "--s", "2", "--bound", "8",
    )
    _, first = run(capsys, *argv)
    _, second = run(capsys, *argv)
    assert first == second
    _, jfirst = run(capsys, *argv, "--format", "json")
    _, jsecond = run(capsys, *argv, "--format", "json")
    assert jfirst == jsecond


def test_cross_process_determinism_under_hash_randomization(tmp_path):
    import os
    import subprocess
    import sys

    fam = tmp_path / "family.txt"
    fam.write_text(
        "space=ellentuck;ground=12\nlength_bound=1\n"
        + "\n".join("{%d}" % x for x in range(0, 12, 2))
        + "\n"
    )
    outputs = []
    for seed in ("1", "2"):
        env = dict(os.environ, PYTHONHASHSEED=seed)
        proc = subprocess.run(
            [sys.executable, "-m", "ramspace.cli", "galvin",
             "--family", str(fam), "--format", "json"],
            capture_output=True, env=env, check=True,
        )
        outputs.append(proc.stdout)
        proc = subprocess.run(
            [sys.executable, "-m", "ramspace.cli", "ramsey", "classical",
             "--k", "2", "--n", "3", "--s", "2", "--bound", "8",
             "--format", "json"],
            capture_output=True, env=env, check=True,
        )
        outputs.append(proc.stdout)
    assert outputs[0] == outputs[2]
    assert outputs[1] == outputs[3]


def test_timing_flag_adds_seconds(capsys):
    code, out = run(
        capsys, "ramsey", "glr", "--q", "2", "--k", "1", "--n", "2",
        "--s", "2", "--bound", "4", "--timing",
    )
    assert code == 0
    assert "seconds:" in out


def test_json_seconds_null_without_timing(capsys, schema):
    _, payload = run_json(
        capsys, schema, "ramsey", "glr", "--q", "2", "--k", "1", "--n", "2",
        "--s", "2", "--bound", "4",
    )
    assert payload["seconds"] is None
