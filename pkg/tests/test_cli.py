"""CLI tests: exit codes, report formats, determinism."""

import json
import math

import pytest

from hhcert.cli import main
from hhcert.report import dumps_canonical


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --------------------------------------------------------------------------
# exit codes
# --------------------------------------------------------------------------

def test_dm_chain_holds_exits_zero(capsys):
    code, out, _ = run(capsys, "chain", "--f", "exp(x^2)", "--a", "0", "--b", "1",
                       "--c", "0", "--which", "dm")
    assert code == 0
    assert "holds" in out


def test_violated_chain_exits_one(capsys):
    code, out, _ = run(capsys, "chain", "--f", "1", "--a", "0", "--b", "1",
                       "--c", "1", "--which", "t1")
    assert code == 1
    assert "VIOLATED" in out


def test_syntax_error_exits_two(capsys):
    code, _, err = run(capsys, "chain", "--f", "exp(", "--a", "0", "--b", "1",
                       "--which", "dm")
    assert code == 2
    assert "position" in err


def test_domain_error_exits_two(capsys):
    code, _, err = run(capsys, "integrate", "--f", "ln(x)", "--a", "-1", "--b", "1")
    assert code == 2
    assert err.startswith("error:")


def test_bad_interval_exits_two(capsys):
    code, _, err = run(capsys, "certify", "--f", "exp(x)", "--a", "1", "--b", "0")
    assert code == 2


def test_usage_error_exits_two(capsys):
    assert main(["chain", "--f", "x"]) == 2  # missing required flags


# --------------------------------------------------------------------------
# JSON reports
# --------------------------------------------------------------------------

def test_chain_json_shape(capsys):
    code, out, _ = run(capsys, "chain", "--f", "exp(x^2)", "--a", "0", "--b", "1",
                       "--which", "dm", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "chain"
    assert list(doc) == ["command", "version", "inputs", "outputs", "violations"]
    assert len(doc["outputs"]["terms"]) == 6
    assert len(doc["outputs"]["margins"]) == 5
    assert doc["outputs"]["holds"] is True
    assert doc["violations"] == []


def test_json_reserializes_byte_identically(capsys):
    for argv in [
        ["chain", "--f", "exp(x^2)", "--a", "0", "--b", "1", "--which", "t1",
         "--c", "0.5", "--json"],
        ["certify", "--f", "exp(x^2)", "--a", "0", "--b", "1", "--grid", "16",
         "--refine", "1", "--json"],
        ["integrate", "--f", "exp(x^2)", "--a", "0", "--b", "1", "--json"],
    ]:
        code = main(argv)
        out = capsys.readouterr().out
        assert out.endswith("\n")
        assert dumps_canonical(json.loads(out)) + "\n" == out


def test_certify_json_fields(capsys):
    code, out, _ = run(capsys, "certify", "--f", "exp(x^2)", "--a", "0", "--b", "1",
                       "--grid", "32", "--refine", "2", "--json")
    assert code == 0
    doc = json.loads(out)
    outputs = doc["outputs"]
    assert outputs["status"] == "certified_positive"
    assert outputs["c_star"] > 0
    assert len(outputs["witness"]) == 3
    assert outputs["grid_size"] == 32 and outputs["refinement_rounds"] == 2


def test_theorem2_printed_not_applicable_is_marked(capsys):
    # decreasing on [0,1] (so f(b)-f(a) < 0 and the printed log is undefined)
    # yet strongly log-convex, so the corrected bound holds at a small c
    code, out, _ = run(capsys, "theorem2", "--f", "exp(x^2 - 2*x)", "--a", "0", "--b", "1",
                       "--c", "0.05", "--form", "printed", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["outputs"]["printed_applicable"] is False
    assert doc["outputs"]["rhs_as_printed"] is None
    assert doc["outputs"]["holds_corrected"] is True


def test_integrate_json_value(capsys):
    code, out, _ = run(capsys, "integrate", "--f", "x^2", "--a", "0", "--b", "1",
                       "--tol", "1e-12", "--json")
    assert code == 0
    doc = json.loads(out)
    assert abs(doc["outputs"]["value"] - 1.0 / 3.0) <= 1e-12
    assert doc["outputs"]["converged"] is True


def test_theorem2_violation_exits_one(capsys):
    # e^x is log-affine (maximal modulus 0), so any forced positive modulus
    # breaks the corrected bound
    code, out, _ = run(capsys, "theorem2", "--f", "exp(x)", "--a", "0", "--b", "1",
                       "--c", "0.5", "--json")
    assert code == 1
    doc = json.loads(out)
    assert doc["outputs"]["holds_corrected"] is False
    assert len(doc["violations"]) == 1
    assert doc["violations"][0]["margin"] < 0


def test_integrate_non_convergence_is_reported_not_fatal(capsys):
    # absolute 1e-14 on an e^20-magnitude integral is below one ulp; the best
    # estimate comes back with converged=false and a clean exit
    code, out, _ = run(capsys, "integrate", "--f", "exp(20*x)", "--a", "0", "--b", "1",
                       "--tol", "1e-14", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["outputs"]["converged"] is False
    expected = (math.exp(20.0) - 1.0) / 20.0
    assert doc["outputs"]["value"] == pytest.approx(expected, rel=1e-12)


def test_maxc_constant(capsys):
    code, out, _ = run(capsys, "maxc", "--f", "1", "--a", "0", "--b", "1", "--json")
    assert code == 0
    assert abs(json.loads(out)["outputs"]["max_c"]) <= 1e-9


def test_maxc_non_log_convex_exits_two(capsys):
    code, _, err = run(capsys, "maxc", "--f", "exp(-x^2)", "--a", "0", "--b", "1")
    assert code == 2
    assert "log-convex" in err


# --------------------------------------------------------------------------
# CSV reports
# --------------------------------------------------------------------------

def test_chain_csv_rows(capsys):
    code, out, _ = run(capsys, "chain", "--f", "exp(x)", "--a", "0", "--b", "1",
                       "--which", "classical", "--csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "term_index,term_name,value,margin_to_next"
    assert len(lines) == 4  # header + 3 terms
    last = lines[-1].split(",")
    assert last[0] == "2" and last[-1] == ""  # final term has no next margin


def test_sweep_csv_rows(capsys):
    code, out, _ = run(capsys, "sweep", "--families", "exp_quadratic", "--cases", "3",
                       "--seed", "9", "--csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "case_index,family,a,b,c,chain_kind,holds,min_margin"
    assert len(lines) == 1 + 3 * 4  # header + cases x chain kinds


def test_sweep_csv_exit_code_tracks_violations(capsys):
    code, out, _ = run(capsys, "sweep", "--families", "scaled_power", "--cases", "8",
                       "--seed", "33", "--csv")
    assert code == 1
    assert any(",false," in line for line in out.splitlines())


# --------------------------------------------------------------------------
# sweeps and determinism
# --------------------------------------------------------------------------

def test_sweep_json_and_out_file(tmp_path, capsys):
    out_path = tmp_path / "report.json"
    code, out, _ = run(capsys, "sweep", "--families", "exp_quadratic,log_affine",
                       "--cases", "5", "--seed", "3", "--json", "--out", str(out_path))
    assert code == 0
    assert out_path.read_text(encoding="utf-8") == out
    doc = json.loads(out)
    assert doc["outputs"]["cases_run"] == 5
    counts = doc["outputs"]
    for kind in ["dragomir_mond", "theorem1", "theorem2_corrected", "theorem2_as_printed"]:
        total = counts["holds"][kind] + counts["violated"][kind] + counts["not_applicable"][kind]
        assert total == 5


def test_sweep_with_violations_exits_one(capsys):
    # scaled_power draws log-concave functions, so six-term violations happen
    code, out, _ = run(capsys, "sweep", "--families", "scaled_power", "--cases", "12",
                       "--seed", "33", "--json")
    doc = json.loads(out)
    assert (code == 1) == (len(doc["violations"]) >= 1)
    assert code == 1  # seed chosen so violations exist


@pytest.mark.parametrize(
    "argv",
    [
        ["chain", "--f", "exp(x^2)", "--a", "0", "--b", "1", "--which", "dm", "--json"],
        ["sweep", "--families", "exp_quadratic", "--cases", "4", "--seed", "7", "--json"],
        ["sweep", "--families", "exp_quadratic", "--cases", "4", "--seed", "7", "--csv"],
        ["certify", "--f", "exp(x^2)", "--a", "0", "--b", "1", "--json"],
    ],
)
def test_identical_invocations_are_byte_identical(argv, capsys):
    main(list(argv))
    first = capsys.readouterr().out
    main(list(argv))
    second = capsys.readouterr().out
    assert first == second


# --------------------------------------------------------------------------
# human-readable and key,value outputs (smoke level)
# --------------------------------------------------------------------------

def test_certify_csv_and_human(capsys):
    code, out, _ = run(capsys, "certify", "--f", "exp(x^2)", "--a", "0", "--b", "1",
                       "--grid", "16", "--refine", "1", "--csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "key,value"
    assert any(line.startswith("c_star,") for line in lines)
    assert any(line == "status,certified_positive" for line in lines)

    code, out, _ = run(capsys, "certify", "--f", "exp(x^2)", "--a", "0", "--b", "1",
                       "--grid", "16", "--refine", "1")
    assert code == 0
    assert "c_star" in out and "witness" in out and "certified_positive" in out


def test_theorem2_csv_and_human(capsys):
    code, out, _ = run(capsys, "theorem2", "--f", "exp(x^2)", "--a", "0", "--b", "1",
                       "--c", "0.25", "--form", "both", "--csv")
    assert code == 0
    assert out.splitlines()[0] == "key,value"
    assert any(line.startswith("lhs,") for line in out.splitlines())

    code, out, _ = run(capsys, "theorem2", "--f", "exp(x^2 - 2*x)", "--a", "0", "--b", "1",
                       "--c", "0.05", "--form", "both")
    assert code == 0
    assert "not applicable" in out  # the printed variant's marker


def test_integrate_and_maxc_csv(capsys):
    code, out, _ = run(capsys, "integrate", "--f", "x^2", "--a", "0", "--b", "1", "--csv")
    assert code == 0
    assert any(line.startswith("value,") for line in out.splitlines())
    code, out, _ = run(capsys, "maxc", "--f", "exp(x^2)", "--a", "0", "--b", "1", "--csv")
    assert code == 0
    assert out.splitlines()[1].startswith("max_c,")


def test_sweep_human_summary_mentions_violations(capsys):
    code, out, _ = run(capsys, "sweep", "--families", "scaled_power", "--cases", "8",
                       "--seed", "33")
    assert code == 1
    assert "VIOLATION" in out
    assert "dragomir_mond" in out


def test_version_flag(capsys):
    assert main(["--version"]) == 0
    assert "hhcert" in capsys.readouterr().out
