import csv
import io
import json

import pytest

from padicdyn.basins import AnalysisConfig
from padicdyn.claims import CATALOG, CLAIMS, Status, catalog_for, reports_json, run_suite, verify_claim
from padicdyn.cli import main
from padicdyn.dynamics import MapParams


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- claims ----------------------------------------------------------------------


def test_catalog_only_names_known_claims():
    assert {cid for cid, _, _ in CATALOG} <= set(CLAIMS)


def test_suites_are_ordered_by_claim():
    order = list(CLAIMS)
    ids = [cid for cid, _, _ in catalog_for("all")]
    assert ids == sorted(ids, key=order.index)
    with pytest.raises(ValueError):
        catalog_for("section9")


def test_unknown_claim():
    with pytest.raises(KeyError):
        verify_claim("no-such-claim", MapParams.parse(5, "5"))


def test_hypothesis_mismatch_is_skipped_not_failed():
    r = verify_claim("unit-a-basins", MapParams.parse(7, "7"))
    assert r.status is Status.SKIPPED and "|a| = 1" in r.reason


def test_failures_carry_witnesses():
    r = verify_claim("unit-a-coefficient-open-disc", MapParams.parse(17, "15"))
    assert r.status is Status.FAIL and r.witnesses


def test_section4_examples_pass():
    reports = run_suite("section4")
    assert [r.claim_id for r in reports] == [
        "unit-a-both-indifferent",
        "unit-a-both-indifferent",
        "unit-a-indifferent-degenerate-sum",
        "unit-a-mixed-kinds",
    ]
    assert all(r.status is Status.PASS for r in reports)


def test_section3_table_passes():
    reports = run_suite("section3", AnalysisConfig(depth=1))
    small_a = [r for r in reports if r.claim_id == "a2p4-small-a"]
    assert [(r.p, r.status) for r in small_a][:4] == [(2, Status.PASS)] * 4
    assert all(r.status is Status.PASS for r in reports)


def test_report_json_shape():
    doc = json.loads(reports_json(run_suite("section4")))
    assert doc["summary"] == {"Pass": 4, "Fail": 0, "Skipped": 0}
    first = doc["reports"][0]
    assert {"claim_id", "p", "a", "status", "counts", "witnesses"} <= set(first)


# -- CLI examples ------------------------------------------------------------------


def test_cli_sqrt_a2p4(capsys):
    code, out, _ = run_cli(capsys, "--p", "11", "--a", "4", "--format", "json", "sqrt", "a2p4")
    doc = json.loads(out)
    assert code == 0 and doc["exists"] is True


def test_cli_sqrt_minus_three(capsys):
    _, out, _ = run_cli(capsys, "--p", "5", "--format", "json", "sqrt", "-3")
    assert json.loads(out)["exists"] is False
    _, out, _ = run_cli(capsys, "--p", "7", "--format", "json", "sqrt", "-3")
    doc = json.loads(out)
    assert doc["exists"] is True
    assert doc["roots"][0]["unit_residue_mod_p"] == 2


def test_cli_classify(capsys):
    _, out, _ = run_cli(capsys, "--p", "11", "--a", "1", "--format", "json", "classify")
    doc = json.loads(out)
    assert [fp["kind"] for fp in doc["fixed_points"]] == ["attractive", "indifferent", "attractive"]
    assert doc["partial"] is False
    _, out, _ = run_cli(capsys, "--p", "5", "--a", "1/5", "classify")
    assert "repelling" in out and "p^2" in out


def test_cli_orbit_escapes(capsys):
    code, out, _ = run_cli(capsys, "--p", "5", "--a", "1/5", "--format", "json", "orbit", "1/25")
    assert code == 0 and json.loads(out)["fate"]["outcome"] == "escaped"


def test_cli_scan_converges(capsys):
    code, out, _ = run_cli(capsys, "--p", "7", "--a", "7", "--format", "json", "scan", "S(0,-1)")
    doc = json.loads(out)
    assert code == 0 and doc["counts"] == {"converged:x1": doc["samples"]}


def test_cli_scan_csv(capsys):
    _, out, _ = run_cli(capsys, "--p", "7", "--a", "7", "--depth", "1", "--format", "csv", "scan", "B(x2,-1)")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["point", "valuation", "fate", "steps"]
    assert len(rows) == 1 + 3 * 2 * 6


def test_cli_siegel_open(capsys):
    _, out, _ = run_cli(capsys, "--p", "7", "--a", "7", "siegel", "x2")
    assert "OpenBall" in out


def test_cli_unknown_center_is_an_error(capsys):
    code, _, err = run_cli(capsys, "--p", "3", "--a", "1", "scan", "S(x2,0)")
    assert code == 2 and "unavailable" in err


def test_cli_parse_errors(capsys):
    assert run_cli(capsys, "--p", "5", "--a", "abc", "classify")[0] == 2
    assert run_cli(capsys, "--p", "5", "--precision", "8", "--a", "1", "classify")[0] == 2
    assert run_cli(capsys, "--p", "5", "frobnicate")[0] == 2
    assert run_cli(capsys, "--p", "5", "classify")[0] == 2
    assert run_cli(capsys, "--p", "5", "--a", "5", "scan", "Q(0,1)")[0] == 2


def test_cli_reproduce_section4(capsys, tmp_path):
    out = tmp_path / "r.csv"
    code, _, _ = run_cli(capsys, "--format", "csv", "--out", str(out), "reproduce", "section4")
    rows = list(csv.reader(out.open()))
    assert code == 0
    assert rows[0] == ["claim_id", "p", "a", "status"]
    assert [r[3] for r in rows[1:]] == ["Pass"] * 4


def test_cli_reproduce_exit_code_follows_failures(reproduce_all):
    doc = json.loads(reproduce_all.first)
    assert (reproduce_all.exit_code != 0) == (doc["summary"]["Fail"] > 0)


def test_cli_reproduce_all_has_no_failures(reproduce_all):
    doc = json.loads(reproduce_all.first)
    failing = [(r["claim_id"], r["p"], r["a"]) for r in doc["reports"] if r["status"] == "Fail"]
    assert failing == []
