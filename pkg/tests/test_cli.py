"""End-to-end tests for the command-line front end."""

from __future__ import annotations

import dataclasses
import json
import re

import pytest

from pstwalk import cli
from pstwalk.cli import EXIT_CERTIFICATE, EXIT_CROSS_CHECK, EXIT_OK, EXIT_USAGE, main
from pstwalk.ctqw import TransferReport

FLOAT_FIELD = re.compile(r"^-?\d\.\d{12}e[+-]\d{2,3}$")


def run_ok(argv):
    code = main(argv)
    assert code == EXIT_OK
    return code


# ---------------------------------------------------------------------------
# verify


def test_verify_gl3_passes_and_notes_matching_complement(capsys):
    assert main(["verify", "--family", "gl", "--q", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "verdict: ok" in out
    assert "complement of 24 disjoint edges" in out
    assert "transfer time pi/2" in out
    assert out.count("notice:") == 2  # the two retained hand forms that disagree


def test_verify_gl3_small_orders_variant(capsys):
    assert main(["verify", "--family", "gl", "--q", "3", "--variant", "small-orders"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "verdict: ok" in out
    assert "notice:" not in out  # no closed forms for the variant
    assert "cross-check walk_ok: True" in out


@pytest.mark.parametrize("family,q", [("gu", 3), ("sl", 3), ("sl", 5)])
def test_verify_other_families_pass(family, q):
    run_ok(["verify", "--family", family, "--q", str(q)])


def test_verify_gl5_skips_simulation_but_builds_graph(capsys):
    assert main(["verify", "--family", "gl", "--q", "5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "cross-check simulation: skipped: 480 vertices" in out
    assert "cross-check degree_row_sums_match: True" in out


def test_verify_bound_flag_disables_enumeration(capsys):
    assert main(["verify", "--family", "gl", "--q", "3", "--brute-force-bound", "10"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "cross-check explicit_graph: skipped: group order 48" in out


# ---------------------------------------------------------------------------
# usage errors (exit code 1)


def test_unknown_family_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--family", "zz", "--q", "3"])
    assert exc.value.code == EXIT_USAGE


def test_missing_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == EXIT_USAGE


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--family", "gl", "--q", "4"],
        ["verify", "--family", "gl", "--q", "15"],
        ["verify", "--family", "sl", "--q", "9"],
        ["verify", "--family", "gu", "--q", "3", "--variant", "small-orders"],
        ["orbital", "--q", "5"],
        ["orbital", "--q", "9"],
    ],
)
def test_invalid_targets_are_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE
    assert "error:" in capsys.readouterr().err


def test_unknown_format_is_usage_error(tmp_path, capsys):
    argv = [
        "verify", "--family", "gl", "--q", "3",
        "--out-dir", str(tmp_path), "--format", "edges,bogus",
    ]
    assert main(argv) == EXIT_USAGE
    assert "unknown format" in capsys.readouterr().err


def test_edges_format_needs_explicit_graph(tmp_path, capsys):
    argv = [
        "orbital", "--q", "7",
        "--out-dir", str(tmp_path), "--format", "edges",
    ]
    assert main(argv) == EXIT_USAGE
    assert "explicit graph" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# orbital


def test_orbital_q3_passes_with_display_notices(capsys):
    assert main(["orbital", "--q", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "verdict: ok" in out
    assert "cross-check walk_pairs: 60" in out
    assert "linear-energy-display" in out
    assert out.count("notice:") == 2


def test_orbital_q7_character_sum_only(capsys):
    assert main(["orbital", "--q", "7"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "character-sum-only mode" in out
    assert "verdict: ok" in out


# ---------------------------------------------------------------------------
# artifacts


def test_export_gl3_artifacts(tmp_path):
    run_ok(["export", "--family", "gl", "--q", "3", "--out-dir", str(tmp_path)])
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["schema"] == cli.SCHEMA
    assert report["target"] == {
        "kind": "cayley", "family": "gl", "q": 3, "variant": "standard",
    }
    assert report["certificate"]["residue"] == 2
    assert report["certificate"]["gap"] == 2
    assert report["cross_checks"]["walk_pairs"] == 24
    assert FLOAT_FIELD.match(report["certificate"]["time"])
    assert FLOAT_FIELD.match(report["cross_checks"]["spectrum_deviation"])
    assert len(report["notices"]) == 2

    csv_lines = (tmp_path / "spectrum.csv").read_text().splitlines()
    assert csv_lines[0] == "family,q,char-kind,char-params,degree,theta,multiplicity,phi-sign"
    assert csv_lines[1] == "gl,3,linear,0,1,46,1,1"
    assert len(csv_lines) == 1 + 8  # q + 4 irreducibles of GL(2,3)

    edge_lines = (tmp_path / "graph.edges").read_text().splitlines()
    assert len(edge_lines) == 46 * 48 // 2
    pairs = [tuple(map(int, line.split())) for line in edge_lines]
    assert all(0 <= u < v < 48 for u, v in pairs)
    assert pairs == sorted(pairs)


def test_export_orbital_q3_artifacts(tmp_path):
    run_ok(["export", "--family", "orbital", "--q", "3", "--out-dir", str(tmp_path)])
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["target"] == {"kind": "orbital", "family": "orbital", "q": 3}
    assert report["construction"]["cosets"] == 120
    assert report["construction"]["subgroup_order"] == 48
    assert report["construction"]["transversal"] == [1, 4, 6, 7]
    assert report["construction"]["z_scalar"] == 6
    assert report["certificate"]["ok"] is True
    assert report["certificate"]["mode"] == "explicit"

    csv_lines = (tmp_path / "spectrum.csv").read_text().splitlines()
    assert csv_lines[1] == "orbital,3,linear,0,1,73,1,1"
    assert len(csv_lines) == 1 + 16

    edge_lines = (tmp_path / "graph.edges").read_text().splitlines()
    assert len(edge_lines) == 73 * 120 // 2


def test_export_orbital_q7_skips_edges(tmp_path):
    run_ok(["export", "--family", "orbital", "--q", "7", "--out-dir", str(tmp_path)])
    assert (tmp_path / "report.json").exists()
    assert (tmp_path / "spectrum.csv").exists()
    assert not (tmp_path / "graph.edges").exists()
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["certificate"]["mode"] == "character-sum"
    assert report["certificate"]["fidelity_deviation"] is None
    assert len(report["spectrum"]) == 64


def test_reports_are_byte_deterministic(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    for out in (first, second):
        run_ok(["verify", "--family", "gl", "--q", "3", "--out-dir", str(out)])
    for name in ("report.json", "spectrum.csv", "graph.edges"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_format_selection_writes_single_file(tmp_path):
    run_ok([
        "verify", "--family", "sl", "--q", "3",
        "--out-dir", str(tmp_path), "--format", "json",
    ])
    assert (tmp_path / "report.json").exists()
    assert not (tmp_path / "spectrum.csv").exists()
    assert not (tmp_path / "graph.edges").exists()


# ---------------------------------------------------------------------------
# failure exit codes, forced through doctored pipeline stages


def test_certificate_failure_exits_2(monkeypatch, capsys):
    real = cli.analyze

    def doctored(tag, q, variant):
        analysis = real(tag, q, variant)
        bad = dataclasses.replace(
            analysis.certificate, ok=False, reason="forced failure for the test"
        )
        return analysis._replace(certificate=bad)

    monkeypatch.setattr(cli, "analyze", doctored)
    assert main(["verify", "--family", "gl", "--q", "3"]) == EXIT_CERTIFICATE
    out = capsys.readouterr().out
    assert "certificate: FAILED" in out
    assert "verdict: certificate failure" in out


def test_spectrum_mismatch_exits_3(monkeypatch, capsys):
    monkeypatch.setattr(cli, "_spectrum_check", lambda *a: 1.0)
    assert main(["verify", "--family", "gl", "--q", "3"]) == EXIT_CROSS_CHECK
    out = capsys.readouterr().out
    assert "cross-check spectrum_matches: False" in out
    assert "verdict: cross-check mismatch" in out


def test_walk_failure_exits_3(monkeypatch):
    def failing_scan(adjacency, pairs, **kw):
        return TransferReport(
            ok=False,
            time=1.0,
            times_checked=(1.0,),
            min_fidelity=0.5,
            mid_fidelity=0.0,
            pairs_checked=len(pairs),
            reason="forced failure for the test",
        )

    monkeypatch.setattr(cli, "pst_scan", failing_scan)
    assert main(["verify", "--family", "sl", "--q", "3"]) == EXIT_CROSS_CHECK
    assert main(["orbital", "--q", "3"]) == EXIT_CROSS_CHECK


def test_erratum_notices_leave_exit_zero(tmp_path):
    """Runs that report hand-form discrepancies still validate (gu q=3)."""
    run_ok(["verify", "--family", "gu", "--q", "3", "--out-dir", str(tmp_path)])
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["verdict"] == "ok"
    assert len(report["notices"]) == 6
    assert any("linear" in n for n in report["notices"])
