"""Command line behavior: output shapes, determinism, exit codes."""

import json

import pytest
from golden_tables import P3_EXAMPLE

from graphspir import cli
from graphspir.audit import AuditReport, CheckResult


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_tables_prints_the_golden_table(capsys):
    code, out, err = run(capsys, "tables", "--which", "p3-example")
    assert code == 0
    assert err == ""
    assert out == P3_EXAMPLE + "\n"


def test_tables_output_is_byte_identical_across_runs(capsys):
    first = run(capsys, "tables", "--which", "c3", "--format", "json")
    second = run(capsys, "tables", "--which", "c3", "--format", "json")
    assert first == second
    assert first[0] == 0
    json.loads(first[1])


def test_tables_writes_to_a_file(tmp_path, capsys):
    target = tmp_path / "out.txt"
    code, out, _ = run(capsys, "tables", "--which", "p3-capacity", "--output", str(target))
    assert code == 0
    assert out == ""
    assert target.read_text(encoding="utf-8").rstrip("\n").endswith("b2+s2")


def test_convert_reports_exact_parameters(capsys):
    code, out, err = run(capsys, "convert", "--graph", "path", "--n", "5")
    assert code == 0
    assert out.splitlines() == [
        "L'=2",
        "D'=5",
        "x=4",
        "y=1",
        "L=8",
        "D=25",
        "rate=8/25",
        "rho=17/8",
    ]


def test_convert_full_renders_the_answers(capsys):
    code, out, _ = run(capsys, "convert", "--graph", "cycle", "--n", "3", "--full")
    assert code == 0
    assert "rate=4/11" in out
    assert "theta=1 | database 1 | database 2 | database 3" in out
    code, out, _ = run(
        capsys, "convert", "--graph", "path", "--n", "3", "--full", "--format", "json"
    )
    assert code == 0
    assert '"theta": 1' in out


def test_convert_rejects_unsupported_cycles(capsys):
    code, out, err = run(capsys, "convert", "--graph", "cycle", "--n", "4")
    assert code == 2
    assert out == ""
    assert "3 servers" in err


def test_audit_small_scheme_passes(capsys):
    code, out, _ = run(capsys, "audit", "--scheme", "p3-capacity")
    assert code == 0
    report = json.loads(out)
    assert report["ok"] is True
    assert {c["status"] for c in report["checks"]} == {"pass"}


def test_audit_is_deterministic(capsys):
    args = ("audit", "--scheme", "p3-capacity", "--format", "json")
    assert run(capsys, *args) == run(capsys, *args)


def test_audit_table_format(capsys):
    code, out, _ = run(capsys, "audit", "--scheme", "p3-capacity", "--format", "table")
    assert code == 0
    assert out.startswith("scheme: p3-capacity\n")
    assert out.rstrip("\n").endswith("pass")


def test_audit_exit_code_is_one_on_failure(capsys, monkeypatch):
    failing = AuditReport(
        scheme="p3-capacity",
        checks=(CheckResult(name="reliability", status="fail"),),
    )
    monkeypatch.setattr(cli, "audit_family", lambda *a, **k: failing)
    code, out, _ = run(capsys, "audit", "--scheme", "p3-capacity")
    assert code == 1
    assert json.loads(out)["ok"] is False


def test_audit_rejects_unknown_scheme(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["audit", "--scheme", "p9-mystery"])
    assert exc.value.code == 2


def test_bounds_csv_header_and_rows(capsys):
    code, out, _ = run(capsys, "bounds", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "kind,N,graph_replicated,lower,upper,pir"
    assert "path,3,1/3,1/2,1/2,2/3" in lines
    assert "cycle,3,1/3,4/11,4/9,1/2" in lines
    assert len(lines) == 13  # header + 6 path + 6 cycle


def test_bounds_single_n_and_json(capsys):
    code, out, _ = run(capsys, "bounds", "--kind", "path", "--n", "4", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert rows == [
        {
            "kind": "path",
            "N": 4,
            "graph_replicated": "1/4",
            "lower": "3/8",
            "upper": "3/7",
            "pir": "1/2",
        }
    ]


def test_bounds_rejects_bad_ranges(capsys):
    code, _, err = run(capsys, "bounds", "--n", "6..3")
    assert code == 2
    assert err != ""
    code, _, err = run(capsys, "bounds", "--n", "abc")
    assert code == 2
    code, _, err = run(capsys, "bounds", "--n", "2..4")
    assert code == 2  # bounds need at least 3 servers


def test_missing_required_arguments_exit_two(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["convert", "--graph", "path"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["no-such-command"])
    assert exc.value.code == 2
