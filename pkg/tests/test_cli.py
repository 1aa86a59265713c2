"""End-to-end CLI behavior: exit codes, output formats, error paths."""

from __future__ import annotations

import json


from tddslicer.cli import main
from tddslicer.corpus import corpus_path

MAX2 = str(corpus_path("max2.prog"))
DIV_ORACLE = str(corpus_path("div_oracle.prog"))
DIV_SESSION = str(corpus_path("div.session"))
DOM = "a in -8..8, b in -8..8"


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCheck:
    def test_verified_exits_zero(self, capsys):
        code, out, _ = run_cli(
            capsys, "check", MAX2,
            "--pre", "a > b", "--post", "a > b && max == a", "--domain", DOM,
        )
        assert code == 0
        assert "verdict: verified" in out

    def test_counterexample_exits_one(self, capsys):
        code, out, _ = run_cli(
            capsys, "check", MAX2,
            "--pre", "a > b", "--post", "max == b", "--domain", DOM,
        )
        assert code == 1
        assert "counterexample" in out
        assert "witness" in out

    def test_missing_file_exits_two(self, capsys):
        code, _, err = run_cli(
            capsys, "check", "missing.prog",
            "--pre", "TRUE", "--post", "TRUE", "--domain", "x in 0..1",
        )
        assert code == 2
        assert "not found" in err

    def test_bad_predicate_exits_two(self, capsys):
        code, _, err = run_cli(
            capsys, "check", MAX2,
            "--pre", "a >", "--post", "TRUE", "--domain", DOM,
        )
        assert code == 2
        assert "expected expression" in err

    def test_machine_format_schema(self, capsys):
        code, out, _ = run_cli(
            capsys, "check", MAX2,
            "--pre", "a > b", "--post", "a > b && max == a", "--domain", DOM,
            "--format", "machine",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["format_version"] == 1
        assert payload["command"] == "check"
        assert payload["verdict"] == "verified"
        assert payload["witness"] is None
        assert payload["checked_points"] == 136
        assert payload["domain"] == DOM

    def test_machine_output_is_golden(self, capsys):
        _, out, _ = run_cli(
            capsys, "check", MAX2,
            "--pre", "a > b", "--post", "a > b && max == a", "--domain", DOM,
            "--format", "machine",
        )
        assert out == (
            "{\n"
            '  "checked_points": 136,\n'
            '  "command": "check",\n'
            '  "domain": "a in -8..8, b in -8..8",\n'
            '  "format_version": 1,\n'
            '  "verdict": "verified",\n'
            '  "witness": null\n'
            "}\n"
        )

    def test_machine_witness_fields(self, capsys):
        code, out, _ = run_cli(
            capsys, "check", MAX2,
            "--pre", "a > b", "--post", "max == b", "--domain", DOM,
            "--format", "machine",
        )
        assert code == 1
        payload = json.loads(out)
        assert payload["verdict"] == "counterexample"
        assert payload["witness"]["inputs"] == {"a": -7, "b": -8}


class TestSlice:
    def test_listing_slice_text(self, capsys):
        code, out, _ = run_cli(
            capsys, "slice", MAX2,
            "--pre", "a > b", "--post", "a > b && max == a", "--domain", DOM,
        )
        assert code == 0
        assert "if (a > b) {" in out
        assert "} else {" not in out  # the else branch is gone
        assert "retained: statement@1, statement@2" in out

    def test_unverified_contract_exits_one(self, capsys):
        code, _, err = run_cli(
            capsys, "slice", MAX2,
            "--pre", "a > b", "--post", "max == b", "--domain", DOM,
        )
        assert code == 1
        assert "does not verify" in err

    def test_cap_refusal_suggests_greedy(self, capsys, tmp_path):
        body = " ".join(f"o := {i};" for i in range(17))
        wide = tmp_path / "wide.prog"
        wide.write_text(f"proc f(in a, in b, out o) {{ {body} }}")
        code, _, err = run_cli(
            capsys, "slice", str(wide),
            "--pre", "TRUE", "--post", "TRUE", "--domain", DOM,
        )
        assert code == 2
        assert "greedy" in err

    def test_machine_format(self, capsys):
        code, out, _ = run_cli(
            capsys, "slice", MAX2,
            "--pre", "a > b", "--post", "a > b && max == a", "--domain", DOM,
            "--format", "machine",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["minimal"] is True
        assert {"kind": "statement", "anchor": 1} in payload["retained"]
        assert payload["verification"]["verdict"] == "verified"


class TestUnion:
    def test_paper_union_with_tautology(self, capsys):
        code, out, _ = run_cli(
            capsys, "union",
            "--pre", "a > b", "--post", "a > b && max == a",
            "--pre", "a <= b", "--post", "a <= b && max == b",
            "--domain", DOM,
        )
        assert code == 0
        assert "pre:  a > b || a <= b" in out
        assert "post: (a > b && max == a) || (a <= b && max == b)" in out
        assert "precondition is a tautology over domain: true" in out

    def test_union_without_domain_skips_tautology(self, capsys):
        code, out, _ = run_cli(
            capsys, "union",
            "--pre", "a > b", "--post", "max == a",
            "--pre", "a > b", "--post", "max == a",
        )
        assert code == 0
        assert "tautology" not in out

    def test_needs_two_pairs(self, capsys):
        code, _, err = run_cli(
            capsys, "union", "--pre", "TRUE", "--post", "TRUE",
        )
        assert code == 2
        assert "exactly two" in err

    def test_non_tautology_prints_counterexample(self, capsys):
        code, out, _ = run_cli(
            capsys, "union",
            "--pre", "a > b", "--post", "max == a",
            "--pre", "a == b", "--post", "max == a",
            "--domain", DOM,
        )
        assert code == 0
        assert "tautology over domain: false" in out
        assert "counterexample: a=-8, b=-7" in out


class TestReplay:
    def test_div_session_ok(self, capsys):
        code, out, _ = run_cli(capsys, "replay", DIV_SESSION)
        assert code == 0
        assert "QLTY: 100.0" in out
        assert "result: OK" in out

    def test_broken_session_exits_one(self, capsys, tmp_path):
        (tmp_path / "inc.prog").write_text("proc inc(in x, out y) { y := x + 1; }")
        (tmp_path / "bad.session").write_text(
            "[session]\nfinal = inc.prog\ndomain = x in 0..3\n"
            "[cycle 1]\ntest.name = t\ntest.inputs = x=1\ntest.expect = y=3\n"
            "contract.pre = TRUE\ncontract.post = TRUE\nsnapshot = inc.prog\n"
        )
        code, out, _ = run_cli(capsys, "replay", str(tmp_path / "bad.session"))
        assert code == 1
        assert "green check failed" in out

    def test_malformed_session_exits_two(self, capsys, tmp_path):
        bad = tmp_path / "nope.session"
        bad.write_text("[cycle 1]\n")
        code, _, err = run_cli(capsys, "replay", str(bad))
        assert code == 2
        assert "session" in err

    def test_machine_report_is_byte_identical_across_runs(self, capsys):
        code1, out1, _ = run_cli(capsys, "replay", DIV_SESSION, "--format", "machine")
        code2, out2, _ = run_cli(capsys, "replay", DIV_SESSION, "--format", "machine")
        assert code1 == code2 == 0
        assert out1 == out2
        payload = json.loads(out1)
        assert payload["format_version"] == 1
        assert payload["qlty"] == 100.0
        assert len(payload["cycles"]) == 9


class TestTrace:
    def test_projected_trace(self, capsys):
        code, out, _ = run_cli(
            capsys, "trace", DIV_ORACLE, "--inputs", "x=4, y=2", "--vars", "q",
        )
        assert code == 0
        assert out.splitlines()[:3] == [
            "stmt 2: q := 0",
            "stmt 5: q := 1",
            "stmt 5: q := 2",
        ]

    def test_full_trace_when_vars_omitted(self, capsys):
        code, out, _ = run_cli(capsys, "trace", DIV_ORACLE, "--inputs", "x=4, y=2")
        assert code == 0
        assert "stmt 1: t := 4" in out

    def test_budget_exhaustion_partial_trace_exit_one(self, capsys, tmp_path):
        looping = tmp_path / "loop.prog"
        looping.write_text("proc f(in x, out y) { y := 7; while (x == x) { } }")
        code, out, _ = run_cli(
            capsys, "trace", str(looping), "--inputs", "x=1", "--budget", "10",
        )
        assert code == 1
        assert "stmt 1: y := 7" in out  # partial trajectory survives
        assert "budget_exceeded" in out

    def test_machine_trace(self, capsys):
        code, out, _ = run_cli(
            capsys, "trace", DIV_ORACLE, "--inputs", "x=7, y=2", "--format", "machine",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["final"]["q"] == 3
        assert payload["final"]["r"] == 1
        assert payload["status"] == "ok"


def test_no_color_codes_when_not_a_tty(capsys, monkeypatch):
    monkeypatch.setenv("TDDSLICER_COLOR", "0")
    _, out, _ = run_cli(
        capsys, "check", MAX2,
        "--pre", "a > b", "--post", "a > b && max == a", "--domain", DOM,
    )
    assert "\033[" not in out


def test_usage_error_exits_two(capsys):
    assert main(["unknown-command"]) == 2
    assert main([]) == 2
