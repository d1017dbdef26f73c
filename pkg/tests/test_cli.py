import json
import math
import os

import pytest

from meanlab.cli import main

import oracles


@pytest.fixture
def run(capsys):
    def _run(*argv):
        rc = main(list(argv))
        captured = capsys.readouterr()
        return rc, captured.out, captured.err

    return _run


FAST_VERIFY = ("--grid-min", "0.1", "--grid-max", "1e8", "--points", "500")


class TestEval:
    def test_mean_symbol_17_digits(self, run):
        rc, out, _ = run("eval", "--a", "4", "--b", "1", "X")
        assert rc == 0
        value = out.strip()
        assert float(value) == pytest.approx(oracles.X_4_1, rel=1e-15)
        digits = value.replace(".", "").replace("-", "").lstrip("0")
        assert len(digits) >= 16  # %.17g keeps a full round-trip mantissa

    def test_diagonal(self, run):
        rc, out, _ = run("eval", "--a", "3", "--b", "3", "P")
        assert rc == 0 and float(out) == 3.0

    def test_expression_between_power_means(self, run):
        rc, out, _ = run("eval", "--a", "4", "--b", "1", "(P+X)/2")
        v = float(out)
        m_half = 2.25
        m_k = ((4**oracles.K_EXPONENT + 1) / 2) ** (1 / oracles.K_EXPONENT)
        assert rc == 0 and m_half < v < m_k

    def test_parse_error_exit_2(self, run):
        rc, _, err = run("eval", "--a", "4", "--b", "1", "(2*G+")
        assert rc == 2 and "error" in err

    def test_domain_error_exit_2(self, run):
        rc, _, err = run("eval", "--a", "-1", "--b", "1", "A")
        assert rc == 2 and "error" in err

    def test_usage_error_exit_2(self, run):
        assert run("eval", "--a", "4", "X")[0] == 2


class TestVerify:
    def test_green_on_resolvable_grid(self, run):
        rc, out, _ = run("verify", *FAST_VERIFY)
        assert rc == 0
        doc = json.loads(out)
        assert doc["overall_pass"] is True
        assert len(doc["chains"]) == 36
        assert all(c["passed"] for c in doc["chains"])
        assert all(row["abs_error"] < 1e-6 for row in doc["constants"])
        assert doc["tool"] == "meanlab" and doc["version"]

    def test_default_grid_reports_near_diagonal_guard_failures(self, run):
        # at a/b - 1 = 1e-6 most links sit below the 1e-13 guard (their true
        # margins are O(t^2) ~ 2.5e-13 times small constants, or O(t^4) and
        # beyond); the run is honest about it and exits 1
        rc, out, _ = run("verify", "--points", "400")
        assert rc == 1
        doc = json.loads(out)
        assert doc["overall_pass"] is False
        failing = [c for c in doc["chains"] if not c["passed"]]
        assert failing
        # every reported failure is resolution-level, not a genuine violation
        for c in failing:
            for link in c["links"]:
                assert link["min_margin"] > -1e-12

    def test_absurdly_large_guard_fails_near_diagonal(self, run):
        rc, out, _ = run("verify", "--points", "400", "--guard", "1e-7")
        assert rc == 1
        doc = json.loads(out)
        bad = [c for c in doc["chains"] if not c["passed"]]
        assert bad
        argmins = [l["argmin_ratio"] for c in bad for l in c["links"] if l["min_margin"] <= 1e-7]
        assert min(argmins) < 1.01  # the failures concentrate at a/b -> 1

    def test_guard_out_of_range_exit_2(self, run):
        assert run("verify", "--guard", "1e-3")[0] == 2
        assert run("verify", "--guard", "0")[0] == 2

    def test_chain_selection(self, run):
        rc, out, _ = run("verify", *FAST_VERIFY, "--chains", "T11-1")
        doc = json.loads(out)
        assert rc == 0 and len(doc["chains"]) == 1
        assert doc["chains"][0]["chain"] == "T11-1"

    def test_unknown_chain_exit_2(self, run):
        assert run("verify", "--chains", "T99-9")[0] == 2

    def test_report_written_to_file(self, run, tmp_path):
        out_path = tmp_path / "report.json"
        rc, out, _ = run("verify", *FAST_VERIFY, "--out", str(out_path))
        assert rc == 0 and out == ""
        doc = json.loads(out_path.read_text())
        assert doc["overall_pass"] is True

    def test_unwritable_path_exit_2(self, run, tmp_path):
        rc, _, err = run("verify", *FAST_VERIFY, "--out", str(tmp_path / "no" / "dir" / "x.json"))
        assert rc == 2 and "error" in err

    def test_sharpness_section(self, run):
        rc, out, _ = run("verify", *FAST_VERIFY)
        doc = json.loads(out)
        probes = {(r["chain"], r["constant"]): r["outcome"] for r in doc["sharpness"]}
        assert probes[("T21a", "alpha")] == "violation_found"
        assert probes[("T21a", "beta")] == "violation_found"
        assert probes[("E11", "q")] == "violation_found"
        assert probes[("T24", "k")] == "still_holds"


class TestDeterminism:
    def test_repeated_runs_byte_identical(self, run):
        _, out1, _ = run("verify", *FAST_VERIFY)
        _, out2, _ = run("verify", *FAST_VERIFY)
        assert out1 == out2

    def test_thread_count_does_not_change_bytes(self, run, monkeypatch):
        monkeypatch.setenv("MEANLAB_THREADS", "1")
        _, serial, _ = run("verify", *FAST_VERIFY)
        monkeypatch.setenv("MEANLAB_THREADS", "0")
        _, auto, _ = run("verify", *FAST_VERIFY)
        monkeypatch.setenv("MEANLAB_THREADS", "4")
        _, four, _ = run("verify", *FAST_VERIFY)
        assert serial == auto == four

    def test_bad_thread_env_exit_2(self, run, monkeypatch):
        monkeypatch.setenv("MEANLAB_THREADS", "many")
        assert run("verify", *FAST_VERIFY)[0] == 2


class TestEmit:
    def test_ratio_function_rows_decrease(self, run):
        rc, out, _ = run("emit", "x_gap_ratio", "1000")
        assert rc == 0
        lines = out.strip().splitlines()
        assert lines[0] == "x,value"
        assert len(lines) == 1001
        vals = [float(line.split(",")[1]) for line in lines[1:]]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_log_gap_endpoints(self, run):
        rc, out, _ = run("emit", "log_gap_exponent", "10")
        vals = [float(line.split(",")[1]) for line in out.strip().splitlines()[1:]]
        assert rc == 0
        assert vals[0] == pytest.approx(1.0, abs=1e-9)
        assert vals[-1] == pytest.approx(oracles.BETA2, abs=1e-6)

    def test_expression_over_ratio_grid(self, run):
        rc, out, _ = run("emit", "X/A", "50")
        lines = out.strip().splitlines()
        assert rc == 0 and lines[0] == "ratio,value"
        vals = [float(line.split(",")[1]) for line in lines[1:]]
        assert all(0.0 < v < 1.0 for v in vals)  # X < A always

    def test_deterministic_bytes(self, run):
        _, out1, _ = run("emit", "x_over_p", "200")
        _, out2, _ = run("emit", "x_over_p", "200")
        assert out1 == out2

    def test_file_output_and_errors(self, run, tmp_path):
        target = tmp_path / "table.csv"
        rc, out, _ = run("emit", "x_over_p", "10", "--out", str(target))
        assert rc == 0 and out == ""
        assert target.read_text().startswith("x,value")
        assert run("emit", "x_over_p", "1")[0] == 2
        assert run("emit", "2*)", "10")[0] == 2
        assert run("emit", "x_over_p", "10", "--out", str(tmp_path / "no" / "x.csv"))[0] == 2


class TestBracketAndLimit:
    def test_bracket_output(self, run):
        rc, out, _ = run("bracket", "(P+X)/2", "1e-4")
        assert rc == 0
        lines = out.strip().splitlines()
        lower = float(lines[0].split(":")[1])
        upper = float(lines[1].split(":")[1])
        assert abs(lower - 0.5) < 1e-3
        assert lower < upper < oracles.K_EXPONENT + 1e-3

    def test_bracket_parse_error(self, run):
        assert run("bracket", "(P+", "1e-4")[0] == 2

    def test_limit_both_endpoints(self, run):
        rc, out, _ = run("limit", "x_gap_ratio")
        assert rc == 0
        assert "zero" in out and "half_pi" in out
        assert run("limit", "nosuchfn")[0] == 2

    def test_limit_single_endpoint(self, run):
        rc, out, _ = run("limit", "x_over_p", "--endpoint", "half_pi")
        assert rc == 0
        assert float(out.split(":")[1].split("(")[0]) == pytest.approx(
            oracles.PI_OVER_2E, abs=1e-8
        )


class TestConjecture:
    def test_report_labelled_unresolved(self, run):
        rc, out, _ = run("conjecture", *FAST_VERIFY)
        assert rc == 0
        doc = json.loads(out)
        assert doc["status"] == "unresolved"
        assert doc["resolved"] is False
        assert doc["conjecture"] == "P*X > I*L"
        assert doc["sign"] == "positive"
        assert math.isfinite(doc["min_relative_margin"])


class TestMisc:
    def test_version_flag(self, run):
        rc, out, _ = run("--version")
        assert rc == 0

    def test_missing_subcommand_usage_error(self, run):
        assert run()[0] == 2
