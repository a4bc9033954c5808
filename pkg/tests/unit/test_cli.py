"""
Tests for the command line: exit codes, report streams and error payloads
"""

import json

import pytest

from tsumlab.config import get_settings, load_settings
from tsumlab.main import EXIT_FAILED_CHECK, EXIT_OK, EXIT_USAGE, main
from tsumlab.models.instance import TsumInstance
from tsumlab.models.reports import BenchRow, OwfExperimentReport


def run_cli(capsys, *argv):
    code = main([str(arg) for arg in argv])
    out, err = capsys.readouterr()
    return code, out, err


def error_payload(err: str) -> dict:
    """The JSON error report is the last line written to stderr"""
    lines = [line for line in err.splitlines() if line.strip()]
    return json.loads(lines[-1])


@pytest.fixture
def instance_file(tmp_path, capsys):
    path = tmp_path / "instance.json"
    code, _, _ = run_cli(capsys, "--seed", 3, "--out", path, "gen", "--group", "cyclic:101", "--n", 6)
    assert code == EXIT_OK
    return path


class TestGen:
    """Test instance generation."""

    def test_writes_instance(self, capsys):
        code, out, _ = run_cli(capsys, "--seed", 3, "gen", "--group", "cyclic:101", "--n", 4)
        assert code == EXIT_OK
        instance = TsumInstance.model_validate_json(out)
        assert instance.n == 4
        assert instance.group.order == 101

    def test_deterministic(self, capsys):
        first = run_cli(capsys, "--seed", 9, "gen", "--group", "xor:8", "--n", 5)[1]
        second = run_cli(capsys, "--seed", 9, "gen", "--group", "xor:8", "--n", 5)[1]
        assert first == second

    def test_ids_are_strings(self, capsys):
        _, out, _ = run_cli(capsys, "gen", "--group", "cyclic:101", "--n", 2)
        data = json.loads(out)
        assert all(isinstance(a, str) for a in data["A1"])


class TestVerify:
    """Test solution sweeps from files."""

    @pytest.mark.parametrize("solution", ["sumset", "scan", "hellman"])
    def test_clean_sweep(self, capsys, instance_file, solution):
        code, out, _ = run_cli(capsys, "verify", "--instance", instance_file, "--solution", solution)
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["violations"] == []
        assert report["queries_checked"] == 101
        assert set(report["conjectures"]) == {"strong", "tradeoff", "weak"}

    def test_query_file(self, capsys, tmp_path, instance_file):
        queries = tmp_path / "queries.json"
        queries.write_text('["0", "5", "100"]')
        code, out, _ = run_cli(
            capsys, "verify", "--instance", instance_file, "--solution", "scan", "--queries-file", queries
        )
        assert code == EXIT_OK
        assert json.loads(out)["queries_checked"] == 3

    def test_corrupted_instance(self, capsys, tmp_path):
        """Malformed input exits 2 and names the offending location."""
        path = tmp_path / "broken.json"
        path.write_text('{"group": {"kind": "cyclic", "modulus": "7"}, "A1": ["x"], "A2": ["1"]}')
        code, out, err = run_cli(capsys, "verify", "--instance", path, "--solution", "sumset")
        assert code == EXIT_USAGE
        assert out == ""
        payload = error_payload(err)
        assert payload["error"] == "InstanceFormatError"
        assert payload["context"]["location"].endswith("A1.0")

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "verify", "--instance", tmp_path / "nope.json", "--solution", "scan")
        assert code == EXIT_USAGE
        assert error_payload(err)["error"] == "InstanceFormatError"


class TestUsage:
    """Test argument errors."""

    def test_missing_argument(self, capsys):
        code, _, err = run_cli(capsys, "gen", "--group", "cyclic:7")
        assert code == EXIT_USAGE
        assert error_payload(err)["error"] == "UsageError"

    def test_unknown_solution(self, capsys, instance_file):
        code, _, _ = run_cli(capsys, "verify", "--instance", instance_file, "--solution", "magic")
        assert code == EXIT_USAGE

    def test_bad_log_level(self, capsys):
        code, _, err = run_cli(capsys, "--log-level", "LOUD", "gen", "--group", "cyclic:7", "--n", 1)
        assert code == EXIT_USAGE
        assert "log level" in error_payload(err)["message"]

    def test_group_cap(self, capsys):
        code, _, err = run_cli(capsys, "gen", "--group", "cyclic:100000000000", "--n", 1)
        assert code == EXIT_USAGE
        assert error_payload(err)["error"] == "GroupTooLarge"

    def test_missing_query_set(self, capsys):
        code, _, err = run_cli(capsys, "adversary", "gen", "--group", "cyclic:101", "--n", 2)
        assert code == EXIT_USAGE
        assert error_payload(err)["error"] == "InvalidParameters"


class TestReduce:
    """Test the reduction commands."""

    def test_butterfly_check(self, capsys):
        code, out, _ = run_cli(capsys, "reduce", "butterfly", "--B", 2, "--d", 1, "--edges", "random", "--check")
        assert code == EXIT_OK
        assert json.loads(out)["violations"] == []

    def test_butterfly_artifacts(self, capsys, tmp_path):
        code, out, _ = run_cli(capsys, "reduce", "butterfly", "--B", 2, "--d", 1, "--out-dir", tmp_path)
        assert code == EXIT_OK
        assert {"graph.json", "instance.json", "queries.json"} <= {p.name for p in tmp_path.iterdir()}
        queries = json.loads((tmp_path / "queries.json").read_text())
        assert len(queries["queries"]) == 4
        assert TsumInstance.model_validate_json(out).n == 4

    def test_lsd(self, capsys, tmp_path):
        code, out, _ = run_cli(
            capsys, "reduce", "lsd", "--N", 4, "--B", 2, "--ell", 2, "--pairs", 3, "--out-dir", tmp_path
        )
        assert code == EXIT_OK
        decision = json.loads(out)
        assert decision["disjoint"] == decision["direct_disjoint"]
        header = (tmp_path / "comm.csv").read_text().splitlines()[0]
        assert header.startswith("solution,N,B,ell")

    def test_lsd_from_files(self, capsys, tmp_path):
        x_file = tmp_path / "x.json"
        y_file = tmp_path / "y.json"
        x_file.write_text("[[0, 1]]")
        y_file.write_text("[1]")
        code, out, _ = run_cli(capsys, "reduce", "lsd", "--N", 1, "--B", 2, "--x-file", x_file, "--y-file", y_file)
        assert code == EXIT_OK
        assert json.loads(out)["disjoint"] is False


class TestAdversary:
    def test_generate_and_audit(self, capsys, tmp_path):
        code, _, _ = run_cli(
            capsys, "adversary", "gen", "--group", "cyclic:101", "--n", 2, "--q", "5,17", "--all", "--out-dir", tmp_path
        )
        assert code == EXIT_OK
        assert len(list(tmp_path.glob("realization_*.json"))) == 4
        code, out, _ = run_cli(capsys, "adversary", "audit", "--dir", tmp_path)
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["entropy"]["full_entropy"]
        assert report["independence"]["independent"]


class TestBitprobe:
    def test_trivial_scheme_audit(self, capsys, tmp_path):
        scheme = tmp_path / "scheme.json"
        code, _, _ = run_cli(capsys, "--out", scheme, "bitprobe", "trivial", "--group", "cyclic:7")
        assert code == EXIT_OK
        code, out, _ = run_cli(capsys, "bitprobe", "audit", "--scheme-file", scheme, "--refute")
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["verdict"]["kind"] == "NotRefuted"
        assert report["outcome"] is None

    def test_copy_hub_refuted(self, capsys, tmp_path):
        queries = [{"u": 0, "v": 1, "table": 12}, {"u": 0, "v": 2, "table": 12}]
        queries += [{"u": q, "v": q, "table": 12} for q in range(2, 13)]
        scheme = tmp_path / "hub.json"
        scheme.write_text(json.dumps({"group": {"kind": "cyclic", "modulus": "13"}, "cells": 13, "queries": queries}))
        code, out, _ = run_cli(capsys, "bitprobe", "audit", "--scheme-file", scheme, "--refute")
        assert code == EXIT_OK
        report = json.loads(out)
        assert report["verdict"]["kind"] == "CopyHub"
        assert report["outcome"]["status"] == "refuted"


class TestOwf:
    def test_csv_report(self, capsys):
        code, out, _ = run_cli(
            capsys, "--seed", 2, "owf", "attack", "--N", 8, "--group", "cyclic:101", "--adversary", "table", "--trials", 20
        )
        assert code == EXIT_OK
        header, row = out.strip().splitlines()
        assert header == ",".join(OwfExperimentReport.csv_columns)
        assert row.startswith("table,8,")

    def test_json_report(self, capsys):
        code, out, _ = run_cli(
            capsys, "owf", "attack", "--N", 8, "--group", "cyclic:101", "--adversary", "null",
            "--trials", 10, "--format", "json",
        )
        assert code == EXIT_OK
        assert json.loads(out)["false_inversions"] == 0


class TestBench:
    def test_rows(self, capsys):
        code, out, _ = run_cli(capsys, "bench", "--group", "cyclic:31", "--n", 3, "--solutions", "sumset,scan")
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert lines[0] == ",".join(BenchRow.csv_columns)
        assert [line.split(",")[0] for line in lines[1:]] == ["sumset", "scan"]

    def test_empty_table_has_header(self, capsys):
        code, out, _ = run_cli(capsys, "bench", "--group", "cyclic:31", "--n", 3, "--instances", 0)
        assert code == EXIT_OK
        assert out == ",".join(BenchRow.csv_columns) + "\n"

    def test_metrics_file(self, capsys, tmp_path):
        metrics = tmp_path / "metrics.prom"
        code, _, _ = run_cli(
            capsys, "--metrics-out", metrics, "bench", "--group", "cyclic:31", "--n", 2, "--solutions", "scan"
        )
        assert code == EXIT_OK
        assert metrics.read_text().strip()


def test_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_FAILED_CHECK, EXIT_USAGE}) == 3


class TestRoundTrip:
    """Files written by one command are read back by another."""

    def test_butterfly_artifacts_verify(self, capsys, tmp_path):
        code, _, _ = run_cli(capsys, "reduce", "butterfly", "--B", 2, "--d", 1, "--edges", "random", "--out-dir", tmp_path)
        assert code == EXIT_OK
        code, out, _ = run_cli(
            capsys, "verify", "--instance", tmp_path / "instance.json", "--solution", "sumset",
            "--queries-file", tmp_path / "queries.json",
        )
        assert code == EXIT_OK
        assert json.loads(out)["queries_checked"] == 4

    def test_graph_file(self, capsys, tmp_path):
        code, first, _ = run_cli(
            capsys, "reduce", "butterfly", "--B", 2, "--d", 1, "--edges", "random", "--out-dir", tmp_path
        )
        assert code == EXIT_OK
        code, second, _ = run_cli(capsys, "reduce", "butterfly", "--B", 2, "--d", 1, "--edges-file", tmp_path / "graph.json")
        assert code == EXIT_OK
        assert second == first
        code, out, _ = run_cli(
            capsys, "reduce", "butterfly", "--B", 2, "--d", 1, "--edges-file", tmp_path / "graph.json", "--check"
        )
        assert code == EXIT_OK
        assert json.loads(out)["violations"] == []

    def test_graph_file_shape_mismatch(self, capsys, tmp_path):
        run_cli(capsys, "reduce", "butterfly", "--B", 2, "--d", 1, "--out-dir", tmp_path)
        code, _, err = run_cli(capsys, "reduce", "butterfly", "--B", 3, "--d", 1, "--edges-file", tmp_path / "graph.json")
        assert code == EXIT_USAGE
        assert error_payload(err)["error"] == "InvalidParameters"

    def test_raw_edge_string_file(self, capsys, tmp_path):
        edges = tmp_path / "edges.txt"
        edges.write_text("1111\n")
        code, out, _ = run_cli(capsys, "reduce", "butterfly", "--B", 2, "--d", 1, "--edges-file", edges, "--check")
        assert code == EXIT_OK
        assert json.loads(out)["violations"] == []

    def test_lsd_file(self, capsys, tmp_path):
        code, first, _ = run_cli(
            capsys, "reduce", "lsd", "--N", 4, "--B", 2, "--ell", 2, "--pairs", 3, "--out-dir", tmp_path
        )
        assert code == EXIT_OK
        code, second, _ = run_cli(capsys, "reduce", "lsd", "--ell", 2, "--lsd-file", tmp_path / "lsd.json")
        assert code == EXIT_OK
        assert second == first
        code, out, _ = run_cli(
            capsys, "verify", "--instance", tmp_path / "instance.json", "--solution", "scan",
            "--queries-file", tmp_path / "queries.json",
        )
        assert code == EXIT_OK
        assert json.loads(out)["violations"] == []

    def test_lsd_needs_shape(self, capsys):
        code, _, err = run_cli(capsys, "reduce", "lsd", "--ell", 1)
        assert code == EXIT_USAGE
        assert error_payload(err)["error"] == "InvalidParameters"


class TestSettingsIsolation:
    """Global flags apply to one run only."""

    def test_unsafe_does_not_leak(self, capsys):
        code, _, _ = run_cli(capsys, "--unsafe", "gen", "--group", "cyclic:100000000000", "--n", 1)
        assert code == EXIT_OK
        assert get_settings().max_group_order == load_settings().max_group_order == 2**24
        code, _, err = run_cli(capsys, "gen", "--group", "cyclic:100000000000", "--n", 1)
        assert code == EXIT_USAGE
        assert error_payload(err)["error"] == "GroupTooLarge"

    def test_log_level_does_not_leak(self, capsys):
        before = get_settings().log_level
        code, _, _ = run_cli(capsys, "--log-level", "debug", "gen", "--group", "cyclic:7", "--n", 1)
        assert code == EXIT_OK
        assert get_settings().log_level == before


class TestDeterminism:
    """The same seed reproduces every report byte for byte."""

    @pytest.mark.parametrize(
        "argv",
        [
            ["gen", "--group", "product(cyclic:4,xor:3)", "--n", 5],
            ["bench", "--group", "cyclic:61", "--n", 4, "--instances", 2, "--solutions", "sumset,scan,hellman"],
            ["reduce", "butterfly", "--B", 2, "--d", 2, "--edges", "random", "--check"],
            ["reduce", "butterfly", "--B", 2, "--d", 2, "--edges", "random", "--mode", "xor"],
            ["reduce", "lsd", "--N", 6, "--B", 3, "--ell", 2, "--pairs", 4],
            ["adversary", "gen", "--group", "cyclic:101", "--n", 3, "--q", "5,17,40"],
            ["bitprobe", "trivial", "--group", "xor:3"],
            ["owf", "attack", "--N", 16, "--group", "cyclic:257", "--adversary", "hellman", "--m", 8, "--t", 4,
             "--trials", 50, "--format", "json"],
            ["owf", "attack", "--N", 16, "--group", "cyclic:257", "--adversary", "tsum", "--trials", 30],
        ],
    )
    def test_stdout(self, capsys, argv):
        first = run_cli(capsys, "--seed", 21, *argv)
        second = run_cli(capsys, "--seed", 21, *argv)
        assert first[0] == second[0] == EXIT_OK
        assert first[1] == second[1]
        assert first[1]

    def test_verify(self, capsys, instance_file):
        runs = [run_cli(capsys, "--seed", 4, "verify", "--instance", instance_file, "--solution", "hellman") for _ in range(2)]
        assert runs[0][0] == EXIT_OK
        assert runs[0][1] == runs[1][1]

    def test_bitprobe_audit(self, capsys, tmp_path):
        queries = [{"u": 0, "v": 1, "table": 12}, {"u": 0, "v": 2, "table": 12}]
        queries += [{"u": q, "v": q, "table": 12} for q in range(2, 13)]
        scheme = tmp_path / "hub.json"
        scheme.write_text(json.dumps({"group": {"kind": "cyclic", "modulus": "13"}, "cells": 13, "queries": queries}))
        runs = [run_cli(capsys, "--seed", 4, "bitprobe", "audit", "--scheme-file", scheme, "--refute") for _ in range(2)]
        assert runs[0][1] == runs[1][1]

    @pytest.mark.parametrize(
        "argv",
        [
            ["reduce", "butterfly", "--B", 2, "--d", 1, "--edges", "random"],
            ["reduce", "lsd", "--N", 4, "--B", 2, "--ell", 2, "--pairs", 3],
            ["adversary", "gen", "--group", "cyclic:101", "--n", 2, "--q", "5,17", "--all"],
        ],
    )
    def test_artifact_files(self, capsys, tmp_path, argv):
        outputs = []
        for run in ("first", "second"):
            directory = tmp_path / run
            code, _, _ = run_cli(capsys, "--seed", 8, *argv, "--out-dir", directory)
            assert code == EXIT_OK
            outputs.append({path.name: path.read_bytes() for path in sorted(directory.iterdir())})
        assert outputs[0] == outputs[1]
        assert outputs[0]
