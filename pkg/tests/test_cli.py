"""Exit codes, output formats, and determinism of the command line."""

import json

import pytest

from dmncheck import main

from conftest import loan_doc


@pytest.fixture
def table1_path(tmp_path):
    path = tmp_path / "table1.json"
    path.write_text(json.dumps(loan_doc()), encoding="utf-8")
    return str(path)


@pytest.fixture
def tiny_path(tmp_path):
    doc = {
        "name": "tiny", "hitPolicy": "U", "completeness": "C",
        "inputs": [{"name": "x", "type": "integer", "facet": "[0..5]"}],
        "outputs": [{"name": "y", "type": "boolean"}],
        "rules": [{"id": "only", "in": ["-"], "out": ["true"]}],
    }
    path = tmp_path / "tiny.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return str(path)


class TestCheck:
    def test_incorrect_table_exits_one(self, table1_path, capsys):
        assert main(["check", table1_path]) == 1
        out = capsys.readouterr().out
        assert "OVERLAP" in out and "MISSING_RULE" in out
        assert "not correct" in out

    def test_finding_contains_probe_region(self, table1_path, capsys):
        main(["check", table1_path])
        out = capsys.readouterr().out
        assert "Annual Income: [0..250), Loan Size: >1000" in out

    def test_correct_table_exits_zero(self, tiny_path, capsys):
        assert main(["check", tiny_path]) == 0
        assert "'tiny': correct" in capsys.readouterr().out

    def test_structured_deterministic(self, table1_path, capsys):
        main(["check", table1_path, "--format", "structured"])
        first = capsys.readouterr().out
        main(["check", table1_path, "--format", "structured"])
        assert capsys.readouterr().out == first
        doc = json.loads(first)
        assert doc["correct"] is False
        assert doc["completeness"] == {"declared": "c", "actual": False}
        assert [o["rules"] for o in doc["overlaps"]] == [["A", "C"]]
        codes = [d["code"] for d in doc["diagnostics"]]
        assert codes == sorted(codes)

    def test_only_overlap(self, table1_path, capsys):
        main(["check", table1_path, "--only", "overlap",
              "--format", "structured"])
        doc = json.loads(capsys.readouterr().out)
        assert "missing" not in doc
        assert [o["rules"] for o in doc["overlaps"]] == [["A", "C"]]
        assert doc["overlaps"][0]["witness"] \
            == ["[500..1000]", "[500..1000]"]

    def test_only_missing(self, table1_path, capsys):
        main(["check", table1_path, "--only", "missing",
              "--format", "structured"])
        doc = json.loads(capsys.readouterr().out)
        assert "overlaps" not in doc
        assert len(doc["missing"]) == 9

    def test_multiple_files_in_order(self, table1_path, tiny_path,
                                     capsys):
        assert main(["check", tiny_path, table1_path]) == 1
        out = capsys.readouterr().out
        assert out.index("'tiny'") < out.index("'loan-grading'")
        assert main(["check", tiny_path, tiny_path]) == 0

    def test_malformed_document_exits_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json", encoding="utf-8")
        assert main(["check", str(bad)]) == 2
        assert "error:" in capsys.readouterr().err

    def test_missing_file_exits_two(self, capsys):
        assert main(["check", "/nonexistent/nowhere.json"]) == 2


class TestEval:
    def test_match_text(self, table1_path, capsys):
        code = main(["eval", table1_path, "--input",
                     "Annual Income=500,Loan Size=4230"])
        assert code == 0
        assert capsys.readouterr().out == "Matched rule B: Grade=G\n"

    def test_no_match(self, table1_path, capsys):
        code = main(["eval", table1_path, "--input",
                     "Annual Income=200,Loan Size=2000"])
        assert code == 0
        assert capsys.readouterr().out == "No rule matches\n"

    def test_violation_exits_one(self, table1_path, capsys):
        code = main(["eval", table1_path, "--input",
                     "Annual Income=600,Loan Size=600"])
        assert code == 1
        assert "violation" in capsys.readouterr().out.lower()

    def test_json_object_input(self, table1_path, capsys):
        code = main(["eval", table1_path, "--input",
                     '{"Annual Income": 500, "Loan Size": 4230}'])
        assert code == 0
        assert "Matched rule B" in capsys.readouterr().out

    def test_set_pairs(self, table1_path, capsys):
        code = main(["eval", table1_path, "--set", "Annual Income=500",
                     "--set", "Loan Size=4230"])
        assert code == 0

    def test_structured(self, table1_path, capsys):
        main(["eval", table1_path, "--format", "structured", "--input",
              "Annual Income=500,Loan Size=4230"])
        doc = json.loads(capsys.readouterr().out)
        assert doc == {"detail": "", "outcome": "matched",
                       "outputs": {"Grade": "G"}, "rule": "B",
                       "triggered": ["B"]}

    def test_incomplete_input_exits_two(self, table1_path, capsys):
        assert main(["eval", table1_path, "--input",
                     "Annual Income=500"]) == 2

    def test_no_input_exits_two(self, table1_path, capsys):
        assert main(["eval", table1_path]) == 2

    def test_bad_pair_exits_two(self, table1_path, capsys):
        assert main(["eval", table1_path, "--input", "no equals"]) == 2


class TestGenerate:
    def test_clean_table_checks_correct(self, tmp_path, capsys):
        out_path = str(tmp_path / "gen.json")
        assert main(["generate", "--columns", "3", "--rules", "40",
                     "--seed", "6", "-o", out_path]) == 0
        assert main(["check", out_path]) == 0

    def test_injected_overlap_fails_check(self, tmp_path, capsys):
        out_path = str(tmp_path / "noisy.json")
        assert main(["generate", "--columns", "3", "--rules", "40",
                     "--seed", "6", "--inject", "overlap",
                     "--fraction", "0.1", "-o", out_path]) == 0
        assert main(["check", out_path]) == 1
        assert "OVERLAP" in capsys.readouterr().out

    def test_injected_missing_fails_check(self, tmp_path, capsys):
        out_path = str(tmp_path / "gappy.json")
        assert main(["generate", "--columns", "3", "--rules", "40",
                     "--seed", "6", "--inject", "missing", "-o",
                     out_path]) == 0
        assert main(["check", out_path]) == 1
        assert "MISSING_RULE" in capsys.readouterr().out

    def test_inject_both(self, tmp_path, capsys):
        out_path = str(tmp_path / "both.json")
        assert main(["generate", "--columns", "3", "--rules", "40",
                     "--seed", "6", "--inject", "both", "-o",
                     out_path]) == 0
        assert main(["check", out_path]) == 1
        out = capsys.readouterr().out
        assert "OVERLAP" in out and "MISSING_RULE" in out

    def test_stdout_deterministic(self, capsys):
        args = ["generate", "--columns", "3", "--rules", "25", "--seed",
                "9"]
        main(args)
        first = capsys.readouterr().out
        main(args)
        assert capsys.readouterr().out == first
        doc = json.loads(first)
        assert len(doc["rules"]) == 25


class TestBench:
    def test_flags(self, capsys):
        code = main(["bench", "--columns", "2", "--rules", "15",
                     "--runs", "1", "--seed", "4"])
        assert code == 0
        out = capsys.readouterr().out
        assert "overlap ms" in out and " 15 " in out

    def test_suite_file(self, tmp_path, capsys):
        suite = tmp_path / "suite.json"
        suite.write_text(json.dumps({
            "columnCounts": [2], "ruleCounts": [12], "runs": 1,
            "noiseFraction": 0.2, "seed": 3,
        }), encoding="utf-8")
        report_path = tmp_path / "report.json"
        code = main(["bench", "--suite", str(suite), "--format",
                     "structured", "-o", str(report_path)])
        assert code == 0
        doc = json.loads(report_path.read_text(encoding="utf-8"))
        assert doc["runs"] == 1 and doc["noiseFraction"] == 0.2
        assert len(doc["cells"]) == 1
        assert doc["cells"][0]["columns"] == 2
        assert doc["cells"][0]["rules"] == 12

    def test_flag_overrides_suite(self, tmp_path, capsys):
        suite = tmp_path / "suite.json"
        suite.write_text(json.dumps({
            "columnCounts": [2], "ruleCounts": [12], "runs": 3,
        }), encoding="utf-8")
        main(["bench", "--suite", str(suite), "--runs", "1",
              "--format", "structured"])
        doc = json.loads(capsys.readouterr().out)
        assert doc["runs"] == 1

    def test_unknown_suite_key_exits_two(self, tmp_path, capsys):
        suite = tmp_path / "suite.json"
        suite.write_text(json.dumps({"rows": [3]}), encoding="utf-8")
        assert main(["bench", "--suite", str(suite)]) == 2
