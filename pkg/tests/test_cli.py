"""
Subcomandos de la CLI: códigos de salida y forma del informe JSON.
"""
import json

import pytest

from controllers.classical_process import bfw_process
from controllers.scenario_core import vertex_to_correlation
from controllers.witnesses import gyni_vertex
from main import dispatch


def run(capsys, *argv):
    code = dispatch(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


class TestCensusCommand:
    def test_bipartite_census(self, capsys):
        code, doc = run(capsys, "census", "--scenario", "2,2,2", "--jobs", "1")
        assert code == 0
        assert doc["command"] == "census"
        assert doc["status"] == "success"
        assert (doc["results"]["total"], doc["results"]["causal"]) == (256, 112)
        assert "run_id" in doc

    def test_bad_scenario(self, capsys):
        code, doc = run(capsys, "census", "--scenario", "2,x", "--no-store")
        assert code == 2
        assert "error" in doc["results"]

    def test_csv_export(self, capsys, tmp_path):
        target = tmp_path / "census.csv"
        code, _ = run(capsys, "census", "--scenario", "2,2,2", "--jobs", "1", "--csv", str(target), "--no-store")
        assert code == 0
        assert target.read_text().startswith("class_key")


class TestCheckCommands:
    def test_afbw_is_process_function(self, capsys):
        code, doc = run(capsys, "check-procfn", "--name", "afbw", "--no-store")
        assert code == 0
        assert doc["results"]["process_function"] is True

    def test_loop_is_not(self, capsys):
        code, doc = run(capsys, "check-procfn", "--name", "loop", "--no-store")
        assert code == 1
        assert doc["status"] == "infeasible"

    def test_consistency(self, capsys):
        assert run(capsys, "check-consistent", "--name", "bfw", "--no-store")[0] == 0
        assert run(capsys, "check-consistent", "--name", "loop", "--no-store")[0] == 1

    def test_solver_failure_is_reported(self, capsys, monkeypatch):
        import commands.checks

        def stalled(_process):
            raise RuntimeError("simplex iteration limit reached")

        monkeypatch.setattr(commands.checks, "is_process_function", stalled)
        code, doc = run(capsys, "check-procfn", "--name", "afbw", "--no-store")
        assert code == 1
        assert doc["results"]["error_type"] == "RuntimeError"
        assert "iteration limit" in doc["results"]["error"]

    def test_dc_verdict_on_gyni_vertex(self, capsys, write_json):
        path = write_json("gyni.json", gyni_vertex().to_json())
        code, doc = run(capsys, "dc-verdict", "--vertex", path, "--no-store")
        assert code == 1
        assert doc["results"]["verdict"] == "ANTINOMIC"
        assert doc["results"]["verified"] is True

    def test_check_causal_vertex(self, capsys, write_json):
        path = write_json("gyni.json", gyni_vertex().to_json())
        code, doc = run(capsys, "check-causal", "--vertex", path, "--no-store")
        assert code == 1
        assert doc["results"]["signalling_class"]["label"] == "two-way"

    def test_no_fast_path_needs_vertex(self, capsys, write_json):
        path = write_json("p.json", vertex_to_correlation(gyni_vertex()).to_json())
        assert run(capsys, "dc-verdict", "--input", path, "--no-fast-path", "--no-store")[0] == 2

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "check-causal", "--input", str(tmp_path / "none.json"), "--no-store")[0] == 2


class TestWitnessCommand:
    def test_gynin_on_bfw(self, capsys, write_json):
        path = write_json("bfw.json", bfw_process().as_correlation().to_json())
        code, doc = run(capsys, "witness", "eval", "--name", "gynin", "--input", path, "--no-store")
        assert code == 0
        assert doc["results"]["value"] == "1"

    def test_gyni_causal_maximum(self, capsys):
        code, doc = run(capsys, "witness", "max", "--name", "gyni", "--pool", "causal", "--jobs", "1", "--no-store")
        assert code == 0
        assert doc["results"]["value"] == "1/2"
        assert doc["results"]["pool_size"] == 112

    def test_file_pool(self, capsys, write_json):
        path = write_json("pool.json", [0, gyni_vertex().code])
        code, doc = run(capsys, "witness", "max", "--name", "gyni", "--pool", f"file:{path}", "--no-store")
        assert code == 0
        assert doc["results"]["code"] == gyni_vertex().code

    def test_violators(self, capsys):
        code, doc = run(capsys, "witness", "violators", "--name", "lgyni", "--no-store")
        assert code == 0
        assert doc["results"]["count"] == 16

    def test_eval_needs_input(self, capsys):
        assert run(capsys, "witness", "eval", "--name", "gyni", "--no-store")[0] == 2

    def test_unknown_witness(self, capsys):
        assert run(capsys, "witness", "eval", "--name", "nope", "--no-store")[0] == 2


class TestQuantumCommand:
    def test_valid_parameter(self, capsys):
        code, doc = run(capsys, "quantum-corr", "--q", "7/10", "--no-store")
        assert code == 0
        assert doc["numeric_mode"] == "double"
        assert doc["results"]["validity"]["valid"] is True

    def test_invalid_parameter(self, capsys):
        assert run(capsys, "quantum-corr", "--q", "0.95", "--no-store")[0] == 1

    def test_out_of_range_parameter(self, capsys):
        assert run(capsys, "quantum-corr", "--q", "2", "--no-store")[0] == 2


class TestOtherCommands:
    def test_reproduce_appendix(self, capsys, tmp_path):
        csv = tmp_path / "summary.csv"
        code, doc = run(capsys, "reproduce-paper", "--section", "A", "--csv", str(csv), "--no-store")
        assert code == 0
        assert doc["results"]["failed"] == 0
        assert csv.exists()

    def test_runs_lists_stored_runs(self, capsys):
        run(capsys, "check-procfn", "--name", "afbw")
        code, doc = run(capsys, "runs")
        assert code == 0
        assert [r["command"] for r in doc["results"]["runs"]] == ["check-procfn"]

    def test_show_unknown_run(self, capsys):
        assert run(capsys, "runs", "--show", "999")[0] == 2

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, doc = run(capsys, "check-procfn", "--name", "afbw", "--out", str(target), "--no-store")
        assert code == 0
        assert json.loads(target.read_text())["inputs_digest"] == doc["inputs_digest"]

    @pytest.mark.parametrize("argv", [["bogus"], ["census", "--scenario", "2,2,2", "--mode", "bogus"], []])
    def test_bad_arguments(self, capsys, argv):
        assert dispatch(argv) == 2
