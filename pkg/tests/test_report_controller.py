"""
Almacén de ejecuciones (SQLite temporal por test).
"""
import pytest

from controllers import db
from controllers.causality import classify_scenario
from controllers.report_controller import ReportController, RunReport
from controllers.scenario_core import BIPARTITE_BINARY
from models import RunStatus


def _report(**overrides):
    fields = {"command": "census", "inputs": {"scenario": "2,2,2"}, "results": {"total": 256}}
    fields.update(overrides)
    return RunReport(**fields)


def test_requires_context_manager():
    with pytest.raises(RuntimeError):
        ReportController().list_runs()


def test_save_and_read_back():
    with ReportController() as store:
        run_id = store.save_run(_report(timings={"total": 0.5}))
        record = store.get_run(run_id)
        assert record.command == "census"
        assert record.status is RunStatus.SUCCESS
        assert store.get_run_results(run_id) == {"total": 256}
        assert store.get_run(run_id + 100) is None
        assert store.get_run_results(run_id + 100) is None


def test_census_rows():
    census = classify_scenario(BIPARTITE_BINARY, jobs=1)
    with ReportController() as store:
        run_id = store.save_run(_report(), census.rows(), scenario_key=BIPARTITE_BINARY.key)
        frame = store.census_counts(run_id)
    assert frame["total"].sum() == 256
    assert set(frame["label"]) == {"empty", "one-way", "two-way"}
    assert frame.loc[frame["label"] == "two-way", "noncausal"].item() == 144


def test_list_and_digest():
    first = _report()
    with ReportController() as store:
        store.save_run(first)
        store.save_run(_report(command="witness-max", inputs={"name": "gyni"}, status=RunStatus.INFEASIBLE,
                               exit_code=1))
        store.save_run(_report())
        runs = store.list_runs()
        assert list(runs["command"]) == ["census", "witness-max", "census"]
        assert list(store.list_runs(command="witness-max")["status"]) == ["infeasible"]
        assert len(store.list_runs(limit=1)) == 1
        assert len(store.find_by_digest(first.inputs_digest)) == 2


def test_digest_depends_on_inputs_only():
    assert _report().inputs_digest == _report(results={"total": 1}).inputs_digest
    assert _report().inputs_digest != _report(inputs={"scenario": "3,2,2"}).inputs_digest
    assert _report().to_json()["status"] == "success"


def test_database_info(tmp_path):
    with ReportController() as store:
        store.save_run(_report())
    info = db.get_database_info()
    assert info["is_initialized"] and info["exists"]
    assert info["database_path"] == str(tmp_path / "runs.db")
