import os
from pathlib import Path

import pytest

import mcsim

FIXTURES = Path(os.environ.get("MCSIM_FIXTURE_DIR", Path(__file__).resolve().parents[2] / "fixtures"))


@pytest.fixture
def table1():
    return mcsim.load_taskset(FIXTURES / "table1.taskset")


def test_load_taskset(table1):
    assert len(table1) == 4
    assert table1.hyperperiod() == 20
    assert [t.id for t in table1.tasks] == ["pi1", "pi2", "pi3", "pi4"]
    assert table1.tasks[0].hc and not table1.tasks[2].hc
    assert mcsim.parse_taskset(table1.serialize()).hyperperiod() == 20


def test_fig4_algorithms(table1):
    script = (FIXTURES / "fig4.script").read_text()
    fp = mcsim.simulate(table1, algorithm="fp", script=script, horizon=60)
    misses = [e for e in fp["trace"] if e.kind == "DeadlineMiss"]
    assert [(e.t, e.task, e.value) for e in misses] == [(40, "pi2", 1)]
    mm = mcsim.simulate(table1, algorithm="multimode", script=script, horizon=60, check_invariants=True)
    assert mm["metrics"]["global"]["hc_misses"] == 0
    assert mm["metrics"]["algorithm"] == "Multimode"


def test_export_and_analyze(table1):
    r = mcsim.simulate(table1, scenario="all-lo", horizon=20)
    csv = mcsim.export_trace(r["trace"], "csv")
    assert csv.startswith("t,kind,task,job,value,info\n")
    a = mcsim.analyze(table1, "T1")
    assert a["schedulable"] and a["pivot"] == "pi2"
    assert a["curve"] == [(20, 19)]


def test_stochastic_is_deterministic(table1):
    a = mcsim.simulate(table1, scenario="stochastic", seed=4, p=0.5, horizon=400)
    b = mcsim.simulate(table1, scenario="stochastic", seed=4, p=0.5, horizon=400)
    assert [(e.t, e.kind, e.task) for e in a["trace"]] == [(e.t, e.kind, e.task) for e in b["trace"]]


def test_case_study(table1):
    r = mcsim.case_study(table1, [0.2], [1, 2], horizon=200, algorithms=["sld", "multimode"])
    assert r["csv"].count("\n") == 5
    assert "Dominance" in r["markdown"]


def test_errors(table1):
    with pytest.raises(ValueError):
        mcsim.parse_taskset("task x period=0 wcet_lo=1 crit=LC priority=1\n")
    with pytest.raises(ValueError):
        mcsim.simulate(table1, algorithm="edf")
    with pytest.raises(mcsim.ScenarioError):
        mcsim.simulate(table1, script="default = none\n", horizon=40)
    with pytest.raises(mcsim.AnalysisError):
        mcsim.analyze(table1, "T2")
