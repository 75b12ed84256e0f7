import csv
import io
import json
import subprocess
import sys

import pytest

from qres.angular import HALF, SpinJ
from qres.cli import CSV_HEADER, ConfigError, RunConfig, main, parse_args, run


def invoke(argv):
    config = parse_args(argv)
    out, err = io.StringIO(), io.StringIO()
    code = run(config, out, err)
    return code, out.getvalue(), err.getvalue()


def test_task2_json_example():
    code, out, _ = invoke(["task2", "--resource", "sss", "--j", "1/2", "--format", "json"])
    assert code == 0
    records = json.loads(out)
    info = records[0]
    assert list(info)[:5] == ["task", "resource", "parameter", "metric", "value"]
    assert info["metric"] == "avg_info_bits" and info["parameter"] == 0.5
    assert abs(info["value"] - 0.0981) < 5e-4
    assert info["outcome_table"]["0,0"] == {"parallel": 0.0, "anti-parallel": 0.125}
    concl = records[1]
    assert concl["metric"] == "conclusive_prob" and concl["value"] == pytest.approx(1 / 16)
    assert concl["extras"]["conclusive_given_anti-parallel"] == pytest.approx(1 / 8)


def test_task3_refbit_text():
    code, out, _ = invoke(["task3", "--resource", "refbit"])
    assert code == 0
    assert "conclusive_prob = 0.0416666666667" in out
    header = out.splitlines()[1].split()
    assert header == ["outcome", "psi-", "m,m"]


def test_sweep_csv_example():
    code, out, _ = invoke(["sweep", "--j-max", "5", "--j-step", "1/2", "--format", "csv"])
    assert code == 0
    assert "\r" not in out
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == CSV_HEADER
    body = rows[1:]
    assert len(body) == 10
    values = [float(r[4]) for r in body]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert [r[2] for r in body[:3]] == ["0.5", "1", "1.5"]


def test_csv_twelve_significant_digits():
    _, out, _ = invoke(["task2", "--resource", "srf", "--format", "csv"])
    assert out.splitlines()[1] == "II,srf,,avg_info_bits,0.0817041659455"


def test_json_null_parameter():
    _, out, _ = invoke(["task1", "--resource", "srf", "--format", "json"])
    assert json.loads(out)[0]["parameter"] is None


def test_optimize_refbit():
    code, out, _ = invoke(["optimize-refbit", "--grid-n", "11", "--format", "json"])
    rec = json.loads(out)[0]
    assert code == 0 and rec["value"] == pytest.approx(1 / 24, abs=1e-6)
    assert rec["extras"]["beta"] in (0.0, 1.0)


@pytest.mark.parametrize(
    "argv",
    [
        ["task1", "--resource", "refbit"],
        ["task2", "--resource", "refbit"],
        ["task1", "--resource", "sss", "--j", "1"],
        ["task3", "--resource", "sss", "--j", "3/2"],
        ["task2", "--resource", "srf", "--j", "1"],
    ],
)
def test_invalid_config_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "valid" in capsys.readouterr().err


def test_small_grid_exit_2(capsys):
    assert main(["optimize-refbit", "--grid-n", "5"]) == 2
    assert "grid_n" in capsys.readouterr().err


def test_invalid_spin_label_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        parse_args(["task2", "--resource", "sss", "--j", "1/3"])
    assert exc.value.code == 2


def test_error_message_names_combinations(capsys):
    main(["task1", "--resource", "refbit"])
    assert "srf, sss (j=1/2)" in capsys.readouterr().err


def test_numerical_error_exit_1():
    out, err = io.StringIO(), io.StringIO()
    code = run(RunConfig("task1", resource="srf", quad_nodes=4), out, err)
    assert code == 1 and "numerical error" in err.getvalue()


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig("task2", resource="sss", j=SpinJ(0)).validate()
    with pytest.raises(ConfigError):
        RunConfig("task9").validate()
    with pytest.raises(ConfigError):
        RunConfig("sweep", j_step=SpinJ(0)).validate()
    RunConfig("task2", resource="sss", j=HALF).validate()


def test_sweep_range_checked():
    code, _, err = invoke(["sweep", "--j-min", "3", "--j-max", "1"])
    assert code == 2 and "j_max" in err


def test_quad_nodes_precedence(monkeypatch):
    monkeypatch.setenv("QRES_QUAD_NODES", "64")
    assert parse_args(["task1", "--resource", "srf"]).quad_nodes == 64
    assert parse_args(["task1", "--resource", "srf", "--quad-nodes", "32"]).quad_nodes == 32
    monkeypatch.delenv("QRES_QUAD_NODES")
    assert parse_args(["task1", "--resource", "srf"]).quad_nodes == 512


def test_bad_env_is_config_error(monkeypatch, capsys):
    monkeypatch.setenv("QRES_QUAD_NODES", "many")
    assert main(["task1", "--resource", "srf"]) == 2


def test_out_file(tmp_path):
    target = tmp_path / "r.csv"
    code, out, _ = invoke(["task3", "--resource", "sss", "--format", "csv", "--out", str(target)])
    assert code == 0 and out == ""
    assert target.read_bytes().startswith(b"task,resource,parameter,metric,value\n")


@pytest.mark.parametrize("fmt", ["json", "csv", "text"])
def test_output_deterministic(fmt):
    argv = ["task2", "--resource", "srf", "--format", fmt, "--seed", "3"]
    assert invoke(argv)[1] == invoke(argv)[1]


def test_reproduce_all_report():
    first = invoke(["reproduce-all"])
    second = invoke(["reproduce-all"])
    assert first[1] == second[1]
    lines = first[1].splitlines()
    anchors = lines[:-1]
    assert all(line.startswith(("PASS", "FAIL")) for line in anchors)
    assert all("expected" in line for line in anchors)
    failed = [line.split()[1] for line in anchors if line.startswith("FAIL")]
    # exit status is 0 exactly when every anchor passes
    assert first[0] == (1 if failed else 0)


def test_reproduce_all_detects_under_resolved_quadrature():
    code, out, _ = invoke(["reproduce-all", "--quad-nodes", "8", "--format", "json"])
    report = {a["name"]: a for a in json.loads(out)}
    assert code == 1
    assert not report["task2.info.srf.analytic"]["passed"]
    assert not report["task3.conclusive.srf"]["passed"]
    assert not report["task3.conclusive.refbit"]["passed"]


def test_reproduce_all_failures_are_report_lines():
    code, out, _ = invoke(["reproduce-all", "--quad-nodes", "4"])
    assert code == 1
    assert "FAIL  task1.info.srf" in out and "value=nan" in out


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qres.cli", "task3", "--resource", "sss", "--format", "csv"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1] == "III,sss,0.5,conclusive_prob,0.375"
