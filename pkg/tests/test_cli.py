import csv
import io
import json
from fractions import Fraction

import pytest

from seqauction import cli
from seqauction.core import Outcome
from seqauction.oracle import VerificationReport, Witness


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_scenario(tmp_path, **fields):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(fields))
    return str(path)


def test_simulate_vickrey_json(capsys):
    code, out, _ = run(capsys, "simulate", "--types", "3,5,4", "--profile", "vickrey-opt", "--out", "json")
    assert code == 0
    rows = {r["profile"]: r for r in json.loads(out)["rows"]}
    assert rows["vickrey-opt"]["sw"] == "2" and rows["truth"]["sw"] == "1"
    assert rows["vickrey-opt"]["announcements"] == ["3", "5", "0"]


def test_simulate_bc_scenario_file(capsys, tmp_path):
    path = write_scenario(tmp_path, n=3, mechanism="bailey-cavallo", types=["3", "5", "4"], profile="bc-opt",
                          output="json")
    code, out, _ = run(capsys, "simulate", "--scenario", path)
    assert code == 0
    rows = {r["profile"]: r for r in json.loads(out)["rows"]}
    assert rows["bc-opt"]["sw"] == "5" and rows["truth"]["sw"] == "13/3"
    assert rows["truth"]["aggregate_tax"] == "-2/3"


def test_simulate_all_equal_truth(capsys):
    code, out, _ = run(capsys, "simulate", "--mechanism", "bc", "--types", "5,5,5", "--out", "json")
    rows = json.loads(out)["rows"]
    assert code == 0 and len(rows) == 1
    assert rows[0]["sw"] == "5" and rows[0]["aggregate_tax"] == "0"


def test_csv_layout(capsys):
    code, out, _ = run(capsys, "simulate", "--types", "3,5,4", "--profile", "vickrey-opt", "--out", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == cli.CSV_COLUMNS
    assert len(rows) == 1 + 2 * 4
    assert rows[1:5] == [
        ["vickrey-opt", "1", "3", "2", "0", "0", "2"],
        ["vickrey-opt", "2", "5", "2", "-3", "2", "2"],
        ["vickrey-opt", "3", "0", "2", "0", "0", "2"],
        ["vickrey-opt", "total", "", "2", "-3", "2", "2"],
    ]


def test_table_output(capsys):
    code, out, _ = run(capsys, "simulate", "--types", "1/2,3/2")
    assert code == 0 and "truth" in out


@pytest.mark.parametrize("argv", [
    ["simulate", "--types", "3,-1,4"],
    ["simulate", "--types", "3,x,4"],
    ["simulate", "--types", "3,5", "--mechanism", "bc"],
    ["simulate", "--types", "3,5,4", "--profile", "truth,truth"],
    ["simulate", "--types", "3,5,4", "--profile", "lucky"],
    ["simulate", "--types", "3,5,4", "--n", "4"],
    ["simulate"],
    ["simulate", "--scenario", "/nonexistent/file.json"],
    ["verify", "--suite", "sw-maximal-bc", "--n", "2"],
    ["verify", "--jobs", "0"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("seqauction:")


@pytest.mark.parametrize("argv", [["verify", "--suite", "bogus"], ["counterexample", "bogus"],
                                  ["verify", "--grid", "4..1"], ["verify", "--epsilon", "x"]])
def test_argparse_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_bad_scenario_fields(tmp_path, capsys):
    path = write_scenario(tmp_path, n=3, types=["1", "2", "3"], output="xml")
    assert run(capsys, "simulate", "--scenario", path)[0] == 2
    path = write_scenario(tmp_path, n=3)
    assert run(capsys, "simulate", "--scenario", path)[0] == 2


def test_invariant_violation_exit_3(capsys, monkeypatch):
    def broken(mech, bids, theta):
        return Outcome(1, (Fraction(0),) * len(bids), (Fraction(1),) * len(bids), Fraction(0))

    monkeypatch.setattr(cli, "run_mechanism", broken)
    code, _, err = run(capsys, "simulate", "--types", "1,2")
    assert code == 3 and "invariant" in err


def test_verification_failure_exit_1(capsys, monkeypatch):
    monkeypatch.setattr(cli.oracle, "run_suite",
                        lambda *a, **k: [VerificationReport("fake", 1, False)])
    code, out, _ = run(capsys, "verify", "--suite", "lemma1")
    assert code == 1 and json.loads(out)["passed"] is False


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "vickrey-equality", "--n", "2", "--grid", "0..1")
    data = json.loads(out)
    assert code == 0 and data["passed"] and data["grid"] == ["0", "1"]


def test_verify_no_dominant_values(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "no-dominant", "--n", "3", "--grid", "0..3")
    data = json.loads(out)
    assert code == 0
    first = data["reports"][0]["witness"]
    assert first["values"] == {"optimal": "1", "bid-1": "2"}


@pytest.mark.parametrize("name,quantity,values", [
    ("bc-not-dominant", "u_2", {"s": "8/3", "s'": "3"}),
    ("nash-deviation", "u_1", {"vickrey-opt": "0", "deviation": "1"}),
    ("no-dominant", "u_1", {"optimal": "1", "bid-1": "2"}),
])
def test_counterexamples(capsys, name, quantity, values):
    code, out, _ = run(capsys, "counterexample", name, "--out", "json")
    data = json.loads(out)
    assert code == 0
    w = data["witnesses"][0]
    assert w["quantity"] == quantity and w["values"] == values


def test_counterexample_round_trip(capsys, tmp_path):
    for name in sorted(cli.COUNTEREXAMPLES):
        code, out, _ = run(capsys, "counterexample", name, "--out", "json")
        data = json.loads(out)
        for w, scenarios in zip(data["witnesses"], data["scenarios"]):
            for scenario in scenarios:
                path = write_scenario(tmp_path, **scenario)
                code, sim, _ = run(capsys, "simulate", "--scenario", path)
                row = json.loads(sim)["rows"][0]
                assert row["profile"] == scenario["label"]
                got = cli.ComparisonRow(row["profile"], (), row["winner"], Fraction(row["aggregate_tax"]),
                                        Fraction(row["sw"]), tuple(map(Fraction, row["utilities"])),
                                        tuple(map(Fraction, row["taxes"])))
                assert format(got.value(w["quantity"])) == w["values"][scenario["label"]]


def test_replay_witness():
    w = Witness("vickrey", (Fraction(1), Fraction(2)), {"a": (Fraction(3), Fraction(0))}, {"a": Fraction(1)}, "u_1")
    assert cli.replay_witness(w) == {"a": 1}


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "seqauction", "counterexample", "nash-deviation"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "deviation" in proc.stdout
