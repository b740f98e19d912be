import csv
import json

import jsonschema
import pytest

from qamnet.reproduce import TABLE_I, reproduce_fig3, reproduce_table1

from test_config_cli import RECORD_SCHEMA

import oracles


@pytest.fixture(scope="module")
def table1_dimensionless():
    return reproduce_table1(nmr_units=False)


def row(record, inp, w):
    return next(r for r in record.results["rows"] if r["input"] == list(inp) and r["w"] == w)


def test_table1_rows_pass(table1_dimensionless):
    record, passed = table1_dimensionless
    assert passed
    assert len(record.results["rows"]) == len(TABLE_I) == 10
    assert row(record, (1, 0), 1)["dominant"] == [[1, 1]]
    blank = row(record, (0, 0), -1)
    assert sorted(blank["dominant"]) == [[-1, 1], [1, -1]]
    assert blank["expected_probabilities"] == pytest.approx([0.5, 0.5], abs=0.05)
    jsonschema.validate(record.to_dict(), RECORD_SCHEMA)


def test_table1_writes_json_and_csv(tmp_path):
    record, passed = reproduce_table1(nmr_units=True, out=tmp_path)
    assert passed
    assert record.results["operator_normalization"] == "spin_half"
    assert {p.name for p in tmp_path.iterdir()} == {"table1.json", "table1.csv"}
    saved = json.loads((tmp_path / "table1.json").read_text())
    assert saved["config"]["nmr"]["operator_normalization"] == "spin_half"
    with open(tmp_path / "table1.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][:3] == ["input_1", "input_2", "w"]
    assert len(rows) == 11
    assert all(r[-1] == "pass" for r in rows[1:])


def test_table1_parallel_matches_serial(table1_dimensionless):
    record, _ = reproduce_table1(nmr_units=False, jobs=2)
    assert record.results_bytes() == table1_dimensionless[0].results_bytes()


def test_fig3_columns(tmp_path):
    record, passed = reproduce_fig3(out=tmp_path)
    assert passed
    res = record.results
    assert res["exact"] == pytest.approx(oracles.FIG3_EXACT_FROZEN, abs=1e-9)
    assert res["first_order"] == pytest.approx(oracles.FIG3_FIRST_ORDER_FROZEN, abs=1e-12)
    assert res["difference"] == pytest.approx(
        [a - b for a, b in zip(oracles.FIG3_EXACT_FROZEN, oracles.FIG3_FIRST_ORDER_FROZEN)])
    assert res["leakage"] < 0.01
    assert res["state_indices"] == list(oracles.FIG3_INDICES)
    with open(tmp_path / "fig3.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["state_index", "pattern", "probability"]
    assert len(rows) == 33
    assert rows[3][1] == "-1 -1 -1 +1 -1"
    jsonschema.validate(record.to_dict(), RECORD_SCHEMA)


def test_plots_are_opt_in(tmp_path):
    reproduce_fig3(out=tmp_path, plot=True)
    reproduce_table1(nmr_units=False, out=tmp_path, plot=True, steps=50)
    for name in ("fig3.png", "table1.png"):
        assert (tmp_path / name).stat().st_size > 1000
