import csv
import io
from fractions import Fraction as F

import pytest

from glim.density import density_graph
from glim.graphs import complete_graph
from glim.harness import (STABILITY_COLUMNS, example_4_1_separation, rows_to_csv,
                          stability_experiment, stability_sweep, verify_example_4_1)


def test_k0_gives_zero():
    rows = stability_experiment(3, 12, 0, trials=4)
    assert all(r["measured_distance[2/n^2]"] == 0 for r in rows)


def test_distance_within_deletion_bound():
    rows = stability_experiment(2, 60, 30, trials=20, seed=1)
    assert len(rows) == 20
    assert all(r["measured_distance[2/n^2]"] <= 2 * 30 / 3600 + 1e-12 for r in rows)
    assert all(r["mismatches"] <= 30 for r in rows)


def test_sweep_trend():
    rows, summary = stability_sweep(2, 60, [0, 15, 30, 60], trials=20, seed=0)
    assert summary["non_decreasing"]
    assert summary["spearman"] > 0
    assert len(rows) == 80


def test_errors():
    with pytest.raises(ValueError):
        stability_experiment(2, 4, 5)  # T_2(4) has only 4 edges
    with pytest.raises(ValueError):
        stability_experiment(0, 4, 0)
    with pytest.raises(ValueError):
        verify_example_4_1(23)


def test_deterministic_and_thread_independent():
    a = stability_experiment(3, 15, 5, trials=6, seed=4)
    b = stability_experiment(3, 15, 5, trials=6, seed=4, threads=3)
    assert a == b


def test_csv_header_names_units():
    rows = stability_experiment(2, 10, 2, trials=2)
    text = rows_to_csv(rows, STABILITY_COLUMNS)
    header = text.splitlines()[0]
    assert "[2/n^2]" in header
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert len(parsed) == 2 and parsed[0]["deleted_edges"] == "2"


@pytest.mark.parametrize("n", [24, 30])
def test_example_4_1(n):
    rep = verify_example_4_1(n)
    assert rep["identity_mismatches"] == 22
    assert rep["blowup_mismatches"] == 80
    assert F(rep["ratio"]) == F(11, 10)
    assert rep["heuristic_mismatches"] == 22
    assert rep["degree_separation"]["holds"]


def test_separation_numbers():
    sep = example_4_1_separation(24)
    assert sep["min_degree_N"] >= 119 and sep["max_degree_rest"] <= 97
