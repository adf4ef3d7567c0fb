import json

import numpy as np
import pytest
import xarray as xr

from pellgraphs.graphs import build_pell_graph
from pellgraphs.irregularity import histogram
from pellgraphs.options import set_options
from pellgraphs.seq import pell
from pellgraphs.xr_accessor import histogram_table, stat_table


def test_initializer():
    ds = stat_table("irr", 4)

    assert ds._tables().value_var == "value"
    assert ds._tables.columns == ["n", "value"]


def test_initializer_error():
    ds = stat_table("irr", 4)

    with pytest.raises(ValueError, match=r"variable.*not found in Dataset"):
        ds._tables(value_var="count")

    ds = xr.Dataset({"value": ("n", np.arange(3))})
    with pytest.raises(ValueError, match=r"coordinate.*missing in Dataset"):
        ds._tables()


@pytest.mark.parametrize(
    "stat, expected",
    [
        ("edges", "n,value\n1,1\n2,5\n3,18\n4,58\n"),
        ("irr", "n,value\n1,0\n2,4\n3,18\n4,64\n"),
        ("sigma", "n,value\n2,6\n3,36\n4,134\n"),
    ],
)
def test_stat_table_csv(stat, expected):
    assert stat_table(stat, 4)._tables().to_csv() == expected


def test_e_table():
    ds = stat_table("e", 4)
    rows = list(ds._tables().rows())

    assert ds._tables.columns == ["n", "i", "value"]
    assert rows[:5] == [{"n": 1, "i": i, "value": v} for i, v in enumerate([1, 0, 0, 0, 0])]
    assert {"n": 4, "i": 2, "value": 11} in rows
    assert ds._tables.to_csv().splitlines()[0] == "n,i,value"


def test_exact_values_beyond_64_bits():
    ds = stat_table("edges", 60)
    last = json.loads(ds._tables().to_ndjson().splitlines()[-1])

    assert last == {"n": 60, "value": 60 * pell(60) // 2}
    assert last["value"] > 2**64


def test_stat_table_error():
    with pytest.raises(ValueError, match=r"invalid statistic"):
        stat_table("median", 4)

    with pytest.raises(ValueError, match=r"must be in 1..60"):
        stat_table("irr", 61)

    with set_options(table_formula_limit=10):
        with pytest.raises(ValueError, match=r"must be in 1..10"):
            stat_table("irr", 11)


def test_histogram_table():
    ds = histogram_table(3, histogram(build_pell_graph(3)))

    assert ds._tables(value_var="count").to_csv() == "n,k,count\n3,0,7\n3,1,6\n3,2,3\n3,3,2\n"
