import json
from collections.abc import Iterator
from typing import Any

import numpy as np
import pandas as pd
import xarray as xr

from .irregularity import ImbalanceHistogram
from .options import OPTIONS
from .pellstruct import E_INITIAL, IMBALANCES, e_closed, edge_count_closed, irr_closed, sigma_closed

STATS = ("e", "irr", "sigma", "edges")


@xr.register_dataset_accessor("_tables")
class TablesAccessor:
    """Internal xarray.Dataset extension for emitting tables of exact
    integers (one row per element of the value variable).

    """

    def __init__(self, dataset: xr.Dataset):
        self._dataset = dataset

        self.value_var = "value"
        self._frame = None

    def __call__(self, value_var="value"):
        if value_var not in self._dataset:
            raise ValueError(f"variable '{value_var}' not found in Dataset")

        missing = [dim for dim in self._dataset[value_var].dims if dim not in self._dataset.coords]
        if missing:
            raise ValueError(f"coordinate(s) {missing} missing in Dataset")

        self.value_var = value_var
        self._frame = None

        return self

    @property
    def columns(self) -> list[str]:
        return [*self._dataset[self.value_var].dims, self.value_var]

    @property
    def frame(self) -> pd.DataFrame:
        """Table in long form, rows sorted by the dimension coordinates."""
        if self._frame is None:
            da = self._dataset[self.value_var]
            frame = da.to_dataframe().reset_index()[self.columns]
            self._frame = frame.sort_values(list(da.dims), kind="stable", ignore_index=True)
        return self._frame

    def rows(self) -> Iterator[dict[str, Any]]:
        for record in self.frame.itertuples(index=False):
            yield {col: int(v) for col, v in zip(self.columns, record)}

    def to_csv(self) -> str:
        return self.frame.to_csv(index=False, lineterminator="\n")

    def to_ndjson(self) -> str:
        return "".join(json.dumps(row) + "\n" for row in self.rows())


def _exact_values(values: list[int], shape: tuple[int, ...]) -> np.ndarray:
    arr = np.empty(len(values), dtype=object)
    arr[:] = values
    return arr.reshape(shape)


def stat_table(stat: str, max_n: int) -> xr.Dataset:
    """Closed-form values of a Pell graph statistic for orders up to ``max_n``.

    ``e`` (edges by imbalance, dims ``n`` and ``i``) uses the initial values
    for n <= 3; ``irr`` and ``edges`` start at n = 1 and ``sigma`` at n = 2.

    """
    if stat not in STATS:
        raise ValueError(f"invalid statistic {stat!r}, must be one of {STATS}")
    limit = OPTIONS["table_formula_limit"]
    if not 1 <= max_n <= limit:
        raise ValueError(f"max_n must be in 1..{limit} for formula tables, found {max_n}")

    if stat == "e":
        orders = np.arange(1, max_n + 1)
        values = [
            E_INITIAL[n][i] if n in E_INITIAL else e_closed(n, i)
            for n in orders.tolist()
            for i in IMBALANCES
        ]
        data = _exact_values(values, (orders.size, len(IMBALANCES)))
        return xr.Dataset(
            {"value": (("n", "i"), data)},
            coords={"n": orders, "i": np.array(IMBALANCES)},
        )

    formula = {"irr": irr_closed, "sigma": sigma_closed, "edges": edge_count_closed}[stat]
    orders = np.arange(2 if stat == "sigma" else 1, max_n + 1)
    data = _exact_values([formula(n) for n in orders.tolist()], (orders.size,))
    return xr.Dataset({"value": ("n", data)}, coords={"n": orders})


def histogram_table(n: int, hist: ImbalanceHistogram) -> xr.Dataset:
    """Imbalance histogram of a graph of order ``n`` as a ``count`` table
    with dims ``n`` and ``k``.

    """
    rows = list(hist.rows(n))
    imbalances = np.array([k for _, k, _ in rows], dtype=np.int64)
    counts = np.array([c for _, _, c in rows], dtype=np.int64).reshape(1, -1)
    return xr.Dataset(
        {"count": (("n", "k"), counts)},
        coords={"n": [n], "k": imbalances},
    )
