from importlib.metadata import PackageNotFoundError, version

from .expansion import (
    ExpansionSpec,
    contract,
    expand,
    irr_expansion_host,
    irr_expansion_rhs,
    is_partial_cube,
    recognize_partial_cube,
    theta_sets,
)
from .graphs import Graph, build_fibonacci_cube, build_hypercube, build_pell_graph
from .irregularity import histogram, imbalance, irr, irr_subset, sigma
from .options import set_options
from .seq import fibonacci, pell

try:
    __version__ = version("pellgraphs")
except PackageNotFoundError:  # noqa
    # package is not installed
    pass


__all__ = (
    "ExpansionSpec",
    "Graph",
    "build_fibonacci_cube",
    "build_hypercube",
    "build_pell_graph",
    "contract",
    "expand",
    "fibonacci",
    "histogram",
    "imbalance",
    "irr",
    "irr_expansion_host",
    "irr_expansion_rhs",
    "irr_subset",
    "is_partial_cube",
    "pell",
    "recognize_partial_cube",
    "set_options",
    "sigma",
    "theta_sets",
    "__version__",
)
