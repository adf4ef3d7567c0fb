from typing import Any

OPTIONS: dict[str, Any] = {
    "pell_build_limit": 16,
    "cube_build_limit": 12,
    "sampling_attempts": 1000,
    "table_formula_limit": 60,
}


def _positive_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value > 0


_VALIDATORS = {
    "pell_build_limit": _positive_int,
    "cube_build_limit": _positive_int,
    "sampling_attempts": _positive_int,
    "table_formula_limit": _positive_int,
}


class set_options:
    """Set pellgraphs options globally or within a context.

    Parameters
    ----------
    pell_build_limit : int
        Largest ``n`` accepted by :func:`~pellgraphs.graphs.build_pell_graph`
        (default: 16).
    cube_build_limit : int
        Largest ``n`` accepted by the hypercube and Fibonacci cube builders
        (default: 12).
    sampling_attempts : int
        Rejection sampling budget for one random expansion step (default: 1000).
    table_formula_limit : int
        Largest ``n`` for formula-only tables (default: 60).

    Examples
    --------
    >>> with set_options(pell_build_limit=10):
    ...     build_pell_graph(12)
    Traceback (most recent call last):
    ...
    BuildLimitExceeded: ...

    """

    def __init__(self, **kwargs):
        self.old = {}

        for k, v in kwargs.items():
            if k not in OPTIONS:
                raise ValueError(f"argument name {k!r} is not in the set of valid options {set(OPTIONS)}")
            if not _VALIDATORS[k](v):
                raise ValueError(f"option {k!r} must be a positive integer, found {v!r}")
            self.old[k] = OPTIONS[k]

        OPTIONS.update(kwargs)

    def __enter__(self):
        return

    def __exit__(self, type, value, traceback):
        OPTIONS.update(self.old)
