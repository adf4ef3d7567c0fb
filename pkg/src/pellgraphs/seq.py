"""Exact integer sequences and helpers for evaluating closed forms."""
import threading


class FormulaError(ArithmeticError):
    """Raised when a closed form does not evaluate to the expected exact integer."""


_lock = threading.Lock()

# _PELL[k] holds p_{k-1}, so that p_{-1} = 0 sits at index 0
_PELL: list[int] = [0, 1, 2]
_FIBONACCI: list[int] = [0, 1]


def _extend(cache: list[int], index: int, step) -> int:
    if index >= len(cache):
        with _lock:
            while len(cache) <= index:
                cache.append(step(cache))
    return cache[index]


def pell(n: int) -> int:
    """Return the Pell number p_n.

    p_{-1} = 0, p_0 = 1, p_1 = 2 and p_n = 2 p_{n-1} + p_{n-2}.

    """
    if n < -1:
        raise ValueError(f"Pell numbers are defined for n >= -1, found {n}")

    return _extend(_PELL, n + 1, lambda c: 2 * c[-1] + c[-2])


def fibonacci(n: int) -> int:
    """Return the Fibonacci number F_n (F_0 = 0, F_1 = 1)."""
    if n < 0:
        raise ValueError(f"Fibonacci numbers are defined for n >= 0, found {n}")

    return _extend(_FIBONACCI, n, lambda c: c[-1] + c[-2])


def pell_sequence(n: int) -> list[int]:
    """Return [p_0, ..., p_n]."""
    return [pell(k) for k in range(n + 1)]


def exact_div(numerator: int, denominator: int, what: str = "closed form") -> int:
    """Divide two integers, raising :class:`FormulaError` unless the
    division is exact.

    """
    quotient, remainder = divmod(numerator, denominator)
    if remainder:
        raise FormulaError(f"{what}: {numerator} is not divisible by {denominator}")
    return quotient


def nonnegative(value: int, what: str = "closed form") -> int:
    if value < 0:
        raise FormulaError(f"{what}: evaluates to negative value {value}")
    return value
