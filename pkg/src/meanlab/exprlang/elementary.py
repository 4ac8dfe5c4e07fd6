"""Elementary functions that accept floats, numpy arrays or Taylor jets.

Generator functions are written once against these and then evaluated on a
scalar, vectorized over a grid, or differentiated by passing a jet.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from ..errors import DomainError
from . import jets
from .jets import TaylorJet


def _first_bad(values: np.ndarray, ok: np.ndarray) -> float:
    return float(np.asarray(values)[~ok].flat[0])


def _elementary(name: str, scalar: Callable, array: Callable, jet: Callable,
                valid: Callable | None = None, domain: str = ""):
    def fn(v):
        if isinstance(v, TaylorJet):
            return jet(v)
        if isinstance(v, np.ndarray):
            if valid is not None:
                ok = valid(v)
                if not np.all(ok):
                    raise DomainError(f"{name} argument outside domain {domain}",
                                      point=_first_bad(v, ok))
            with np.errstate(over="raise", invalid="raise"):
                try:
                    return array(v)
                except FloatingPointError as exc:
                    raise DomainError(f"{name}: {exc}") from None
        x = float(v)
        if valid is not None and not valid(x):
            raise DomainError(f"{name} argument {x!r} outside domain {domain}")
        try:
            return scalar(x)
        except (ValueError, OverflowError) as exc:
            raise DomainError(f"{name}({x!r}): {exc}") from None

    fn.__name__ = name
    fn.__qualname__ = name
    return fn


def _cos_nonzero(v):
    return np.cos(v) != 0.0


sin = _elementary("sin", math.sin, np.sin, jets.sin)
cos = _elementary("cos", math.cos, np.cos, jets.cos)
tan = _elementary("tan", math.tan, np.tan, jets.tan, _cos_nonzero, "cos(x) != 0")
sinh = _elementary("sinh", math.sinh, np.sinh, jets.sinh)
cosh = _elementary("cosh", math.cosh, np.cosh, jets.cosh)
tanh = _elementary("tanh", math.tanh, np.tanh, jets.tanh)
exp = _elementary("exp", math.exp, np.exp, jets.exp)
log = _elementary("log", math.log, np.log, jets.log, lambda v: v > 0, "x > 0")
sqrt = _elementary("sqrt", math.sqrt, np.sqrt, jets.sqrt, lambda v: v >= 0, "x >= 0")
fabs = _elementary("abs", abs, np.abs, jets.fabs)
asin = _elementary("asin", math.asin, np.arcsin, jets.asin,
                   lambda v: np.abs(v) <= 1, "|x| <= 1")
acos = _elementary("acos", math.acos, np.arccos, jets.acos,
                   lambda v: np.abs(v) <= 1, "|x| <= 1")
atan = _elementary("atan", math.atan, np.arctan, jets.atan)

FUNCTIONS: dict[str, Callable] = {
    "sin": sin, "cos": cos, "tan": tan,
    "sinh": sinh, "cosh": cosh, "tanh": tanh,
    "exp": exp, "log": log, "sqrt": sqrt, "abs": fabs,
    "asin": asin, "acos": acos, "atan": atan,
}


def divide(a, b):
    """``a / b`` with a domain error instead of inf/ZeroDivisionError."""
    if isinstance(a, TaylorJet) or isinstance(b, TaylorJet):
        return a / b
    if isinstance(b, np.ndarray) or isinstance(a, np.ndarray):
        bb = np.asarray(b, dtype=float)
        if np.any(bb == 0.0):
            raise DomainError("division by zero")
        return np.asarray(a, dtype=float) / bb
    if b == 0.0:
        raise DomainError("division by zero")
    return a / b


def power(base, exponent):
    """``base ^ exponent``.

    A float exponent is a constant power; an array or jet exponent is
    evaluated as ``exp(exponent * log(base))`` and needs a positive base.
    """
    if isinstance(exponent, (TaylorJet, np.ndarray)):
        return exp(exponent * log(base))
    r = float(exponent)
    if isinstance(base, TaylorJet):
        return jets.power(base, r)
    if isinstance(base, np.ndarray):
        if not r.is_integer() and np.any(base < 0):
            raise DomainError(f"non-integer power {r!r} of negative value",
                              point=_first_bad(base, base >= 0))
        if r < 0 and np.any(base == 0):
            raise DomainError(f"negative power {r!r} of zero")
        with np.errstate(over="raise"):
            try:
                return np.power(base, r)
            except FloatingPointError as exc:
                raise DomainError(f"power: {exc}") from None
    x = float(base)
    if x < 0 and not r.is_integer():
        raise DomainError(f"non-integer power {r!r} of negative value {x!r}")
    if x == 0 and r < 0:
        raise DomainError(f"negative power {r!r} of zero")
    try:
        return x ** r
    except OverflowError as exc:
        raise DomainError(f"power overflow: {exc}") from None
