"""Evaluable real functions with optional Taylor derivatives."""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..errors import DerivativeUnavailableError
from .jets import ORDER, TaylorJet
from .parser import Expression, parse


class GeneratorFunction:
    """A real function of one variable used to generate a mean.

    ``fn`` must accept a float. When ``vectorized`` it must also accept a
    numpy array, and when ``differentiable`` a :class:`TaylorJet`; functions
    built from :mod:`meanlab.exprlang.elementary` satisfy all three.
    """

    __slots__ = ("_fn", "name", "differentiable", "vectorized")

    def __init__(self, fn: Callable, name: str = "<fn>", *,
                 differentiable: bool = True, vectorized: bool = True):
        self._fn = fn
        self.name = name
        self.differentiable = differentiable
        self.vectorized = vectorized

    @classmethod
    def from_expression(cls, expr: "str | Expression") -> "GeneratorFunction":
        if isinstance(expr, str):
            expr = parse(expr)
        return cls(expr.evaluate, name=str(expr))

    @classmethod
    def constant(cls, c: float) -> "GeneratorFunction":
        c = float(c)
        return cls(lambda v: c, name=repr(c))

    @classmethod
    def identity(cls) -> "GeneratorFunction":
        return cls(lambda v: v, name="x")

    def __repr__(self) -> str:
        return f"GeneratorFunction({self.name!r})"

    def __call__(self, x: float) -> float:
        return float(self._fn(float(x)))

    def values(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if self.vectorized:
            out = np.asarray(self._fn(xs), dtype=float)
            return np.broadcast_to(out, xs.shape).copy()
        return np.array([self(x) for x in xs.ravel()], dtype=float).reshape(xs.shape)

    def jet(self, x, order: int = ORDER) -> TaylorJet:
        """Taylor jet at ``x``; ``x`` may itself be a jet (chain rule)."""
        if not self.differentiable:
            raise DerivativeUnavailableError(f"{self.name} provides values only")
        arg = x if isinstance(x, TaylorJet) else TaylorJet.variable(float(x), order)
        out = self._fn(arg)
        if not isinstance(out, TaylorJet):
            return TaylorJet.constant(float(out), arg.order)
        return out

    def derivative(self, x: float, k: int) -> float:
        if not 0 <= k <= ORDER:
            raise ValueError(f"derivative order must be in 0..{ORDER}, got {k}")
        if k == 0:
            return self(x)
        return self.jet(x, k).derivative(k)

    def derivatives(self, xs, order: int) -> np.ndarray:
        """Array of shape ``(order + 1, len(xs))`` with f, f', ..., f^(order)."""
        xs = np.asarray(xs, dtype=float).ravel()
        out = np.empty((order + 1, xs.size))
        for i, x in enumerate(xs):
            out[:, i] = self.jet(x, order).derivatives()
        return out

    # -- algebra ------------------------------------------------------------

    def _lift(self, other) -> "GeneratorFunction":
        if isinstance(other, GeneratorFunction):
            return other
        return GeneratorFunction.constant(float(other))

    def _combine(self, other, op: Callable, symbol: str, swap: bool = False) -> "GeneratorFunction":
        o = self._lift(other)
        a, b = (o, self) if swap else (self, o)
        fa, fb = a._fn, b._fn
        return GeneratorFunction(
            lambda v: op(fa(v), fb(v)),
            name=f"({a.name}) {symbol} ({b.name})",
            differentiable=a.differentiable and b.differentiable,
            vectorized=a.vectorized and b.vectorized,
        )

    def __add__(self, other):
        return self._combine(other, lambda p, q: p + q, "+")

    def __radd__(self, other):
        return self._combine(other, lambda p, q: p + q, "+", swap=True)

    def __sub__(self, other):
        return self._combine(other, lambda p, q: p - q, "-")

    def __rsub__(self, other):
        return self._combine(other, lambda p, q: p - q, "-", swap=True)

    def __mul__(self, other):
        return self._combine(other, lambda p, q: p * q, "*")

    def __rmul__(self, other):
        return self._combine(other, lambda p, q: p * q, "*", swap=True)

    def __truediv__(self, other):
        from .elementary import divide
        return self._combine(other, divide, "/")

    def __rtruediv__(self, other):
        from .elementary import divide
        return self._combine(other, divide, "/", swap=True)

    def __neg__(self):
        fn = self._fn
        return GeneratorFunction(lambda v: -fn(v), name=f"-({self.name})",
                                 differentiable=self.differentiable,
                                 vectorized=self.vectorized)

    def compose(self, inner: "GeneratorFunction") -> "GeneratorFunction":
        """``self ∘ inner``."""
        outer_fn, inner_fn = self._fn, inner._fn
        return GeneratorFunction(
            lambda v: outer_fn(inner_fn(v)),
            name=f"({self.name}) o ({inner.name})",
            differentiable=self.differentiable and inner.differentiable,
            vectorized=self.vectorized and inner.vectorized,
        )


def as_generator(obj) -> GeneratorFunction:
    """Coerce an expression string, parsed expression or number."""
    if isinstance(obj, GeneratorFunction):
        return obj
    if isinstance(obj, (str, Expression)):
        return GeneratorFunction.from_expression(obj)
    if isinstance(obj, (int, float)):
        return GeneratorFunction.constant(obj)
    raise TypeError(f"cannot build a generator function from {type(obj).__name__}")
