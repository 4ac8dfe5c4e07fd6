"""Truncated Taylor arithmetic (forward-mode jets).

A jet of order ``n`` at a point ``x0`` stores the normalized Taylor
coefficients ``c[k] = f^(k)(x0) / k!`` for ``k = 0..n``. Arithmetic and the
elementary functions below are exact truncated series operations, so the
derivatives they produce are exact up to floating point rounding.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from ..errors import DomainError

ORDER = 4


class TaylorJet:
    """Truncated Taylor polynomial with ``order + 1`` coefficients."""

    __slots__ = ("coefficients",)
    # Defer mixed numpy-scalar arithmetic to our reflected operators.
    __array_ufunc__ = None

    def __init__(self, coefficients: Iterable[float]):
        coeffs = tuple(float(c) for c in coefficients)
        if not coeffs:
            raise ValueError("a jet needs at least one coefficient")
        self.coefficients = coeffs

    @classmethod
    def variable(cls, x: float, order: int = ORDER) -> "TaylorJet":
        if order < 1:
            return cls((x,))
        return cls((x, 1.0) + (0.0,) * (order - 1))

    @classmethod
    def constant(cls, value: float, order: int = ORDER) -> "TaylorJet":
        return cls((value,) + (0.0,) * order)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def value(self) -> float:
        return self.coefficients[0]

    def derivative(self, k: int) -> float:
        if not 0 <= k <= self.order:
            raise ValueError(f"derivative order {k} outside 0..{self.order}")
        return self.coefficients[k] * math.factorial(k)

    def derivatives(self) -> list[float]:
        return [c * math.factorial(k) for k, c in enumerate(self.coefficients)]

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, k: int) -> float:
        return self.coefficients[k]

    def __repr__(self) -> str:
        inner = ", ".join(f"{c:.17g}" for c in self.coefficients)
        return f"TaylorJet(({inner}))"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TaylorJet):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self) -> int:
        return hash(self.coefficients)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "TaylorJet | None":
        if isinstance(other, TaylorJet):
            return other
        if isinstance(other, (int, float)) or hasattr(other, "__float__"):
            return TaylorJet.constant(float(other), self.order)
        return None

    def __neg__(self) -> "TaylorJet":
        return TaylorJet(-c for c in self.coefficients)

    def __pos__(self) -> "TaylorJet":
        return self

    def __add__(self, other) -> "TaylorJet":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return TaylorJet(a + b for a, b in zip(self.coefficients, o.coefficients))

    __radd__ = __add__

    def __sub__(self, other) -> "TaylorJet":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return TaylorJet(a - b for a, b in zip(self.coefficients, o.coefficients))

    def __rsub__(self, other) -> "TaylorJet":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other) -> "TaylorJet":
        if isinstance(other, (int, float)):
            s = float(other)
            return TaylorJet(s * c for c in self.coefficients)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return TaylorJet(_convolve(self.coefficients, o.coefficients))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "TaylorJet":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return TaylorJet(_divide(self.coefficients, o.coefficients))

    def __rtruediv__(self, other) -> "TaylorJet":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, exponent) -> "TaylorJet":
        if isinstance(exponent, TaylorJet):
            return exp(exponent * log(self))
        return power(self, float(exponent))

    def __rpow__(self, base) -> "TaylorJet":
        b = float(base)
        if b <= 0.0:
            raise DomainError(f"power with non-constant exponent needs a positive base, got {b!r}")
        return exp(self * math.log(b))

    # -- composition --------------------------------------------------------

    def compose(self, outer: Sequence[float]) -> "TaylorJet":
        """Jet of ``F(self)`` given F's Taylor coefficients at ``self.value``."""
        n = self.order
        shift = TaylorJet((0.0,) + self.coefficients[1:])
        coeffs = list(outer[: n + 1]) + [0.0] * max(0, n + 1 - len(outer))
        acc = TaylorJet.constant(coeffs[n], n)
        for k in range(n - 1, -1, -1):
            acc = acc * shift + coeffs[k]
        return acc


def _convolve(a: Sequence[float], b: Sequence[float]) -> list[float]:
    n = min(len(a), len(b))
    return [sum(a[j] * b[k - j] for j in range(k + 1)) for k in range(n)]


def _divide(a: Sequence[float], b: Sequence[float]) -> list[float]:
    n = min(len(a), len(b))
    if b[0] == 0.0:
        raise DomainError("division by a jet with zero constant term")
    q: list[float] = []
    for k in range(n):
        q.append((a[k] - sum(b[j] * q[k - j] for j in range(1, k + 1))) / b[0])
    return q


def _integrate_product(a: Sequence[float], d: Sequence[float], b0: float) -> TaylorJet:
    """Jet b with b(x0) = b0 and b' = a' * d."""
    n = len(a)
    b = [b0]
    for k in range(1, n):
        b.append(sum(j * a[j] * d[k - j] for j in range(1, k + 1)) / k)
    return TaylorJet(b)


# -- elementary functions on jets -----------------------------------------

def exp(a: TaylorJet) -> TaylorJet:
    c = a.coefficients
    try:
        b = [math.exp(c[0])]
    except OverflowError:
        raise DomainError(f"exp overflow for argument {c[0]!r}") from None
    for k in range(1, len(c)):
        b.append(sum(j * c[j] * b[k - j] for j in range(1, k + 1)) / k)
    return TaylorJet(b)


def log(a: TaylorJet) -> TaylorJet:
    c = a.coefficients
    if c[0] <= 0.0:
        raise DomainError(f"log of nonpositive value {c[0]!r}")
    b = [math.log(c[0])]
    for k in range(1, len(c)):
        s = sum(j * b[j] * c[k - j] for j in range(1, k)) / k
        b.append((c[k] - s) / c[0])
    return TaylorJet(b)


def _sin_cos(a: TaylorJet, hyperbolic: bool) -> tuple[TaylorJet, TaylorJet]:
    c = a.coefficients
    if hyperbolic:
        try:
            s, co = [math.sinh(c[0])], [math.cosh(c[0])]
        except OverflowError:
            raise DomainError(f"sinh/cosh overflow for argument {c[0]!r}") from None
        sign = 1.0
    else:
        s, co = [math.sin(c[0])], [math.cos(c[0])]
        sign = -1.0
    for k in range(1, len(c)):
        s.append(sum(j * c[j] * co[k - j] for j in range(1, k + 1)) / k)
        co.append(sign * sum(j * c[j] * s[k - j] for j in range(1, k + 1)) / k)
    return TaylorJet(s), TaylorJet(co)


def sin(a: TaylorJet) -> TaylorJet:
    return _sin_cos(a, False)[0]


def cos(a: TaylorJet) -> TaylorJet:
    return _sin_cos(a, False)[1]


def sinh(a: TaylorJet) -> TaylorJet:
    return _sin_cos(a, True)[0]


def cosh(a: TaylorJet) -> TaylorJet:
    return _sin_cos(a, True)[1]


def _tan_like(a: TaylorJet, t0: float, sign: float) -> TaylorJet:
    # t' = (1 + sign * t^2) a'
    c = a.coefficients
    t = [t0]
    u: list[float] = []
    for k in range(1, len(c)):
        m = k - 1
        sq = sum(t[i] * t[m - i] for i in range(m + 1))
        u.append((1.0 if m == 0 else 0.0) + sign * sq)
        t.append(sum(j * c[j] * u[k - j] for j in range(1, k + 1)) / k)
    return TaylorJet(t)


def tan(a: TaylorJet) -> TaylorJet:
    x0 = a.coefficients[0]
    if math.cos(x0) == 0.0:
        raise DomainError(f"tan pole at {x0!r}")
    return _tan_like(a, math.tan(x0), 1.0)


def tanh(a: TaylorJet) -> TaylorJet:
    return _tan_like(a, math.tanh(a.coefficients[0]), -1.0)


def sqrt(a: TaylorJet) -> TaylorJet:
    c = a.coefficients
    if c[0] <= 0.0:
        raise DomainError(f"sqrt is not differentiable at {c[0]!r}")
    b = [math.sqrt(c[0])]
    for k in range(1, len(c)):
        s = sum(b[j] * b[k - j] for j in range(1, k))
        b.append((c[k] - s) / (2.0 * b[0]))
    return TaylorJet(b)


def power(a: TaylorJet, r: float) -> TaylorJet:
    """``a ** r`` for a constant exponent ``r``."""
    c = a.coefficients
    if r == 0.0:
        return TaylorJet.constant(1.0, a.order)
    if r.is_integer() and 0 < r <= 64:
        # Repeated squaring stays exact at a0 == 0.
        n = int(r)
        result = None
        base = a
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result
    if c[0] == 0.0:
        raise DomainError(f"power {r!r} is not differentiable at 0")
    if c[0] < 0.0 and not r.is_integer():
        raise DomainError(f"non-integer power {r!r} of negative value {c[0]!r}")
    b = [c[0] ** r]
    for k in range(1, len(c)):
        s = sum((r * j - (k - j)) * c[j] * b[k - j] for j in range(1, k + 1))
        b.append(s / (k * c[0]))
    return TaylorJet(b)


def atan(a: TaylorJet) -> TaylorJet:
    d = 1.0 / (1.0 + a * a)
    return _integrate_product(a.coefficients, d.coefficients, math.atan(a.coefficients[0]))


def asin(a: TaylorJet) -> TaylorJet:
    x0 = a.coefficients[0]
    if not -1.0 < x0 < 1.0:
        raise DomainError(f"asin is not differentiable at {x0!r}")
    d = 1.0 / sqrt(1.0 - a * a)
    return _integrate_product(a.coefficients, d.coefficients, math.asin(x0))


def acos(a: TaylorJet) -> TaylorJet:
    x0 = a.coefficients[0]
    if not -1.0 < x0 < 1.0:
        raise DomainError(f"acos is not differentiable at {x0!r}")
    d = -1.0 / sqrt(1.0 - a * a)
    return _integrate_product(a.coefficients, d.coefficients, math.acos(x0))


def fabs(a: TaylorJet) -> TaylorJet:
    x0 = a.coefficients[0]
    if x0 == 0.0:
        raise DomainError("abs is not differentiable at 0")
    return a if x0 > 0.0 else -a
