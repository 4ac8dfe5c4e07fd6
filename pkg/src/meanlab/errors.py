"""Exception hierarchy shared by all meanlab modules."""

from __future__ import annotations


class MeanlabError(Exception):
    """Base class for every error raised by meanlab."""


class ParseError(MeanlabError):
    """Syntax error in a generator expression."""

    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class UnknownIdentifierError(ParseError):
    def __init__(self, name: str, offset: int):
        self.name = name
        super().__init__(f"unknown identifier {name!r}", offset)


class DomainError(MeanlabError, ValueError):
    """A function was evaluated outside its natural domain."""

    def __init__(self, message: str, node: str | None = None, point: float | None = None):
        self.node = node
        self.point = point
        parts = [message]
        if node is not None:
            parts.append(f"in {node}")
        if point is not None:
            parts.append(f"at x={point!r}")
        super().__init__(" ".join(parts))


class DerivativeUnavailableError(MeanlabError):
    """Taylor derivatives were requested from a value-only function."""


class BracketError(MeanlabError, ValueError):
    """Root-finding target lies outside the image of the bracket."""


class PreconditionError(MeanlabError, ValueError):
    """An input violates the documented preconditions of an operation."""


class ClassViolationError(PreconditionError):
    """A generator pair is not in the required regularity class."""


class DegeneratePairError(MeanlabError):
    """The two functions of a pair are numerically linearly dependent."""


class SingularWronskianError(MeanlabError):
    """W^{1,0} vanishes (numerically) at some point."""

    def __init__(self, point: float, value: float):
        self.point = point
        self.value = value
        super().__init__(f"W10 vanishes at x={point!r} (value {value:.3e})")


class DomainSplitError(PreconditionError):
    """A constructed f has zeros inside the requested domain."""

    def __init__(self, zeros: list[float]):
        self.zeros = list(zeros)
        listed = ", ".join(f"{z:.12g}" for z in self.zeros)
        super().__init__(f"f vanishes inside the domain at x = {listed}; split the domain there")


class PositivityError(PreconditionError):
    def __init__(self, point: float, value: float):
        self.point = point
        self.value = value
        super().__init__(f"polynomial is not positive on the domain: P({point!r}) = {value!r}")


class FunctionVanishesError(MeanlabError):
    """f changes sign or vanishes on the grid, so f^2 phi' cannot be a nonzero constant."""

    def __init__(self, point: float):
        self.point = point
        super().__init__(f"f vanishes near x={point!r}")


class QuadratureError(MeanlabError):
    pass


class EvaluationError(MeanlabError):
    """A grid evaluation failed; carries the offending grid coordinates."""

    def __init__(self, message: str, coordinates: tuple[float, ...]):
        self.coordinates = coordinates
        super().__init__(f"{message} at grid point {coordinates!r}")


class ConfigError(MeanlabError):
    pass
