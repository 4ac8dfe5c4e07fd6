"""The single tolerance record shared by every check."""

from __future__ import annotations

import dataclasses
import math
import os
from dataclasses import dataclass

from ..errors import ConfigError

SCALE_ENV = "MEANLAB_TOLERANCE_SCALE"


@dataclass(frozen=True)
class Tolerances:
    """Acceptance thresholds.

    ``fe`` bounds normalized functional-equation residuals, ``identity``
    bounds value-level identities (fits, mean equalities), and
    ``derivative`` bounds checks that consume jet derivatives.
    """

    fe: float = 1e-8
    identity: float = 1e-8
    derivative: float = 1e-6
    equivalence: float = 1e-8
    root: float = 1e-12
    quadrature: float = 1e-11

    def __post_init__(self):
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ConfigError(f"tolerance {f.name} must be a positive number, got {v!r}")

    def scaled(self, s: float) -> "Tolerances":
        return Tolerances(**{f.name: getattr(self, f.name) * s for f in dataclasses.fields(self)})

    def replace(self, **overrides: float) -> "Tolerances":
        names = {f.name for f in dataclasses.fields(self)}
        unknown = set(overrides) - names
        if unknown:
            raise ConfigError(f"unknown tolerance(s): {', '.join(sorted(unknown))}; "
                              f"known: {', '.join(sorted(names))}")
        return dataclasses.replace(self, **overrides)

    @classmethod
    def from_env(cls, environ=None, overrides: dict | None = None) -> "Tolerances":
        """Defaults with ``overrides`` applied, then scaled by the environment factor."""
        environ = os.environ if environ is None else environ
        base = cls().replace(**(overrides or {}))
        raw = environ.get(SCALE_ENV)
        if raw is None or raw.strip() == "":
            return base
        try:
            s = float(raw)
        except ValueError:
            raise ConfigError(f"{SCALE_ENV} must be a number, got {raw!r}") from None
        if not (math.isfinite(s) and s > 0):
            raise ConfigError(f"{SCALE_ENV} must be positive, got {raw!r}")
        return base.scaled(s)
