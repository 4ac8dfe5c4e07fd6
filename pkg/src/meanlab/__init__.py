"""Weighted quasi-arithmetic and Bajraktarević means, their functional
equation, and numerical tests for when the two families coincide."""

__version__ = "1.0.0"

from .exprlang import GeneratorFunction, as_generator, parse
from .means import (GeneratorPair, Interval, WeightedSample, bajraktarevic_mean,
                    invert_monotone, mean_property_check, quasi_arithmetic_mean)

__all__ = [
    "GeneratorFunction", "GeneratorPair", "Interval", "WeightedSample", "__version__",
    "as_generator", "bajraktarevic_mean", "invert_monotone", "mean_property_check", "parse",
    "quasi_arithmetic_mean",
]
