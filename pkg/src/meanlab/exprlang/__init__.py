"""Generator expression language: parsing, evaluation and Taylor jets."""

from .generator import GeneratorFunction, as_generator
from .jets import ORDER, TaylorJet
from .parser import Expression, derivative, eval_jet, parse, to_source

__all__ = [
    "ORDER",
    "Expression",
    "GeneratorFunction",
    "TaylorJet",
    "as_generator",
    "derivative",
    "eval_jet",
    "parse",
    "to_source",
]
