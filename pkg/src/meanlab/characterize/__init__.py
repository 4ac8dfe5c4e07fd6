"""Functional-equation checks, solution constructors and mean classification."""

from .classify import (ClassificationReport, ConditionResult, Verdict, classify_symmetric,
                       classify_weighted)
from .construct import PolynomialInstance, construct_from_kernel, construct_from_polynomial
from .fe import (FEInstance, FEReport, check_first_integral, check_second_order_identity,
                 fe_residual)
from .oracle import OracleResult, weighted_equality_oracle
from .tolerances import Tolerances

__all__ = [
    "ClassificationReport", "ConditionResult", "FEInstance", "FEReport", "OracleResult",
    "PolynomialInstance", "Tolerances", "Verdict", "check_first_integral",
    "check_second_order_identity", "classify_symmetric", "classify_weighted",
    "construct_from_kernel", "construct_from_polynomial", "fe_residual",
    "weighted_equality_oracle",
]
