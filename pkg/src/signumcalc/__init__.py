"""Radial and angular derivatives of distributions and signumdistributions."""

from __future__ import annotations

from .coeff import SYM, Coefficient, Dimension
from .distributions import DistExpr, EquivClass, World
from .operators import NormalForm, OperatorExpr, cross_partner, equals, normalize, signum_partner
from .parser import parse_distribution, parse_operator

__all__ = [
    "SYM",
    "Coefficient",
    "Dimension",
    "DistExpr",
    "EquivClass",
    "World",
    "NormalForm",
    "OperatorExpr",
    "cross_partner",
    "equals",
    "normalize",
    "signum_partner",
    "parse_distribution",
    "parse_operator",
]

__version__ = "1.0.0"
