"""Pure discrete spectrum checks for Pisot substitutions."""

__version__ = "0.1.0"

from .interior import (NOT_DETECTED, PRECONDITION_FAILED, PURE_DISCRETE, InteriorReport,
                       decide_pure_discreteness, interior_language)
from .substitution import Substitution, parse_substitution

__all__ = [
    "__version__",
    "Substitution",
    "parse_substitution",
    "decide_pure_discreteness",
    "interior_language",
    "InteriorReport",
    "PURE_DISCRETE",
    "NOT_DETECTED",
    "PRECONDITION_FAILED",
]
