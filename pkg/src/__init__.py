"""
Paquet principal du classificateur de monodromie finie (liste de Schwarz,
condition de parties fractionnaires, formes anti-hermitiennes).
"""

from src.exceptions import (
    MonodromyError,
    InvalidTupleError,
    InvalidConfigError,
    ConductorMismatchError,
    CyclotomicDivisionByZero,
    ReductionError,
    ClosedFormMismatchError,
    IntegralityError,
    InconsistentVerdictError,
)

__all__ = [
    "MonodromyError",
    "InvalidTupleError",
    "InvalidConfigError",
    "ConductorMismatchError",
    "CyclotomicDivisionByZero",
    "ReductionError",
    "ClosedFormMismatchError",
    "IntegralityError",
    "InconsistentVerdictError",
]
