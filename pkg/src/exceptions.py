"""
Hiérarchie d'exceptions du projet.

Toutes les erreurs métier dérivent de MonodromyError afin que le point
d'entrée (main.py) puisse les distinguer des erreurs de programmation.
"""


class MonodromyError(Exception):
    """Erreur de base du classificateur."""


class InvalidTupleError(MonodromyError, ValueError):
    """Tuple de résidus invalide, résidu nul ou élément s non inversible."""


class InvalidConfigError(MonodromyError, ValueError):
    """Valeur de configuration (.env ou ligne de commande) hors bornes."""


class ConductorMismatchError(MonodromyError, ValueError):
    """Opération entre éléments cyclotomiques de conducteurs différents."""


class CyclotomicDivisionByZero(MonodromyError, ZeroDivisionError):
    """Division par l'élément nul de Q(zeta_d)."""


class ReductionError(MonodromyError, ArithmeticError):
    """Une division polynomiale censée être exacte a laissé un reste."""


class ClosedFormMismatchError(MonodromyError, ArithmeticError):
    """Un mineur (ou un signe) calculé diffère de sa formule fermée."""


class IntegralityError(MonodromyError, ArithmeticError):
    """Un coefficient non entier est apparu pendant la clôture du groupe."""


class InconsistentVerdictError(MonodromyError):
    """Deux critères censés être équivalents donnent des verdicts différents."""
