"""
Suite de recette de la commande `verify`.
"""

from .acceptance import (
    AcceptanceBounds,
    AcceptanceReport,
    CriterionResult,
    check_classification,
    check_equivalence,
    check_oracle,
    check_properties,
    check_signs,
    check_table1,
    check_table2,
    run_acceptance,
)
