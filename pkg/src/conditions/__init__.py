from src.conditions.fractional_conditions import (
    SS,
    STAR,
    Witness,
    StarTrace,
    ConditionReport,
    LmnTriple,
    MuInfinity,
    sum_fracs,
    satisfies_condition,
    lambda_mu_nu,
    star_trace,
    satisfies_star,
    mu_infinity,
    condition_mask,
    star_mask,
    first_failure,
)
