"""Tests de la suite de recette avec des bornes réduites."""

from itertools import combinations_with_replacement
from math import gcd

import pytest

from src.verification.acceptance import (
    AcceptanceBounds,
    check_classification,
    check_equivalence,
    check_oracle,
    check_properties,
    check_signs,
    check_table1,
    check_table2,
    run_acceptance,
)

SMALL = AcceptanceBounds(
    d_max=60,
    sweep_d_max=12,
    exact_d_max=10,
    minor_exact_d_max=6,
    exhaustive_d_max=12,
    oracle_d_max=6,
    minor_samples=30,
    property_samples=30,
)


def test_table_criteria(triples):
    t1 = check_table1(triples)
    assert t1.passed, t1.details
    assert t1.details["rows"] == 14
    t2 = check_table2(triples)
    assert t2.passed, t2.details


def test_classification_criterion(triples):
    result = check_classification(triples)
    assert result.passed, result.details
    assert result.details["exhaustive_d_max"] == 24
    assert result.details["exhaustive"] == {"3": ["(6;1,1,1,1)", "(6;1,1,1,2)"], "4": ["(6;1,1,1,1,1)"]}
    assert result.details["exhaustive_diff"] == {}
    assert result.details["table4_winners"] == ["(6;1,1,2,1)"]
    assert result.details["table4_diff"]["missing"] == {"30": [[3, 3, 17, 7], [9, 29, 6, 1]]}


def test_sampled_criteria(triples):
    for result in (check_equivalence(SMALL), check_signs(SMALL), check_properties(SMALL, triples)):
        assert result.passed, result.to_dict()


def test_equivalence_exact_sweep():
    details = check_equivalence(SMALL).details
    assert details["exact_checked"] > 0
    assert details["exact_sampled"] == SMALL.property_samples
    assert details["checked"] > details["exact_checked"]
    assert details["mismatches"] == details["exact_mismatches"] == []


def test_signs_are_exhaustive():
    result = check_signs(SMALL)
    assert result.passed, result.details
    details = result.details
    # chaque triplet primitif trié, à chaque unité
    expected = sum(
        sum(1 for ks in combinations_with_replacement(range(1, d), 3) if gcd(d, *ks) == 1)
        * sum(1 for s in range(1, d) if gcd(s, d) == 1)
        for d in range(2, SMALL.sweep_d_max + 1)
    )
    assert details["det_checks"] == expected
    assert details["det_mismatches"] == []
    assert details["minor_identity_checks"] > details["minor_exact_checks"] > 0
    assert details["minor_exact_sampled"] == SMALL.minor_samples
    assert details["minor_identity_mismatches"] == details["minor_exact_mismatches"] == []


def test_oracle_orders():
    result = check_oracle(SMALL)
    assert result.passed, result.details
    assert result.details["closures"] > 0
    assert result.details["projective_order_mismatches"] == []


def test_run_acceptance_reports_stages():
    events = []
    report = run_acceptance(SMALL, on_stage=lambda name, starting: events.append((name, starting)))
    names = [c.name for c in report.criteria]
    assert names == ["table1", "table2", "classification", "equivalence", "signs", "oracle", "properties"]
    assert report.passed, report.to_dict()
    assert events[0] == ("table1", True)
    assert events[-1] == ("properties", False)
    assert report.to_dict()["passed"] is True


@pytest.mark.slow
def test_masks_match_exact_verdicts_to_30():
    bounds = AcceptanceBounds(sweep_d_max=30, exact_d_max=30, property_samples=0)
    result = check_equivalence(bounds)
    assert result.passed, result.details
    assert result.details["exact_checked"] == result.details["checked"]


@pytest.mark.slow
def test_full_acceptance():
    assert run_acceptance(AcceptanceBounds()).passed
