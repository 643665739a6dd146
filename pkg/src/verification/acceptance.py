"""
Suite de recette exécutée par la commande `verify`.

Chaque critère renvoie un CriterionResult {name, passed, details}; les bornes
(d_max des balayages, plafond de clôture, graine) viennent des réglages.
"""

import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Dict, List, Optional

import numpy as np
from tqdm import tqdm

from src.arith.residues import (
    ResidueTuple,
    canonical_rep,
    orbit_multiset,
    primitive_mask,
    sorted_tuples,
    units,
)
from src.classify.reference_tables import TABLE1, TABLE1_COLUMNS, TABLE2, TABLE3, TABLE4, diff_table, table_members
from src.classify.schwarz_classifier import (
    TripleEnumeration,
    classify_n,
    enumerate_quadruples,
    enumerate_triples,
    exhaustive_classes,
    is_dihedral_class,
    subtuples,
)
from src.conditions.fractional_conditions import (
    condition_mask,
    satisfies_condition,
    satisfies_star,
    star_mask,
    sum_fracs,
)
from src.cyclotomic.cyclotomic_field import CycloElem, embed, galois
from src.exceptions import ClosedFormMismatchError, MonodromyError
from src.forms.skew_hermitian import (
    GUARD_BAND,
    anisotropy_mask,
    build_h,
    closed_form_minor,
    det_float_n2,
    det_sign_n2,
    minor_identity_mask,
    principal_minors,
    totally_anisotropic,
)
from src.groups.monodromy_group import (
    determinant_order,
    dihedral_trace_test,
    gassner_generators_n2,
    group_closure,
    pgl2_orders,
    projective_order,
    sample_form_invariance,
)

logger = logging.getLogger("schwarz_monodromy.verification")

EMBED_TOLERANCE = 1e-9


@dataclass(frozen=True)
class CriterionResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "details": self.details}


@dataclass(frozen=True)
class AcceptanceReport:
    criteria: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.criteria)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "criteria": [c.to_dict() for c in self.criteria]}


@dataclass(frozen=True)
class AcceptanceBounds:
    d_max: int = 120
    sweep_d_max: int = 30
    sweep_sizes: tuple = (3, 4, 5)
    exact_d_max: int = 16
    minor_exact_d_max: int = 8
    exhaustive_d_max: int = 24
    oracle_d_max: int = 12
    cap: int = 1_000_000
    seed: int = 20240229
    minor_samples: int = 200
    property_samples: int = 200
    workers: int = 1
    progress: bool = False


def _ks_text(ks) -> str:
    return "(" + ",".join(str(k) for k in ks) + ")"


def check_table1(triples: TripleEnumeration) -> CriterionResult:
    rows = [r.table_row() for r in triples.schwarz_classes]
    computed = {tuple(r[c] for c in TABLE1_COLUMNS) for r in rows}
    printed = {tuple(r[c] for c in TABLE1_COLUMNS) for r in TABLE1}
    max_d = max((r.d for r in triples.schwarz_classes), default=0)
    passed = len(rows) == 14 and computed == printed and max_d <= 60
    return CriterionResult("table1", passed, {
        "rows": len(rows),
        "max_d": max_d,
        "missing": len(printed - computed),
        "extra": len(computed - printed),
    })


def check_table2(triples: TripleEnumeration) -> CriterionResult:
    by_d = triples.orbits_by_d()
    problems = []
    for d, lines in TABLE2.items():
        computed = by_d.get(d, [])
        if any(cls.orbit_size != len(units(d)) for cls in computed):
            problems.append(f"d={d}: orbite de cardinal différent de phi(d)")
        printed_union = dict(table_members(lines))
        computed_union = Counter()
        for cls in computed:
            computed_union.update(cls.member_counter())
        if dict(computed_union) != printed_union:
            problems.append(f"d={d}: membres différents de la table imprimée")
        if d == 60:
            if len(computed) != 1:
                problems.append("d=60: les 16 triplets ne forment pas une seule orbite")
        else:
            printed_lines = {frozenset(line.items()) for line in lines}
            computed_lines = {frozenset(cls.member_counter().items()) for cls in computed}
            if printed_lines != computed_lines:
                problems.append(f"d={d}: découpage en orbites différent")
    unexpected = sorted(set(by_d) - set(TABLE2))
    if unexpected:
        problems.append(f"dénominateurs inattendus: {unexpected}")
    return CriterionResult("table2", not problems, {"problems": problems, "denominators": sorted(by_d)})


def check_classification(
    triples: TripleEnumeration, workers: int = 1, exhaustive_d_max: int = 24
) -> CriterionResult:
    """
    Classes n = 3..6 par le théorème, recoupées pour n = 3, 4 par le balayage
    direct de tous les tuples triés jusqu'à exhaustive_d_max.
    """
    expected = {
        3: ["(6;1,1,1,1)", "(6;1,1,1,2)"],
        4: ["(6;1,1,1,1,1)"],
        5: [],
        6: [],
    }
    by_n = {n: classify_n(n, triples.d_max, workers, triples=triples).classes for n in expected}
    got: Dict[int, List[str]] = {n: [str(c.canonical) for c in cs] for n, cs in by_n.items()}
    scanned: Dict[int, List[str]] = {}
    exhaustive_diff: Dict[int, dict] = {}
    for n in (3, 4):
        scanned[n] = sorted(str(c.canonical) for c in exhaustive_classes(n, exhaustive_d_max, workers))
        bounded = sorted(str(c.canonical) for c in by_n[n] if c.d <= exhaustive_d_max)
        if scanned[n] != bounded:
            exhaustive_diff[n] = {"scan": scanned[n], "theorem": bounded}

    quads = enumerate_quadruples(triples)
    nd_winners = sorted(str(t) for t in quads.winners_nondihedral)
    dh_winners = sorted(str(t) for t in quads.winners_dihedral)
    computed_t3 = {
        d: [m.ks for cls in classes for m, _ in cls.members]
        for d, classes in quads.candidates_nondihedral.items()
    }
    printed_t3 = {d: list(table_members(lines)) for d, lines in TABLE3.items()}
    t3_diff = diff_table(computed_t3, printed_t3)
    t4_diff = diff_table(
        {d: [t.ks for t in v] for d, v in quads.candidates_dihedral_shape.items()},
        TABLE4,
    )
    passed = (
        got == expected
        and not exhaustive_diff
        and nd_winners == ["(6;1,1,1,1)", "(6;5,5,5,5)"]
        and dh_winners == ["(6;1,1,2,1)"]
        and quads.candidates_nondihedral.get(120) == []
        and t3_diff.empty
    )
    return CriterionResult("classification", passed, {
        "classes": got,
        "exhaustive_d_max": exhaustive_d_max,
        "exhaustive": {str(n): v for n, v in scanned.items()},
        "exhaustive_diff": {str(n): v for n, v in exhaustive_diff.items()},
        "table3_winners": nd_winners,
        "table4_winners": dh_winners,
        "table3_diff": t3_diff.to_dict(),
        "table4_diff": t4_diff.to_dict(),
    })


def _primitive_blocks(d: int, size: int):
    for block in sorted_tuples(d, size):
        block = block[primitive_mask(d, block)]
        if block.shape[0]:
            yield block


def _exact_verdicts(t: ResidueTuple) -> tuple:
    return (
        satisfies_condition(t).holds,
        satisfies_star(t).holds,
        totally_anisotropic(t).totally_anisotropic,
    )


def check_equivalence(bounds: AcceptanceBounds) -> CriterionResult:
    """
    (SS) = (*) = anisotropie totale sur tous les tuples primitifs triés.

    Le balayage complet passe par les masques vectorisés; jusqu'à exact_d_max
    chaque tuple est aussi décidé par les trois opérations exactes, qui doivent
    reproduire les masques. Au-delà, un échantillon aléatoire fait le même contrôle.
    """
    checked, exact_checked, mismatches, exact_bad = 0, 0, [], []
    moduli = range(2, bounds.sweep_d_max + 1)
    for d in tqdm(moduli, desc="équivalences", unit="d", disable=not bounds.progress):
        for size in bounds.sweep_sizes:
            for block in _primitive_blocks(d, size):
                ss = condition_mask(d, block)
                star = star_mask(d, block)
                aniso = anisotropy_mask(d, block)
                bad = (ss != star) | (ss != aniso)
                checked += block.shape[0]
                for row in block[bad][:10]:
                    mismatches.append(_ks_text([d, *row.tolist()]))
                if d > bounds.exact_d_max:
                    continue
                for row, verdict in zip(block.tolist(), ss.tolist()):
                    exact_checked += 1
                    if set(_exact_verdicts(ResidueTuple(d, tuple(row)))) != {verdict}:
                        exact_bad.append(_ks_text([d, *row]))

    rng = random.Random(bounds.seed)
    sampled = 0
    if bounds.sweep_d_max > bounds.exact_d_max:
        for _ in range(bounds.property_samples):
            t = _random_primitive(rng, bounds.sweep_d_max, rng.choice(bounds.sweep_sizes), bounds.exact_d_max + 1)
            block = np.array([t.ks], dtype=np.int64)
            verdict = bool(condition_mask(t.d, block)[0])
            sampled += 1
            if set(_exact_verdicts(t)) != {verdict}:
                exact_bad.append(str(t))
    passed = not mismatches and not exact_bad
    return CriterionResult("equivalence", passed, {
        "checked": checked,
        "exact_checked": exact_checked,
        "exact_sampled": sampled,
        "mismatches": mismatches[:20],
        "exact_mismatches": exact_bad[:20],
    })


def _random_primitive(rng: random.Random, d_max: int, size: int, d_min: int = 2) -> ResidueTuple:
    while True:
        d = rng.randint(d_min, d_max)
        ks = tuple(sorted(rng.randint(1, d - 1) for _ in range(size)))
        if gcd(d, *ks) == 1:
            return ResidueTuple(d, ks)


def _minors_match(t: ResidueTuple, s: int) -> bool:
    try:
        minors = principal_minors(build_h(t, s)).minors
    except ClosedFormMismatchError:
        return False
    return all(u == closed_form_minor(t, s, j) for j, u in enumerate(minors, start=1))


def _det_sign_expected(d: int, ks: list, s: int) -> int:
    # -(-1)^[Sigma_s], avec [Sigma_s] = (somme des restes k_i s mod d) // d
    return -1 if (sum((k * s) % d for k in ks) // d) % 2 == 0 else 1


def check_signs(bounds: AcceptanceBounds) -> CriterionResult:
    """
    Signe de det(h) pour n = 2 et mineurs principaux, sur tous les tuples primitifs triés.

    - det: à chaque unité s, det_sign_n2 doit valoir -(-1)^[Sigma_s] et le signe de
      la formule des sinus doit concorder hors de la bande de garde
    - mineurs: minor_identity_mask à tout s pour tous les tuples; principal_minors
      comparé terme à terme à closed_form_minor pour tous les tuples jusqu'à
      minor_exact_d_max, puis sur un échantillon jusqu'à sweep_d_max
    """
    det_checked, det_guarded, det_bad = 0, 0, []
    identity_checked, identity_bad = 0, []
    exact_checked, exact_bad = 0, []
    for d in tqdm(range(2, bounds.sweep_d_max + 1), desc="signes", unit="d", disable=not bounds.progress):
        us = units(d).units
        for block in _primitive_blocks(d, 3):
            for row in block.tolist():
                for s in us:
                    expected = _det_sign_expected(d, row, s)
                    try:
                        sign = det_sign_n2(d, *row, s)
                    except ClosedFormMismatchError:
                        sign = None
                    value = det_float_n2(d, *row, s)
                    det_checked += 1
                    if abs(value) <= GUARD_BAND:
                        det_guarded += 1
                        float_ok = True
                    else:
                        float_ok = (value > 0) == (expected > 0)
                    if sign != expected or not float_ok:
                        det_bad.append(f"{_ks_text([d, *row])} s={s}")

        for size in bounds.sweep_sizes:
            for block in _primitive_blocks(d, size):
                ok = minor_identity_mask(d, block)
                identity_checked += block.shape[0] * len(us)
                for row in block[~ok][:10]:
                    identity_bad.append(_ks_text([d, *row.tolist()]))
                if d > bounds.minor_exact_d_max:
                    continue
                for row in block.tolist():
                    t = ResidueTuple(d, tuple(row))
                    for s in us:
                        exact_checked += 1
                        if not _minors_match(t, s):
                            exact_bad.append(f"{t} s={s}")

    rng = random.Random(bounds.seed)
    sampled = 0
    if bounds.sweep_d_max > bounds.minor_exact_d_max:
        for _ in range(bounds.minor_samples):
            t = _random_primitive(rng, bounds.sweep_d_max, rng.choice(bounds.sweep_sizes), bounds.minor_exact_d_max + 1)
            s = rng.choice(units(t.d).units)
            sampled += 1
            if not _minors_match(t, s):
                exact_bad.append(f"{t} s={s}")

    passed = not det_bad and not identity_bad and not exact_bad
    return CriterionResult("signs", passed, {
        "det_checks": det_checked,
        "det_in_guard_band": det_guarded,
        "det_mismatches": det_bad[:20],
        "minor_identity_checks": identity_checked,
        "minor_identity_mismatches": identity_bad[:20],
        "minor_exact_checks": exact_checked,
        "minor_exact_sampled": sampled,
        "minor_exact_mismatches": exact_bad[:20],
    })


def check_oracle(bounds: AcceptanceBounds) -> CriterionResult:
    """
    Clôture de groupe pour tous les triplets primitifs jusqu'à oracle_d_max.

    Pour chaque clôture finie: échantillon d'éléments préservant h, ordres
    projectifs de A et B égaux à ceux prédits par pgl2_orders, et déterminant
    de A d'ordre identique à celui de A dans PGL_2.
    """
    disagreements, invariance_failures, trace_mismatches, order_mismatches = [], [], [], []
    closures = 0
    for d in tqdm(range(2, bounds.oracle_d_max + 1), desc="oracle", unit="d", disable=not bounds.progress):
        for block in _primitive_blocks(d, 3):
            for row in block.tolist():
                t = ResidueTuple(d, tuple(row))
                a, b = gassner_generators_n2(d, *row)
                result = group_closure([a, b], bounds.cap, detect_infinite_order=True)
                closures += 1
                if result.finite != satisfies_condition(t).holds:
                    disagreements.append({"tuple": str(t), "closure": result.to_dict()})
                if result.finite:
                    if not sample_form_invariance(result, build_h(t), seed=bounds.seed):
                        invariance_failures.append(str(t))
                    predicted = pgl2_orders(d, *row).orders
                    observed = (projective_order(a), projective_order(b))
                    if observed != predicted[:2] or determinant_order(a) != predicted[0]:
                        order_mismatches.append({
                            "tuple": str(t),
                            "predicted": list(predicted[:2]),
                            "observed": list(observed),
                        })
                dihedral = is_dihedral_class(d, *row) is not None
                if dihedral_trace_test(a, b).dihedral != dihedral:
                    trace_mismatches.append(str(t))
    orders_ok = all(max(pgl2_orders(r["d"], *_table1_ks(r)).orders) <= 5 for r in TABLE1)
    passed = (
        not disagreements
        and not invariance_failures
        and not trace_mismatches
        and not order_mismatches
        and orders_ok
    )
    return CriterionResult("oracle", passed, {
        "closures": closures,
        "disagreements": disagreements[:10],
        "invariance_failures": invariance_failures[:10],
        "trace_mismatches": trace_mismatches[:10],
        "projective_order_mismatches": order_mismatches[:10],
        "table1_orders_at_most_5": orders_ok,
    })


def _table1_ks(row: dict) -> tuple:
    return tuple(int(row[c] * row["d"]) for c in ("k1/d", "k2/d", "k3/d"))


def check_properties(bounds: AcceptanceBounds, triples: Optional[TripleEnumeration] = None) -> CriterionResult:
    rng = random.Random(bounds.seed)
    failures = []

    def expect(ok: bool, label: str):
        if not ok:
            failures.append(label)

    for _ in range(bounds.property_samples):
        t = _random_primitive(rng, bounds.sweep_d_max, rng.choice(bounds.sweep_sizes))
        for s in units(t.d):
            expect(sum_fracs(t, s) + sum_fracs(t, t.d - s) == t.n + 1, f"somme complémentaire {t} s={s}")
        rep = canonical_rep(t)
        expect(canonical_rep(rep) == rep, f"idempotence {t}")
        expect(sum(orbit_multiset(t).values()) == len(units(t.d)), f"cardinal d'orbite {t}")

        d = rng.randint(3, bounds.sweep_d_max)
        a = _random_elem(rng, d)
        b = _random_elem(rng, d)
        s, u = rng.choice(units(d).units), rng.choice(units(d).units)
        expect(galois(a * b, s) == galois(a, s) * galois(b, s), f"galois multiplicatif d={d}")
        expect(galois(a + b, s) == galois(a, s) + galois(b, s), f"galois additif d={d}")
        expect(galois(galois(a, s), u) == galois(a, (s * u) % d), f"composition galois d={d}")
        expect(galois(galois(a, s), units(d).inverse(s)) == a, f"galois inverse d={d}")
        expect(abs(embed(a * b, s) - embed(a, s) * embed(b, s)) < EMBED_TOLERANCE * max(1.0, abs(embed(a * b, s))),
               f"plongement d={d}")

    winners = []
    if triples is not None:
        for n in (3, 4):
            for cls in classify_n(n, triples.d_max, triples=triples).classes:
                winners.extend(m for m, _ in cls.members)
    for w in winners:
        for size in range(3, len(w.ks)):
            for sub in subtuples(w, size):
                expect(satisfies_condition(sub).holds, f"bootstrap {w} -> {sub}")
    return CriterionResult("properties", not failures, {
        "samples": bounds.property_samples,
        "winners_checked": len(winners),
        "failures": failures[:20],
    })


def _random_elem(rng: random.Random, d: int) -> CycloElem:
    return CycloElem.from_coeffs(d, [rng.randint(-3, 3) for _ in range(d)])


def run_acceptance(
    bounds: AcceptanceBounds,
    on_stage: Optional[Callable[[str, bool], None]] = None,
) -> AcceptanceReport:
    """Exécute les critères dans l'ordre; `on_stage(nom, début)` encadre chaque critère."""

    def stage(name, fn):
        if on_stage:
            on_stage(name, True)
        try:
            result = fn()
        except MonodromyError as e:
            logger.error(f"critère {name} interrompu: {e}")
            result = CriterionResult(name, False, {"error": str(e)})
        if on_stage:
            on_stage(name, False)
        return result

    triples = enumerate_triples(bounds.d_max, bounds.workers, bounds.progress)
    criteria = [
        stage("table1", lambda: check_table1(triples)),
        stage("table2", lambda: check_table2(triples)),
        stage("classification", lambda: check_classification(triples, bounds.workers, bounds.exhaustive_d_max)),
        stage("equivalence", lambda: check_equivalence(bounds)),
        stage("signs", lambda: check_signs(bounds)),
        stage("oracle", lambda: check_oracle(bounds)),
        stage("properties", lambda: check_properties(bounds, triples)),
    ]
    for c in criteria:
        logger.info(f"critère {c.name}: {'OK' if c.passed else 'ÉCHEC'}")
    return AcceptanceReport(tuple(criteria))
