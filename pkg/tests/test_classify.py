"""Tests de la classification et des tables 1 à 4."""

from collections import Counter
from fractions import Fraction

import pytest
from sympy import totient

from src.arith.residues import ResidueTuple
from src.classify.reference_tables import (
    TABLE1,
    TABLE1_COLUMNS,
    TABLE2,
    TABLE3,
    TABLE4,
    diff_table,
    table_members,
)
from src.classify.schwarz_classifier import (
    classify_n,
    enumerate_triples,
    equiv_class,
    exhaustive_classes,
    extend_winners,
    factor_primitive,
    is_dihedral_class,
    is_primitive,
    pair_sum_dihedral,
    schwarz_normal_form,
    shape_witness,
    subtuples,
)
from src.conditions.fractional_conditions import LmnTriple, lambda_mu_nu, satisfies_condition
from src.exceptions import InvalidTupleError


def row_key(row):
    return tuple(row[c] for c in TABLE1_COLUMNS)


class TestPrimitivity:
    def test_is_primitive(self):
        assert is_primitive(ResidueTuple(6, (1, 1, 3)))
        assert not is_primitive(ResidueTuple(30, (5, 5, 10)))

    def test_factor_primitive(self):
        f = factor_primitive(ResidueTuple(30, (5, 5, 10)))
        assert f.scale == 5
        assert f.base == ResidueTuple(6, (1, 1, 2))
        assert f.to_dict()["base"] == {"d": 6, "ks": [1, 1, 2]}

    def test_subtuples(self):
        subs = subtuples(ResidueTuple(6, (1, 1, 1, 2)), 3)
        assert [s.ks for s in subs] == [(1, 1, 1), (1, 1, 2), (1, 1, 2), (1, 1, 2)]
        assert subtuples(ResidueTuple(6, (2, 1, 1)), 3) == [ResidueTuple(6, (1, 1, 2))]

    @pytest.mark.parametrize("size", [2, 5])
    def test_subtuples_size(self, size):
        with pytest.raises(InvalidTupleError):
            subtuples(ResidueTuple(6, (1, 1, 1, 2)), size)


class TestDihedral:
    def test_primitive_shape(self):
        witness = is_dihedral_class(4, 1, 1, 1)
        assert (witness.m, witness.p, witness.scale) == (2, 1, 1)
        assert len(pair_sum_dihedral(4, 1, 1, 1)) == 3

    def test_scaled_member(self):
        witness = is_dihedral_class(8, 3, 3, 1)
        assert witness is not None
        assert witness.m == 4
        assert pair_sum_dihedral(8, 3, 3, 1) == ((2, 3), (1, 3))

    def test_non_primitive(self):
        witness = shape_witness(12, 2, 2, 4)
        assert (witness.m, witness.p, witness.scale) == (3, 1, 2)
        assert len(pair_sum_dihedral(12, 2, 2, 4)) == 2

    @pytest.mark.parametrize("d, ks", [(6, (1, 1, 1)), (6, (1, 1, 3)), (7, (1, 2, 4)), (60, (13, 17, 23))])
    def test_not_dihedral(self, d, ks):
        assert is_dihedral_class(d, *ks) is None
        assert len(pair_sum_dihedral(d, *ks)) < 2

    def test_tests_agree_exhaustively(self):
        for d in range(2, 25):
            for k1 in range(1, d):
                for k2 in range(k1, d):
                    for k3 in range(k2, d):
                        # lève InconsistentVerdictError en cas de désaccord
                        is_dihedral_class(d, k1, k2, k3)


class TestSchwarzNormalForm:
    def test_sorted_in_unit_interval(self):
        form = schwarz_normal_form(lambda_mu_nu(12, 3, 3, 5))
        assert form.as_tuple() == (Fraction(1, 3), Fraction(1, 3), Fraction(1, 2))

    def test_sign_changes(self):
        assert schwarz_normal_form(lambda_mu_nu(6, 1, 1, 1)) == schwarz_normal_form(lambda_mu_nu(6, 5, 5, 5))

    def test_even_shift(self):
        form = schwarz_normal_form(LmnTriple(Fraction(5, 4), Fraction(1, 3), Fraction(1, 3)))
        assert form.as_tuple() == (Fraction(1, 4), Fraction(1, 3), Fraction(2, 3))


class TestTriples:
    def test_table1(self, triples):
        rows = [r.table_row() for r in triples.schwarz_classes]
        assert len(rows) == 14
        assert {row_key(r) for r in rows} == {row_key(r) for r in TABLE1}
        assert max(r.d for r in triples.schwarz_classes) <= 60

    def test_table1_orders(self, triples):
        for row in triples.schwarz_classes:
            assert max(row.pair_sums.orders) <= 5

    def test_every_orbit_feeds_a_row(self, triples):
        fed = {o.canonical for row in triples.schwarz_classes for o in row.orbits}
        assert fed == {c.canonical for c in triples.classes}
        for row in triples.schwarz_classes:
            assert sum(row.representative.ks) < row.d
            assert row.representative in row.members

    def test_orbit_count(self, triples):
        assert len(triples.classes) == 16
        assert set(triples.orbits_by_d()) == set(TABLE2)

    @pytest.mark.parametrize("d", sorted(TABLE2))
    def test_table2(self, triples, d):
        computed = triples.orbits_by_d()[d]
        union = Counter()
        for cls in computed:
            assert cls.orbit_size == totient(d)
            union.update(cls.member_counter())
        assert union == table_members(TABLE2[d])

    @pytest.mark.parametrize("d", [d for d in sorted(TABLE2) if d != 60])
    def test_table2_lines_are_orbits(self, triples, d):
        computed = {frozenset(cls.member_counter().items()) for cls in triples.orbits_by_d()[d]}
        assert computed == {frozenset(line.items()) for line in TABLE2[d]}

    def test_d60_single_orbit(self, triples):
        (orbit,) = triples.orbits_by_d()[60]
        assert orbit.canonical == ResidueTuple(60, (1, 11, 19))
        assert len(orbit.members) == 16

    def test_dihedral_family(self, triples):
        family = triples.dihedral_family()
        counts = dict(family.orbit_counts)
        assert counts[4] >= 1
        assert family.to_dict()["shape"] == "(2m; p, p, m-p)"
        assert all(is_dihedral_class(c.d, *c.canonical.ks) for c in triples.dihedral_classes)

    def test_invalid_bound(self):
        with pytest.raises(InvalidTupleError):
            enumerate_triples(1)

    def test_exhaustive_scan_agrees(self, triples):
        scanned = {c.canonical for c in exhaustive_classes(2, 30)}
        expected = {c.canonical for c in triples.classes + triples.dihedral_classes if c.d <= 30}
        assert scanned == expected

    @pytest.mark.slow
    def test_full_bound(self):
        full = enumerate_triples(120, workers=2)
        assert len(full.classes) == 16
        assert len(full.schwarz_classes) == 14


class TestQuadruples:
    def test_winners(self, quads):
        assert sorted(str(t) for t in quads.winners_nondihedral) == ["(6;1,1,1,1)", "(6;5,5,5,5)"]
        assert [str(t) for t in quads.winners_dihedral] == ["(6;1,1,2,1)"]

    def test_table3(self, quads):
        assert quads.candidates_nondihedral[120] == []
        computed = {
            d: [m.ks for cls in classes for m, _ in cls.members]
            for d, classes in quads.candidates_nondihedral.items()
        }
        printed = {d: list(table_members(lines)) for d, lines in TABLE3.items()}
        assert diff_table(computed, printed).empty

    def test_table4_typos(self, quads):
        computed = {d: [t.ks for t in v] for d, v in quads.candidates_dihedral_shape.items()}
        diff = diff_table(computed, TABLE4)
        assert diff.missing[30] == [(3, 3, 17, 7), (9, 29, 6, 1)]
        assert sorted(diff.extra[30]) == [(3, 3, 12, 7), (9, 9, 6, 1)]
        assert not any(v for d, v in diff.missing.items() if d != 30)
        assert not any(v for d, v in diff.extra.items() if d != 30)
        assert set(diff.to_dict()["extra"]) == {"30"}

    def test_to_dict(self, quads):
        payload = quads.to_dict()
        assert payload["winners_dihedral"] == [{"d": 6, "ks": [1, 1, 2, 1]}]
        assert payload["candidates_nondihedral"]["120"] == []


class TestClassifyN:
    @pytest.mark.parametrize("n, expected", [
        (3, ["(6;1,1,1,1)", "(6;1,1,1,2)"]),
        (4, ["(6;1,1,1,1,1)"]),
        (5, []),
        (6, []),
    ])
    def test_higher_n(self, triples, n, expected):
        result = classify_n(n, triples=triples)
        assert [str(c.canonical) for c in result.classes] == expected
        assert result.dihedral is None

    def test_n2(self, triples):
        result = classify_n(2, triples=triples)
        assert len(result.classes) == 16
        assert len(result.schwarz_classes) == 14
        payload = result.to_dict()
        assert payload["n"] == 2
        assert "dihedral" in payload

    def test_invalid_n(self, triples):
        with pytest.raises(InvalidTupleError):
            classify_n(1, triples=triples)

    def test_winner_subtuples_satisfy_ss(self, triples):
        for n in (3, 4):
            for cls in classify_n(n, triples=triples).classes:
                for member, _ in cls.members:
                    for size in range(3, len(member.ks)):
                        assert all(satisfies_condition(sub).holds for sub in subtuples(member, size))

    def test_extension_is_complete(self):
        n3 = [equiv_class(ResidueTuple(6, (1, 1, 1, 1))), equiv_class(ResidueTuple(6, (1, 1, 1, 2)))]
        n4 = extend_winners(n3)
        assert [str(c.canonical) for c in n4] == ["(6;1,1,1,1,1)"]
        assert extend_winners(n4) == []

    @pytest.mark.parametrize("n, d_max", [(3, 12), (4, 8)])
    def test_exhaustive_scan_bounded(self, n, d_max):
        found = [str(c.canonical) for c in exhaustive_classes(n, d_max)]
        expected = {3: ["(6;1,1,1,1)", "(6;1,1,1,2)"], 4: ["(6;1,1,1,1,1)"]}[n]
        assert found == expected
