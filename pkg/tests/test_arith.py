"""Tests des résidus, unités et orbites."""

from collections import Counter
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy import totient

from src.arith.residues import (
    ResidueTuple,
    canonical_rep,
    check_unit,
    frac_part,
    fraction_from_str,
    fraction_to_str,
    fractional,
    integer_part,
    orbit,
    orbit_multiset,
    primitive_mask,
    residue_table,
    sorted_tuples,
    units,
)
from src.exceptions import InvalidTupleError


@st.composite
def residue_tuples(draw, max_d=40, sizes=(3, 4, 5)):
    d = draw(st.integers(min_value=2, max_value=max_d))
    size = draw(st.sampled_from(sizes))
    ks = draw(st.lists(st.integers(min_value=1, max_value=d - 1), min_size=size, max_size=size))
    return ResidueTuple(d, tuple(ks))


class TestResidueTuple:
    def test_str_and_n(self):
        t = ResidueTuple(6, (1, 1, 3))
        assert str(t) == "(6;1,1,3)"
        assert t.n == 2

    @pytest.mark.parametrize("d, ks", [(1, (1, 1, 1)), (6, (1, 1)), (6, (0, 1, 1)), (6, (1, 6, 1))])
    def test_invalid(self, d, ks):
        with pytest.raises(InvalidTupleError):
            ResidueTuple(d, ks)

    def test_parse(self):
        assert ResidueTuple.parse(12, "1, 3,5") == ResidueTuple(12, (1, 3, 5))
        with pytest.raises(InvalidTupleError):
            ResidueTuple.parse(12, "1,a,5")

    def test_dict_roundtrip(self):
        t = ResidueTuple(60, (13, 17, 23))
        assert ResidueTuple.from_dict(t.to_dict()) == t

    def test_scaled_and_multiplied(self):
        t = ResidueTuple(10, (1, 3, 3))
        assert t.scaled(3) == ResidueTuple(10, (3, 9, 9))
        assert t.multiplied(3) == ResidueTuple(30, (3, 9, 9))
        assert t.remainders(7) == (7, 1, 1)


class TestUnits:
    @pytest.mark.parametrize("d", [2, 6, 12, 30, 60, 120])
    def test_size_is_totient(self, d):
        assert len(units(d)) == totient(d)

    def test_inverse(self):
        g = units(30)
        for s in g:
            assert (s * g.inverse(s)) % 30 == 1

    def test_check_unit(self):
        assert check_unit(13, 12) == 1
        with pytest.raises(InvalidTupleError):
            check_unit(4, 12)


class TestFractions:
    def test_frac_part(self):
        assert frac_part(5, 12, 5) == Fraction(1, 12)
        with pytest.raises(InvalidTupleError):
            frac_part(12, 12, 1)
        with pytest.raises(InvalidTupleError):
            frac_part(1, 12, 2)

    def test_fractional_and_integer_part(self):
        x = Fraction(-7, 3)
        assert integer_part(x) == -3
        assert fractional(x) == Fraction(2, 3)

    def test_fraction_strings(self):
        assert fraction_to_str(Fraction(1, 2)) == "1/2"
        assert fraction_to_str(Fraction(2)) == "2/1"
        assert fraction_from_str("13/60") == Fraction(13, 60)


class TestOrbits:
    def test_orbit_of_d6(self):
        counts = orbit_multiset(ResidueTuple(6, (1, 1, 3)))
        assert counts == Counter({ResidueTuple(6, (1, 1, 3)): 1, ResidueTuple(6, (3, 5, 5)): 1})

    def test_orbit_with_multiplicity(self):
        counts = orbit_multiset(ResidueTuple(12, (1, 3, 5)))
        assert set(counts.values()) == {2}
        assert set(orbit(ResidueTuple(12, (1, 3, 5)))) == {ResidueTuple(12, (1, 3, 5)), ResidueTuple(12, (7, 9, 11))}

    def test_canonical_rep(self):
        assert canonical_rep(ResidueTuple(60, (31, 41, 49))) == ResidueTuple(60, (1, 11, 19))

    @given(residue_tuples())
    def test_orbit_cardinality(self, t):
        assert sum(orbit_multiset(t).values()) == totient(t.d)

    @given(residue_tuples())
    def test_canonical_rep_idempotent(self, t):
        rep = canonical_rep(t)
        assert canonical_rep(rep) == rep
        assert rep in orbit(t)


class TestVectorised:
    def test_residue_table_shape(self):
        ks = np.array([[1, 1, 3], [1, 2, 7]])
        table = residue_table(12, ks)
        assert table.shape == (2, 4, 3)
        assert table[1, 1].tolist() == [5, 10, 11]

    def test_primitive_mask(self):
        ks = np.array([[2, 4, 6], [2, 4, 3]])
        assert primitive_mask(12, ks).tolist() == [False, True]

    @pytest.mark.parametrize("d, size", [(7, 3), (10, 4)])
    def test_sorted_tuples_count(self, d, size):
        rows = np.vstack(list(sorted_tuples(d, size, chunk=17)))
        assert rows.shape == (comb(d - 1 + size - 1, size), size)
        assert (np.diff(rows, axis=1) >= 0).all()
