"""Tests de la forme anti-hermitienne h et de ses mineurs."""

from math import gcd

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from src.arith.residues import ResidueTuple, primitive_mask, sorted_tuples, units
from src.conditions.fractional_conditions import satisfies_condition
from src.cyclotomic.cyclotomic_field import embed
from src.exceptions import InvalidTupleError
from src.forms.skew_hermitian import (
    anisotropy_mask,
    beta_sign,
    build_h,
    closed_form_minor,
    det_float_n2,
    det_nonzero_n2,
    det_sign_n2,
    float_beta,
    minor_identity_mask,
    n2_matrix_form,
    principal_minors,
    totally_anisotropic,
)
from tests.test_arith import residue_tuples


class TestBuildH:
    @pytest.mark.parametrize("d, ks", [(6, (1, 1, 1)), (12, (1, 2, 7)), (30, (1, 9, 9, 11)), (7, (1, 2, 4))])
    def test_skew_hermitian_tridiagonal(self, d, ks):
        form = build_h(ResidueTuple(d, ks))
        assert form.n == len(ks) - 1
        assert form.is_skew_hermitian()
        assert form.is_tridiagonal()

    def test_non_unit_embedding(self):
        with pytest.raises(InvalidTupleError):
            build_h(ResidueTuple(12, (1, 3, 5)), s=2)

    def test_n2_matrix_form_is_transpose(self):
        t = ResidueTuple(12, (1, 2, 7))
        form, variant = build_h(t, 5), n2_matrix_form(t, 5)
        assert variant.entry(0, 1) == form.entry(1, 0)
        assert variant.entry(1, 0) == form.entry(0, 1)
        assert variant.embedding_unit == 5

    def test_n2_matrix_form_requires_n2(self):
        with pytest.raises(InvalidTupleError):
            n2_matrix_form(ResidueTuple(6, (1, 1, 1, 1)))

    def test_to_dict(self):
        payload = build_h(ResidueTuple(6, (1, 1, 1))).to_dict()
        assert payload["n"] == 2
        assert payload["s"] == 1
        assert len(payload["entries"]) == 2


class TestMinors:
    @given(residue_tuples(max_d=24, sizes=(3, 4)), st.data())
    def test_recurrence_matches_closed_form(self, t, data):
        s = data.draw(st.sampled_from(units(t.d).units))
        minors = principal_minors(build_h(t, s))
        assert len(minors.minors) == t.n
        assert len(minors.betas) == t.n - 1
        for j, u in enumerate(minors.minors, start=1):
            assert u == closed_form_minor(t, s, j)

    def test_isotropic_minor(self):
        minors = principal_minors(build_h(ResidueTuple(7, (1, 2, 4))))
        assert minors.isotropic_minor
        assert minors.minors[-1].is_zero()
        assert minors.gram_diagonal[-1] is None

    @given(residue_tuples(max_d=30, sizes=(3,)), st.data())
    def test_determinant_embedding(self, t, data):
        s = data.draw(st.sampled_from(units(t.d).units))
        assume(det_nonzero_n2(t.d, *t.ks))
        det = principal_minors(build_h(t, s)).minors[-1]
        value = embed(det, 1)
        expected = det_float_n2(t.d, *t.ks, s)
        assert abs(value.imag) < 1e-7 * max(1.0, abs(expected))
        assert abs(value.real - expected) < 1e-7 * max(1.0, abs(expected))

    @pytest.mark.parametrize("d, sizes", [(6, (3, 4, 5)), (7, (3, 4, 5)), (12, (3, 4, 5)), (29, (3, 4))])
    def test_identity_mask_all_tuples(self, d, sizes):
        for size in sizes:
            for block in sorted_tuples(d, size):
                ok = minor_identity_mask(d, block)
                assert ok.shape == (block.shape[0],)
                assert ok.all()

    def test_identity_mask_agrees_with_exact_minors(self):
        d = 9
        block = np.array([[1, 2, 2, 4], [1, 1, 3, 7], [2, 4, 4, 5]], dtype=np.int64)
        assert minor_identity_mask(d, block).all()
        for row in block.tolist():
            t = ResidueTuple(d, tuple(row))
            for s in units(d):
                minors = principal_minors(build_h(t, s)).minors
                assert [closed_form_minor(t, s, j) for j in range(1, t.n + 1)] == list(minors)

    def test_identity_mask_short_tuples(self):
        assert minor_identity_mask(5, np.array([[1, 2], [2, 4]])).all()


class TestSigns:
    def test_beta_sign_d6(self):
        t = ResidueTuple(6, (1, 1, 1))
        assert beta_sign(t, 1, 1) == 1
        assert beta_sign(t, 5, 1) == 1

    def test_beta_sign_index(self):
        with pytest.raises(InvalidTupleError):
            beta_sign(ResidueTuple(6, (1, 1, 1)), 1, 2)

    def test_float_beta_at_zero_minor(self):
        assert float_beta(ResidueTuple(4, (1, 3, 1, 1)), 1, 1) == float("inf")

    def test_det_sign(self):
        assert det_sign_n2(6, 1, 1, 1, 1) == -1
        assert det_float_n2(6, 1, 1, 1, 1) == pytest.approx(-2.0)
        assert det_sign_n2(7, 1, 2, 3, 1) == -1
        assert not det_nonzero_n2(7, 1, 2, 4)

    @pytest.mark.parametrize("d", range(2, 19))
    def test_det_sign_exhaustive(self, d):
        for k1 in range(1, d):
            for k2 in range(k1, d):
                for k3 in range(k2, d):
                    if gcd(d, k1, k2, k3) != 1:
                        continue
                    for s in units(d):
                        det_sign_n2(d, k1, k2, k3, s)


class TestAnisotropy:
    @pytest.mark.parametrize("d, ks, expected", [
        (6, (1, 1, 1), True),
        (60, (13, 17, 23), True),
        (7, (1, 2, 4), False),
        (6, (1, 1, 1, 2), True),
        (6, (1, 1, 1, 3), False),
    ])
    def test_known(self, d, ks, expected):
        report = totally_anisotropic(ResidueTuple(d, ks))
        assert report.totally_anisotropic is expected
        assert [e["s"] for e in report.diagnostics] == list(units(d).units)

    def test_with_minors(self):
        report = totally_anisotropic(ResidueTuple(10, (1, 3, 3)), with_minors=True)
        assert all(len(e["minors"]) == 2 for e in report.diagnostics)
        assert report.to_dict()["totally_anisotropic"]

    @given(residue_tuples(max_d=30))
    def test_agrees_with_ss_on_primitive(self, t):
        assume(gcd(t.d, *t.ks) == 1)
        assert totally_anisotropic(t).totally_anisotropic == satisfies_condition(t).holds

    @pytest.mark.parametrize("d", [6, 10, 12, 13])
    def test_mask_matches_exact(self, d):
        for size in (3, 4):
            for block in sorted_tuples(d, size):
                block = block[primitive_mask(d, block)]
                mask = anisotropy_mask(d, block)
                exact = np.array([totally_anisotropic(ResidueTuple(d, row)).totally_anisotropic for row in block.tolist()])
                np.testing.assert_array_equal(mask, exact)
