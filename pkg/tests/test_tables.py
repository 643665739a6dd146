"""Tests des tables de référence et de leur mise en forme."""

import json
from collections import Counter
from fractions import Fraction

import pytest

from src.classify.reference_tables import TABLE1, TABLE2, TABLE4, TableDiff, diff_table, table_members
from src.classify.table_emitter import (
    frame_to_markdown,
    render,
    table1_frame,
    table2_frame,
    table3_frame,
    table4_frame,
)


class TestReferenceTables:
    def test_table1_shape(self):
        assert len(TABLE1) == 14
        assert TABLE1[0]["d"] == 12
        assert TABLE1[0]["k3/d"] == Fraction(5, 12)

    def test_table_members(self):
        merged = table_members(TABLE2[12])
        assert merged[(1, 3, 5)] == 2
        assert merged[(1, 2, 2)] == 1
        assert sum(merged.values()) == 16

    def test_diff_table(self):
        diff = diff_table({6: [(1, 1, 2, 1)], 10: []}, {6: [(1, 1, 2, 1), (1, 1, 2, 3)]})
        assert diff.missing == {6: [(1, 1, 2, 3)], 10: []}
        assert diff.extra == {6: [], 10: []}
        assert not diff.empty
        assert diff.to_dict() == {"missing": {"6": [[1, 1, 2, 3]]}, "extra": {}}

    def test_empty_diff(self):
        assert TableDiff({6: []}, {}).empty
        assert diff_table(TABLE4, TABLE4).empty


class TestFrames:
    def test_table1_frame_order(self, triples):
        frame = table1_frame(triples.schwarz_classes)
        assert len(frame) == 14
        first = frame.iloc[0].to_dict()
        assert first["d"] == 12
        assert first["mu1"] == "2/3"
        assert first["k3/d"] == "5/12"
        assert list(frame["d"]) == [row["d"] for row in TABLE1]

    def test_table2_frame(self, triples):
        frame = table2_frame(triples)
        assert len(frame) == 16
        d60 = frame[frame["d"] == 60].iloc[0]
        assert d60["orbit"] == "(60;1,11,19)"
        assert d60["orbit_size"] == 16

    def test_table3_frame_marks_empty_denominator(self, quads):
        frame = table3_frame(quads)
        last = frame.iloc[-1].to_dict()
        assert last["d"] == 120
        assert last["members"] == "aucun"

    def test_table4_frame(self, quads):
        frame = table4_frame(quads)
        assert len(frame) == 18
        winners = frame[frame["winner"]]
        assert winners[["d", "ks"]].values.tolist() == [[6, "(1,1,2,1)"]]

    def test_multiplicity_in_members(self, triples):
        frame = table2_frame(triples)
        d12 = frame[frame["d"] == 12]["members"].tolist()
        assert "(1,3,5)x2 (7,9,11)x2" in d12


class TestRender:
    @pytest.fixture
    def frame(self, triples):
        return table1_frame(triples.schwarz_classes)

    def test_markdown(self, frame):
        text = render(frame, "md", title="Table 1")
        lines = text.splitlines()
        assert lines[0] == "## Table 1"
        assert lines[2].startswith("| d | mu1 | mu2 | mu3 |")
        assert lines[3] == "|" + "|".join("---" for _ in frame.columns) + "|"
        assert len(lines) == 4 + 14
        assert frame_to_markdown(frame).endswith("\n")

    def test_csv(self, frame):
        text = render(frame, "csv")
        assert text.startswith("d,mu1,mu2,mu3,k1/d,k2/d,k3/d,lambda,mu,nu\r\n")
        assert text.count("\r\n") == 15

    def test_json(self, frame):
        records = json.loads(render(frame, "json"))
        assert len(records) == 14
        assert records[0]["d"] == 12
        assert records[0]["lambda"] == "1/2"

    def test_unknown_format(self, frame):
        with pytest.raises(ValueError):
            render(frame, "xml")
