"""
Mise en forme des tables de classification (Markdown, CSV, JSON) via pandas.

Les fractions sont toujours écrites "p/q"; l'ordre des lignes est déterministe.
"""

import json
from fractions import Fraction
from typing import Dict, Iterable, List

import pandas as pd

from src.arith.residues import fraction_to_str
from src.classify.reference_tables import TABLE1, TABLE1_COLUMNS
from src.classify.schwarz_classifier import EquivClass, QuadrupleEnumeration, SchwarzClass, TripleEnumeration

FORMATS = ("md", "csv", "json")


def _cell(value) -> str:
    if isinstance(value, Fraction):
        return fraction_to_str(value)
    return str(value)


def _members_text(cls: EquivClass) -> str:
    parts = []
    for member, mult in cls.members:
        text = "(" + ",".join(str(k) for k in member.ks) + ")"
        parts.append(text if mult == 1 else f"{text}x{mult}")
    return " ".join(parts)


def _reference_position(row: dict) -> int:
    key = tuple(row[c] for c in TABLE1_COLUMNS)
    for i, ref in enumerate(TABLE1):
        if tuple(ref[c] for c in TABLE1_COLUMNS) == key:
            return i
    return len(TABLE1)


def table1_frame(rows: Iterable[SchwarzClass]) -> pd.DataFrame:
    """Liste de Schwarz non diédrale, dans l'ordre de la table publiée (lignes inconnues en fin)."""
    records = [r.table_row() for r in rows]
    records.sort(key=lambda r: (_reference_position(r), r["d"], r["k1/d"], r["k2/d"], r["k3/d"]))
    frame = pd.DataFrame.from_records(records, columns=list(TABLE1_COLUMNS))
    for column in TABLE1_COLUMNS[1:]:
        frame[column] = frame[column].map(_cell)
    return frame


def orbit_frame(classes: Dict[int, List[EquivClass]]) -> pd.DataFrame:
    records = []
    for d, items in sorted(classes.items()):
        if not items:
            records.append({"d": d, "orbit": "", "orbit_size": 0, "members": "aucun"})
        for cls in items:
            records.append({
                "d": d,
                "orbit": str(cls.canonical),
                "orbit_size": cls.orbit_size,
                "members": _members_text(cls),
            })
    return pd.DataFrame.from_records(records, columns=["d", "orbit", "orbit_size", "members"])


def table2_frame(triples: TripleEnumeration) -> pd.DataFrame:
    return orbit_frame(triples.orbits_by_d())


def table3_frame(quads: QuadrupleEnumeration) -> pd.DataFrame:
    return orbit_frame(quads.candidates_nondihedral)


def table4_frame(quads: QuadrupleEnumeration) -> pd.DataFrame:
    records = [
        {"d": d, "ks": "(" + ",".join(str(k) for k in t.ks) + ")", "winner": t in quads.winners_dihedral}
        for d, items in sorted(quads.candidates_dihedral_shape.items())
        for t in items
    ]
    return pd.DataFrame.from_records(records, columns=["d", "ks", "winner"])


def frame_to_markdown(frame: pd.DataFrame) -> str:
    header = "| " + " | ".join(str(c) for c in frame.columns) + " |"
    rule = "|" + "|".join("---" for _ in frame.columns) + "|"
    body = ["| " + " | ".join(_cell(v) for v in row) + " |" for row in frame.itertuples(index=False)]
    return "\n".join([header, rule, *body]) + "\n"


def render(frame: pd.DataFrame, fmt: str, title: str = "") -> str:
    """
    Raises:
        ValueError: format inconnu
    """
    if fmt == "md":
        text = frame_to_markdown(frame)
        return f"## {title}\n\n{text}" if title else text
    if fmt == "csv":
        return frame.to_csv(index=False, lineterminator="\r\n")
    if fmt == "json":
        return json.dumps(json.loads(frame.to_json(orient="records")), ensure_ascii=False, indent=2) + "\n"
    raise ValueError(f"format inconnu: {fmt!r} (attendu: {', '.join(FORMATS)})")
