"""
Tables de référence publiées (liste de Schwarz non diédrale, triplets,
4-uplets candidats), saisies telles qu'imprimées.

Les coquilles connues de la table des 4-uplets de forme diédrale+finie sont
conservées volontairement: les écarts avec l'énumération sont signalés par
`diff_table`, jamais corrigés ici.
"""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List

# (d, mu1, mu2, mu3, k1/d, k2/d, k3/d, lambda, mu, nu)
_TABLE1_TEXT = """
12 2/3 2/3 1/2 1/4 1/4 5/12 1/2 1/3 1/3
6 2/3 2/3 1/3 1/6 1/6 1/2 2/3 1/3 1/3
30 2/3 2/3 3/5 3/10 3/10 11/30 2/5 1/3 1/3
60 2/3 3/5 1/2 13/60 17/60 23/60 1/2 2/5 1/3
30 2/3 3/5 2/5 1/6 7/30 13/30 3/5 2/5 1/3
24 3/4 2/3 1/2 5/24 7/24 11/24 1/2 1/3 1/4
12 3/4 3/4 1/3 1/6 1/6 7/12 2/3 1/4 1/4
10 3/5 3/5 3/5 3/10 3/10 3/10 2/5 2/5 2/5
60 4/5 2/3 1/2 11/60 19/60 29/60 1/2 1/3 1/5
30 4/5 2/3 1/3 1/10 7/30 17/30 2/3 1/3 1/5
15 4/5 2/3 2/5 2/15 4/15 8/15 3/5 1/3 1/5
20 4/5 3/5 1/2 3/20 7/20 9/20 1/2 2/5 1/5
30 4/5 4/5 1/3 1/6 1/6 19/30 2/3 1/5 1/5
10 4/5 4/5 1/5 1/10 1/10 7/10 4/5 1/5 1/5
"""

TABLE1_COLUMNS = ("d", "mu1", "mu2", "mu3", "k1/d", "k2/d", "k3/d", "lambda", "mu", "nu")


def _parse_table1() -> List[dict]:
    rows = []
    for line in _TABLE1_TEXT.strip().splitlines():
        parts = line.split()
        row = {"d": int(parts[0])}
        for name, text in zip(TABLE1_COLUMNS[1:], parts[1:]):
            row[name] = Fraction(text)
        rows.append(row)
    return rows


TABLE1 = _parse_table1()


def _line(*members, multiplicity=1) -> Counter:
    return Counter({tuple(m): multiplicity for m in members})


TABLE2: Dict[int, List[Counter]] = {
    6: [
        _line((1, 1, 1), (5, 5, 5)),
        _line((1, 1, 3), (3, 5, 5)),
    ],
    10: [
        _line((1, 1, 1), (3, 3, 3), (7, 7, 7), (9, 9, 9)),
        _line((1, 3, 3), (3, 9, 9), (1, 1, 7), (7, 7, 9)),
    ],
    12: [
        _line((1, 3, 5), (7, 9, 11), multiplicity=2),
        _line((1, 2, 7), (5, 10, 11), multiplicity=2),
        _line((1, 2, 2), (5, 10, 10), (2, 2, 7), (10, 10, 11)),
        _line((1, 3, 3), (3, 3, 5), (7, 9, 9), (9, 9, 11)),
    ],
    15: [
        _line((1, 2, 4), (2, 4, 8), (1, 4, 8), (7, 13, 14), (1, 2, 8), (7, 11, 14), (7, 11, 13), (11, 13, 14)),
    ],
    20: [
        _line((1, 3, 7), (1, 3, 9), (1, 7, 9), (3, 7, 9), (11, 13, 17), (11, 13, 19), (11, 17, 19), (13, 17, 19)),
    ],
    24: [
        _line((1, 5, 7), (1, 5, 11), (1, 7, 11), (5, 7, 11), (13, 17, 19), (13, 17, 23), (13, 19, 23), (17, 19, 23)),
    ],
    30: [
        _line((1, 5, 5), (5, 5, 7), (11, 25, 25), (5, 5, 13), (17, 25, 25), (5, 5, 19), (23, 25, 25), (25, 25, 29)),
        _line((3, 7, 17), (19, 21, 29), (1, 9, 11), (13, 23, 27), multiplicity=2),
        _line((1, 9, 9), (3, 3, 7), (9, 9, 11), (13, 27, 27), (3, 3, 17), (19, 21, 21), (23, 27, 27), (21, 21, 29)),
        _line((5, 7, 13), (1, 5, 19), (17, 23, 25), (11, 25, 29), multiplicity=2),
    ],
    # imprimée sur deux lignes qui forment une seule orbite
    60: [
        _line((1, 11, 19), (7, 13, 17), (1, 11, 29), (7, 13, 23), (7, 17, 23), (1, 19, 29), (13, 17, 23), (11, 19, 29)),
        _line((31, 41, 49), (37, 43, 47), (31, 41, 59), (37, 43, 53), (37, 47, 53), (31, 49, 59), (43, 47, 53), (41, 49, 59)),
    ],
}

TABLE3: Dict[int, List[Counter]] = {
    6: [
        _line((1, 1, 1, 1), (5, 5, 5, 5)),
        _line((1, 1, 1, 3), (3, 5, 5, 5)),
    ],
    10: [
        _line((1, 1, 1, 1), (3, 3, 3, 3), (7, 7, 7, 7), (9, 9, 9, 9)),
        _line((1, 3, 3, 3), (3, 9, 9, 9), (1, 1, 1, 7), (7, 7, 7, 9)),
    ],
    12: [
        _line((1, 2, 2, 7), (5, 10, 10, 11), multiplicity=2),
        _line((1, 3, 3, 5), (7, 9, 9, 11), multiplicity=2),
        _line((1, 2, 2, 2), (5, 10, 10, 10), (2, 2, 2, 7), (10, 10, 10, 11)),
    ],
    15: [_line((1, 2, 4, 8), (7, 11, 13, 14), multiplicity=4)],
    20: [_line((1, 3, 7, 9), (11, 13, 17, 19), multiplicity=4)],
    24: [_line((1, 5, 7, 11), (13, 17, 19, 23), multiplicity=4)],
    30: [
        _line((1, 5, 5, 5), (5, 5, 5, 7), (11, 25, 25, 25), (5, 5, 5, 13), (17, 25, 25, 25), (5, 5, 5, 19), (23, 25, 25, 25), (25, 25, 25, 29)),
        _line((1, 9, 9, 11), (3, 3, 7, 17), (19, 21, 21, 29), (13, 23, 27, 27), multiplicity=2),
        _line((1, 9, 9, 9), (3, 3, 3, 7), (9, 9, 9, 11), (13, 27, 27, 27), (3, 3, 3, 17), (19, 21, 21, 21), (23, 27, 27, 27), (21, 21, 21, 29)),
        _line((1, 5, 5, 19), (5, 5, 7, 13), (11, 25, 25, 29), (17, 23, 25, 25), multiplicity=2),
    ],
    60: [_line((1, 11, 19, 29), (7, 13, 17, 23), (31, 41, 49, 59), (37, 43, 47, 53), multiplicity=4)],
    120: [],
}

# ordre imprimé (ap, ap, a(m-p), m4), coquilles comprises
TABLE4: Dict[int, List[tuple]] = {
    6: [(1, 1, 2, 1), (1, 1, 2, 3)],
    10: [(1, 1, 4, 1), (1, 1, 4, 7), (3, 3, 2, 1), (3, 3, 2, 3)],
    12: [(2, 2, 4, 1), (2, 2, 4, 7), (3, 3, 3, 1), (3, 3, 3, 5)],
    30: [
        (3, 3, 17, 7), (3, 3, 12, 17), (9, 29, 6, 1), (9, 9, 6, 11),
        (5, 5, 10, 1), (5, 5, 10, 7), (5, 5, 10, 13), (5, 5, 10, 19),
    ],
}


def table_members(lines: Iterable[Counter]) -> Counter:
    """Fusionne les lignes d'une entrée de table en un seul multiensemble."""
    total = Counter()
    for line in lines:
        total.update(line)
    return total


@dataclass(frozen=True)
class TableDiff:
    """Écart entre une table calculée et la table imprimée, par valeur de d."""

    missing: Dict[int, List[tuple]]
    extra: Dict[int, List[tuple]]

    @property
    def empty(self) -> bool:
        return not any(self.missing.values()) and not any(self.extra.values())

    def to_dict(self) -> dict:
        return {
            "missing": {str(d): [list(t) for t in v] for d, v in sorted(self.missing.items()) if v},
            "extra": {str(d): [list(t) for t in v] for d, v in sorted(self.extra.items()) if v},
        }


def diff_table(computed: Dict[int, Iterable[tuple]], printed: Dict[int, Iterable[tuple]]) -> TableDiff:
    """
    Compare deux tables indexées par d.

    missing: entrées imprimées absentes du calcul; extra: entrées calculées non imprimées.
    """
    missing, extra = {}, {}
    for d in sorted(set(computed) | set(printed)):
        got = [tuple(t) for t in computed.get(d, [])]
        want = [tuple(t) for t in printed.get(d, [])]
        missing[d] = [t for t in want if t not in got]
        extra[d] = [t for t in got if t not in want]
    return TableDiff(missing, extra)
