"""
Arithmétique exacte des résidus modulo d.

Ce module fournit les objets de base manipulés par tout le projet:
- ResidueTuple: le tuple (d; k_1, ..., k_{n+1}) à classifier
- UnitGroup: le groupe (Z/dZ)*
- les orbites sous l'action de (Z/dZ)* et leur représentant canonique

Les parties fractionnaires sont toujours calculées par réduction entière,
jamais en virgule flottante.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import gcd
from typing import Iterable, Iterator

import numpy as np

from src.exceptions import InvalidTupleError

logger = logging.getLogger("schwarz_monodromy.arith")


@dataclass(frozen=True, order=True)
class ResidueTuple:
    """
    Tuple (d; k_1, ..., k_{n+1}) avec 1 <= k_i <= d-1 et n+1 >= 3.

    L'ordre des k_i est conservé tel que fourni; `sorted()` renvoie la forme
    triée utilisée pour les orbites.
    """

    d: int
    ks: tuple

    def __post_init__(self):
        ks = tuple(int(k) for k in self.ks)
        object.__setattr__(self, "ks", ks)
        object.__setattr__(self, "d", int(self.d))
        if self.d < 2:
            raise InvalidTupleError(f"d doit être un entier >= 2 (reçu {self.d!r})")
        if len(ks) < 3:
            raise InvalidTupleError(f"il faut au moins 3 résidus (reçu {len(ks)})")
        for k in ks:
            if not 1 <= k <= self.d - 1:
                raise InvalidTupleError(f"résidu {k} hors de [1, {self.d - 1}] pour d={self.d}")

    @property
    def n(self) -> int:
        return len(self.ks) - 1

    def sorted(self) -> "ResidueTuple":
        return ResidueTuple(self.d, tuple(sorted(self.ks)))

    def scaled(self, t: int) -> "ResidueTuple":
        """Multiplie chaque k_i par t modulo d (t doit être une unité)."""
        return ResidueTuple(self.d, tuple((k * t) % self.d for k in self.ks))

    def multiplied(self, a: int) -> "ResidueTuple":
        """Relève le tuple au dénominateur a*d (d et les k_i multipliés par a)."""
        return ResidueTuple(self.d * a, tuple(k * a for k in self.ks))

    def remainders(self, s: int) -> tuple:
        """Les restes l_i = k_i * s mod d."""
        return tuple((k * s) % self.d for k in self.ks)

    def to_dict(self) -> dict:
        return {"d": self.d, "ks": list(self.ks)}

    @classmethod
    def from_dict(cls, payload: dict) -> "ResidueTuple":
        return cls(int(payload["d"]), tuple(payload["ks"]))

    @classmethod
    def parse(cls, d: int, ks_text: str) -> "ResidueTuple":
        """Construit un tuple depuis une liste "k1,k2,..." de la ligne de commande."""
        try:
            ks = tuple(int(part) for part in ks_text.split(",") if part.strip())
        except ValueError as e:
            raise InvalidTupleError(f"liste de résidus illisible: {ks_text!r}") from e
        return cls(d, ks)

    def __str__(self):
        return f"({self.d};{','.join(str(k) for k in self.ks)})"


@dataclass(frozen=True)
class UnitGroup:
    """Le groupe multiplicatif (Z/dZ)*, résidus triés par ordre croissant."""

    d: int
    units: tuple

    def __iter__(self) -> Iterator[int]:
        return iter(self.units)

    def __len__(self):
        return len(self.units)

    def __contains__(self, s):
        return s in self.units

    def inverse(self, s: int) -> int:
        return pow(s, -1, self.d)


@lru_cache(maxsize=None)
def units(d: int) -> UnitGroup:
    if d < 2:
        raise InvalidTupleError(f"module invalide: {d}")
    return UnitGroup(d, tuple(u for u in range(1, d) if gcd(u, d) == 1))


def check_unit(s: int, d: int) -> int:
    """Vérifie que s est inversible modulo d et renvoie son représentant dans [1, d-1]."""
    if gcd(s, d) != 1:
        raise InvalidTupleError(f"s={s} n'est pas une unité modulo {d}")
    return s % d


def frac_part(k: int, d: int, s: int) -> Fraction:
    """{k s / d} comme fraction réduite dans [0, 1)."""
    if d < 2:
        raise InvalidTupleError(f"module invalide: {d}")
    if k % d == 0:
        raise InvalidTupleError(f"k={k} est nul modulo {d}")
    check_unit(s, d)
    return Fraction((k * s) % d, d)


def fractional(x: Fraction) -> Fraction:
    """Partie fractionnaire {x} = x - [x] d'un rationnel quelconque."""
    return x - (x.numerator // x.denominator)


def integer_part(x: Fraction) -> int:
    """Partie entière [x] (plancher)."""
    return x.numerator // x.denominator


def orbit_multiset(t: ResidueTuple) -> Counter:
    """
    Vecteurs triés (k_1 t, ..., k_{n+1} t) pour chaque unité t, avec multiplicité.

    Le cardinal total vaut toujours phi(d).
    """
    counts = Counter()
    for u in units(t.d):
        counts[t.scaled(u).sorted()] += 1
    return counts


def orbit(t: ResidueTuple) -> frozenset:
    return frozenset(orbit_multiset(t))


def canonical_rep(t: ResidueTuple) -> ResidueTuple:
    """Plus petit tuple trié (ordre lexicographique) de l'orbite."""
    return min(orbit(t), key=lambda r: r.ks)


def fraction_to_str(x: Fraction) -> str:
    """Sérialise une fraction sous la forme "p/q" (toujours avec dénominateur)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def fraction_from_str(text: str) -> Fraction:
    return Fraction(text)


def residue_table(d: int, ks: np.ndarray) -> np.ndarray:
    """
    Restes l = k * s mod d pour un lot de tuples et toutes les unités.

    Args:
        d: module commun du lot
        ks: tableau (N, n+1) d'entiers

    Returns:
        np.ndarray: tableau (N, phi(d), n+1)
    """
    s = np.asarray(units(d).units, dtype=np.int64)
    ks = np.asarray(ks, dtype=np.int64)
    return (ks[:, None, :] * s[None, :, None]) % d


def primitive_mask(d: int, ks: np.ndarray) -> np.ndarray:
    """Masque des tuples du lot dont le pgcd avec d vaut 1."""
    ks = np.asarray(ks, dtype=np.int64)
    g = np.gcd.reduce(ks, axis=1)
    return np.gcd(g, d) == 1


def sorted_tuples(d: int, size: int, chunk: int = 50000) -> Iterable[np.ndarray]:
    """
    Parcourt tous les tuples triés k_1 <= ... <= k_size de [1, d-1] par blocs.

    Le premier résidu fixe chaque bloc; les blocs trop gros sont redécoupés.
    """
    for k1 in range(1, d):
        if size == 1:
            yield np.array([[k1]], dtype=np.int64)
            continue
        rest = np.array(
            list(combinations_with_replacement(range(k1, d), size - 1)), dtype=np.int64
        )
        if rest.size == 0:
            continue
        block = np.hstack([np.full((rest.shape[0], 1), k1, dtype=np.int64), rest])
        for start in range(0, block.shape[0], chunk):
            yield block[start:start + chunk]
