"""
Classification des tuples (d; k_1, ..., k_{n+1}) à monodromie finie.

Étapes:
1. n = 2: balayage de tous les triplets primitifs d <= d_max vérifiant (S),
   séparation de la famille diédrale, regroupement en orbites et en classes
   de la liste de Schwarz
2. n = 3: deux branches de recherche des 4-uplets candidats à partir des
   triplets (non diédrale et diédrale+finie), puis filtrage par (SS)
3. n >= 4: extension des gagnants du niveau précédent par une composante
"""

import logging
import sys
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from math import floor, gcd
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
from sympy import divisors
from tqdm import tqdm

from src.arith.residues import (
    ResidueTuple,
    canonical_rep,
    orbit_multiset,
    primitive_mask,
    sorted_tuples,
    units,
)
from src.conditions.fractional_conditions import (
    LmnTriple,
    condition_mask,
    lambda_mu_nu,
    satisfies_condition,
)
from src.exceptions import InconsistentVerdictError, InvalidTupleError
from src.groups.monodromy_group import PairSumFractions, pgl2_orders

logger = logging.getLogger("schwarz_monodromy.classify")

DEFAULT_DMAX = 120
QUADRUPLE_MODULUS = 120


@dataclass(frozen=True)
class EquivClass:
    """Orbite d'un tuple sous (Z/dZ)*: représentant canonique et membres triés avec multiplicité."""

    canonical: ResidueTuple
    members: tuple

    @property
    def d(self) -> int:
        return self.canonical.d

    @property
    def orbit_size(self) -> int:
        return sum(mult for _, mult in self.members)

    def member_counter(self) -> Counter:
        return Counter({m.ks: mult for m, mult in self.members})

    def to_dict(self) -> dict:
        return {
            "canonical": self.canonical.to_dict(),
            "orbit_size": self.orbit_size,
            "members": [{"ks": list(m.ks), "multiplicity": mult} for m, mult in self.members],
        }


def equiv_class(t: ResidueTuple) -> EquivClass:
    counts = orbit_multiset(t)
    members = tuple(sorted(counts.items(), key=lambda item: item[0].ks))
    return EquivClass(canonical_rep(t), members)


@dataclass(frozen=True)
class DihedralWitness:
    """Le tuple primitif de base, multiplié par `scaling_unit` et permuté, prend la forme (2m; p, p, m-p)."""

    m: int
    p: int
    scaling_unit: int
    permutation: tuple
    scale: int = 1

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "p": self.p,
            "scaling_unit": self.scaling_unit,
            "permutation": list(self.permutation),
            "scale": self.scale,
        }


@dataclass(frozen=True)
class SubtupleFactorization:
    """Sous-tuple = scale x base, avec base primitive de dénominateur d / scale."""

    subtuple: ResidueTuple
    scale: int
    base: ResidueTuple

    def to_dict(self) -> dict:
        return {"subtuple": self.subtuple.to_dict(), "scale": self.scale, "base": self.base.to_dict()}


@dataclass(frozen=True)
class SchwarzClass:
    """Ligne de la liste de Schwarz: forme normale de (lambda, mu, nu) et triplets qui y mènent."""

    normal_form: LmnTriple
    representative: ResidueTuple
    lmn: LmnTriple
    pair_sums: PairSumFractions
    members: tuple
    orbits: tuple

    @property
    def d(self) -> int:
        return self.representative.d

    def table_row(self) -> dict:
        d = self.d
        k1, k2, k3 = self.representative.ks
        return {
            "d": d,
            "mu1": self.pair_sums.mu1,
            "mu2": self.pair_sums.mu2,
            "mu3": self.pair_sums.mu3,
            "k1/d": Fraction(k1, d),
            "k2/d": Fraction(k2, d),
            "k3/d": Fraction(k3, d),
            "lambda": self.lmn.lambda_,
            "mu": self.lmn.mu,
            "nu": self.lmn.nu,
        }

    def to_dict(self) -> dict:
        return {
            "normal_form": self.normal_form.to_dict(),
            "representative": self.representative.to_dict(),
            "lambda_mu_nu": self.lmn.to_dict(),
            "pair_sums": self.pair_sums.to_dict(),
            "members": [list(m.ks) for m in self.members],
            "orbits": [o.to_dict() for o in self.orbits],
        }


@dataclass(frozen=True)
class DihedralFamily:
    """Famille infinie (2m; p, p, m-p), 1 <= p < m, pgcd(p, m) = 1, m >= 2."""

    orbit_counts: tuple = ()

    shape = "(2m; p, p, m-p)"
    lambda_mu_nu = "((m-p)/m, 1/2, 1/2)"

    def to_dict(self) -> dict:
        return {
            "shape": self.shape,
            "lambda_mu_nu": self.lambda_mu_nu,
            "constraints": "m >= 2, 1 <= p < m, gcd(p, m) = 1",
            "orbit_counts": {str(d): c for d, c in self.orbit_counts},
        }


@dataclass(frozen=True)
class TripleEnumeration:
    d_max: int
    classes: tuple
    dihedral_classes: tuple
    schwarz_classes: tuple

    def orbits_by_d(self) -> Dict[int, List[EquivClass]]:
        grouped = defaultdict(list)
        for cls in self.classes:
            grouped[cls.d].append(cls)
        return dict(sorted(grouped.items()))

    def dihedral_family(self) -> DihedralFamily:
        counts = Counter(cls.d for cls in self.dihedral_classes)
        return DihedralFamily(tuple(sorted(counts.items())))


@dataclass(frozen=True)
class QuadrupleEnumeration:
    """Candidats des deux branches et gagnants (ceux qui vérifient (SS))."""

    candidates_nondihedral: Dict[int, List[EquivClass]]
    candidates_dihedral_shape: Dict[int, List[ResidueTuple]]
    winners_nondihedral: tuple
    winners_dihedral: tuple

    @property
    def winners(self) -> tuple:
        return self.winners_nondihedral + self.winners_dihedral

    def to_dict(self) -> dict:
        return {
            "candidates_nondihedral": {str(d): [c.to_dict() for c in v] for d, v in self.candidates_nondihedral.items()},
            "candidates_dihedral_shape": {str(d): [list(t.ks) for t in v] for d, v in self.candidates_dihedral_shape.items()},
            "winners_nondihedral": [t.to_dict() for t in self.winners_nondihedral],
            "winners_dihedral": [t.to_dict() for t in self.winners_dihedral],
        }


@dataclass(frozen=True)
class Classification:
    n: int
    classes: tuple
    dihedral: Optional[DihedralFamily] = None
    schwarz_classes: tuple = field(default=())

    def to_dict(self) -> dict:
        payload = {
            "n": self.n,
            "classes": [c.to_dict() for c in self.classes],
        }
        if self.dihedral is not None:
            payload["dihedral"] = self.dihedral.to_dict()
        if self.schwarz_classes:
            payload["schwarz_classes"] = [c.to_dict() for c in self.schwarz_classes]
        return payload


# --- primitivité, sous-tuples, famille diédrale ---

def is_primitive(t: ResidueTuple) -> bool:
    return gcd(t.d, *t.ks) == 1


def factor_primitive(t: ResidueTuple) -> SubtupleFactorization:
    a = gcd(t.d, *t.ks)
    base = ResidueTuple(t.d // a, tuple(k // a for k in t.ks))
    return SubtupleFactorization(t, a, base)


def subtuples(t: ResidueTuple, size: int) -> List[ResidueTuple]:
    """Sous-multiensembles de taille `size`, un par choix d'indices, triés."""
    if not 3 <= size <= len(t.ks):
        raise InvalidTupleError(f"taille de sous-tuple {size} hors de [3, {len(t.ks)}]")
    return [
        ResidueTuple(t.d, tuple(sorted(t.ks[i] for i in idx)))
        for idx in combinations(range(len(t.ks)), size)
    ]


def pair_sum_dihedral(d: int, k1: int, k2: int, k3: int) -> tuple:
    """Paires (i, j) avec k_i + k_j = d/2 modulo d; diédral s'il y en a au moins deux."""
    if d % 2:
        return ()
    ks = (k1, k2, k3)
    return tuple(
        (i + 1, j + 1)
        for i, j in ((0, 1), (1, 2), (0, 2))
        if (ks[i] + ks[j]) % d == d // 2
    )


def shape_witness(d: int, k1: int, k2: int, k3: int) -> Optional[DihedralWitness]:
    """Recherche directe de la forme (2m; p, p, m-p) sur la base primitive."""
    factored = factor_primitive(ResidueTuple(d, (k1, k2, k3)))
    base = factored.base
    if base.d % 2:
        return None
    m = base.d // 2
    for u in units(base.d):
        scaled = base.remainders(u)
        for perm in permutations(range(3)):
            a, b, c = (scaled[i] for i in perm)
            if a == b and 1 <= a < m and c == m - a and gcd(a, m) == 1:
                return DihedralWitness(m, a, u, perm, factored.scale)
    return None


def is_dihedral_class(d: int, k1: int, k2: int, k3: int) -> Optional[DihedralWitness]:
    """
    Appartenance à la famille diédrale, par les deux tests indépendants.

    Raises:
        InconsistentVerdictError: si le test des sommes de paires et la recherche
            de forme ne concordent pas
    """
    witness = shape_witness(d, k1, k2, k3)
    pairs = pair_sum_dihedral(d, k1, k2, k3)
    if (witness is not None) != (len(pairs) >= 2):
        raise InconsistentVerdictError(
            f"tests diédraux discordants pour ({d};{k1},{k2},{k3}): forme={witness}, paires={pairs}"
        )
    return witness


# --- forme normale de Schwarz ---

def schwarz_normal_form(lmn: LmnTriple) -> LmnTriple:
    """
    Représentant de (lambda, mu, nu) modulo changements de signe et translations
    entières de somme paire: chaque composante est ramenée dans [0, 1] et l'on
    garde le plus petit triplet trié admissible.
    """
    options = []
    for x in lmn.as_tuple():
        fl = floor(x)
        f = x - fl
        # {x} avec décalage -fl, ou 1 - {x} (signe changé) avec décalage 1 + fl
        options.append(((f, -fl), (1 - f, 1 + fl)))
    best = None
    for combo in product(*options):
        if sum(shift for _, shift in combo) % 2:
            continue
        key = tuple(sorted(value for value, _ in combo))
        if best is None or key < best:
            best = key
    return LmnTriple(*best)


def _schwarz_representative(members: Iterable[ResidueTuple]) -> ResidueTuple:
    """Membre de somme < d, de somme maximale; égalités départagées lexicographiquement."""
    below = [m for m in members if sum(m.ks) < m.d]
    pool = below or list(members)
    return min(pool, key=lambda m: (-sum(m.ks), m.ks))


# --- énumération des triplets ---

def _scan_modulus(d: int) -> List[tuple]:
    found = []
    for block in sorted_tuples(d, 3):
        mask = condition_mask(d, block) & primitive_mask(d, block)
        found.extend(tuple(int(k) for k in row) for row in block[mask])
    return found


def _scan_all(moduli: List[int], workers: int, progress: bool, desc: str, scan=_scan_modulus) -> Dict[int, List[tuple]]:
    results = {}
    bar = tqdm(total=len(moduli), desc=desc, unit="d", file=sys.stderr, disable=not progress)
    try:
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for d, found in zip(moduli, pool.map(scan, moduli, chunksize=4)):
                    results[d] = found
                    bar.update(1)
        else:
            for d in moduli:
                results[d] = scan(d)
                bar.update(1)
    finally:
        bar.close()
    return results


def _group_orbits(d: int, passing: Iterable[tuple]) -> List[EquivClass]:
    remaining = set(passing)
    classes = []
    for ks in sorted(remaining):
        if ks not in remaining:
            continue
        cls = equiv_class(ResidueTuple(d, ks))
        for member, _ in cls.members:
            if member.ks not in remaining:
                logger.warning(f"{member} de l'orbite de {cls.canonical} absent du balayage")
            remaining.discard(member.ks)
        classes.append(cls)
    return classes


def schwarz_classes(orbits: Iterable[EquivClass]) -> List[SchwarzClass]:
    """Regroupe les membres des orbites non diédrales par forme normale de Schwarz."""
    by_form: Dict[tuple, List[Tuple[ResidueTuple, EquivClass]]] = defaultdict(list)
    for cls in orbits:
        for member, _ in cls.members:
            form = schwarz_normal_form(lambda_mu_nu(member.d, *member.ks))
            by_form[form.as_tuple()].append((member, cls))

    rows = []
    for form, entries in by_form.items():
        members = sorted({m for m, _ in entries}, key=lambda m: (m.d, m.ks))
        seen, involved = set(), []
        for _, cls in entries:
            if cls.canonical not in seen:
                seen.add(cls.canonical)
                involved.append(cls)
        rep = _schwarz_representative(members)
        rows.append(SchwarzClass(
            normal_form=LmnTriple(*form),
            representative=rep,
            lmn=lambda_mu_nu(rep.d, *rep.ks),
            pair_sums=pgl2_orders(rep.d, *rep.ks),
            members=tuple(members),
            orbits=tuple(involved),
        ))
    # ordre de la liste de Schwarz: mu1, mu2, mu3 croissants puis d
    rows.sort(key=lambda r: (r.pair_sums.mu1, r.pair_sums.mu2, r.pair_sums.mu3, r.d))
    return rows


def enumerate_triples(d_max: int = DEFAULT_DMAX, workers: int = 1, progress: bool = False) -> TripleEnumeration:
    """
    Tous les triplets primitifs (d; k1, k2, k3), d <= d_max, vérifiant (S).

    Raises:
        InvalidTupleError: si d_max < 2
    """
    if d_max < 2:
        raise InvalidTupleError(f"d_max doit être >= 2 (reçu {d_max})")
    moduli = list(range(2, d_max + 1))
    scanned = _scan_all(moduli, workers, progress, "triplets")

    orbits, dihedral = [], []
    for d in moduli:
        for cls in _group_orbits(d, scanned[d]):
            if is_dihedral_class(d, *cls.canonical.ks) is not None:
                dihedral.append(cls)
            else:
                orbits.append(cls)
    rows = schwarz_classes(orbits)
    logger.info(
        f"triplets d <= {d_max}: {len(orbits)} orbites non diédrales, "
        f"{len(rows)} classes de Schwarz, {len(dihedral)} orbites diédrales"
    )
    return TripleEnumeration(d_max, tuple(orbits), tuple(dihedral), tuple(rows))


# --- 4-uplets ---

def _scaled_members(d: int, table: Dict[int, List[EquivClass]]) -> set:
    """Membres des orbites de dénominateur d1 | d, relevés au dénominateur d."""
    out = set()
    for d1, classes in table.items():
        if d % d1:
            continue
        a = d // d1
        for cls in classes:
            for member, _ in cls.members:
                out.add(tuple(a * k for k in member.ks))
    return out


def _nondihedral_candidates(d: int, table: Dict[int, List[EquivClass]]) -> List[EquivClass]:
    allowed = _scaled_members(d, table)
    if not allowed:
        return []
    found = set()
    for triple in allowed:
        for k4 in range(1, d):
            quad = tuple(sorted(triple + (k4,)))
            if quad in found or gcd(d, *quad) != 1:
                continue
            if all(sub in allowed for sub in combinations(quad, 3)):
                found.add(quad)
    return _group_orbits(d, found)


def _dihedral_shape_candidates(table: Dict[int, List[EquivClass]]) -> Dict[int, List[ResidueTuple]]:
    out: Dict[int, List[ResidueTuple]] = {}
    for d2, classes in sorted(table.items()):
        found: List[ResidueTuple] = []
        members = sorted({m.ks for cls in classes for m, _ in cls.members})
        for ks in members:
            counts = Counter(ks)
            repeated = [k for k, c in counts.items() if c >= 2]
            if not repeated:
                continue
            value = repeated[0]
            rest = list(ks)
            rest.remove(value)
            rest.remove(value)
            m4 = rest[0]
            for m in range(2, d2 // 2 + 1):
                if d2 % (2 * m):
                    continue
                a = d2 // (2 * m)
                if value % a:
                    continue
                p = value // a
                if 1 <= p < m and gcd(p, m) == 1:
                    quad = ResidueTuple(d2, (a * p, a * p, a * (m - p), m4))
                    if quad not in found:
                        found.append(quad)
        if found:
            out[d2] = found
    return out


def enumerate_quadruples(triples: TripleEnumeration, modulus: int = QUADRUPLE_MODULUS) -> QuadrupleEnumeration:
    """
    Branche non diédrale: pour d | modulus, tout 4-uplet primitif dont les quatre
    sous-triplets sont des multiples de triplets non diédraux.
    Branche diédrale+finie: (2ma; ap, ap, a(m-p), m4) construit sur les triplets
    non diédraux (d; m1, m1, m4).
    """
    table = triples.orbits_by_d()
    nondihedral: Dict[int, List[EquivClass]] = {}
    for d in divisors(modulus):
        if d < 2:
            continue
        classes = _nondihedral_candidates(d, table)
        if classes or d == modulus:
            nondihedral[d] = classes
    shaped = _dihedral_shape_candidates(table)

    nd_winners = tuple(
        member
        for classes in nondihedral.values()
        for cls in classes
        for member, _ in cls.members
        if satisfies_condition(member).holds
    )
    dh_winners = tuple(
        quad for quads in shaped.values() for quad in quads if satisfies_condition(quad).holds
    )
    logger.info(
        f"4-uplets: {sum(len(v) for v in nondihedral.values())} orbites candidates (branche non diédrale), "
        f"{sum(len(v) for v in shaped.values())} candidats (branche diédrale), "
        f"{len(nd_winners) + len(dh_winners)} gagnants"
    )
    return QuadrupleEnumeration(nondihedral, shaped, nd_winners, dh_winners)


def _classes_of(tuples: Iterable[ResidueTuple]) -> List[EquivClass]:
    classes, seen = [], set()
    for t in sorted(tuples, key=lambda r: (r.d, r.ks)):
        canonical = canonical_rep(t)
        if canonical in seen:
            continue
        seen.add(canonical)
        classes.append(equiv_class(canonical))
    return classes


def extend_winners(classes: Iterable[EquivClass]) -> List[EquivClass]:
    """
    Classes primitives de longueur +1 vérifiant (SS) obtenues en ajoutant une
    composante aux membres des classes données (même dénominateur).
    """
    found = set()
    for cls in classes:
        d = cls.d
        candidates = []
        for member, _ in cls.members:
            for k in range(1, d):
                candidates.append(tuple(sorted(member.ks + (k,))))
        if not candidates:
            continue
        block = np.array(sorted(set(candidates)), dtype=np.int64)
        mask = condition_mask(d, block) & primitive_mask(d, block)
        found.update(ResidueTuple(d, tuple(int(k) for k in row)) for row in block[mask])
    return _classes_of(found)


def classify_n(
    n: int,
    d_max: int = DEFAULT_DMAX,
    workers: int = 1,
    progress: bool = False,
    triples: Optional[TripleEnumeration] = None,
) -> Classification:
    """
    Classes de tuples primitifs de longueur n+1 vérifiant (SS).

    n = 2: orbites non diédrales (avec la liste de Schwarz) plus la famille diédrale.
    n = 3: gagnants des deux branches de 4-uplets.
    n >= 4: extension successive des gagnants.

    `triples` permet de réutiliser une énumération déjà faite.
    """
    if n < 2:
        raise InvalidTupleError(f"n doit être >= 2 (reçu {n})")
    if triples is None:
        triples = enumerate_triples(d_max, workers, progress)
    if n == 2:
        return Classification(2, triples.classes, triples.dihedral_family(), triples.schwarz_classes)

    quads = enumerate_quadruples(triples)
    classes = _classes_of(quads.winners)
    level = 3
    while level < n:
        classes = extend_winners(classes)
        level += 1
        logger.info(f"n = {level}: {len(classes)} classe(s)")
        if not classes:
            break
    return Classification(n, tuple(classes))


def _scan_level(args: Tuple[int, int]) -> List[tuple]:
    d, size = args
    found = []
    for block in sorted_tuples(d, size):
        mask = condition_mask(d, block) & primitive_mask(d, block)
        found.extend(tuple(int(k) for k in row) for row in block[mask])
    return found


def exhaustive_classes(n: int, d_max: int, workers: int = 1, progress: bool = False) -> List[EquivClass]:
    """Balayage direct de tous les tuples triés (contrôle, coûteux)."""
    if n < 2 or d_max < 2:
        raise InvalidTupleError(f"paramètres invalides: n={n}, d_max={d_max}")
    moduli = list(range(2, d_max + 1))
    jobs = [(d, n + 1) for d in moduli]
    results = _scan_all(jobs, workers, progress, f"balayage n={n}", scan=_scan_level)
    tuples = [ResidueTuple(d, ks) for (d, _), found in results.items() for ks in found]
    return _classes_of(tuples)

