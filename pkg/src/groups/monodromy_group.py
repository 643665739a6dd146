"""
Oracle indépendant pour n = 2: le groupe Gamma engendré par

    A = [[x1 x2, 1 - x1], [0, 1]]
    B = [[1, 0], [x2 (1 - x3), x2 x3]]

avec x_j = zeta_d^(k_j), énuméré par parcours en largeur avec égalité exacte
dans Z[zeta_d].
"""

import logging
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.arith.residues import ResidueTuple, fraction_to_str
from src.cyclotomic.cyclotomic_field import CycloElem, galois, root_power
from src.exceptions import ConductorMismatchError, IntegralityError, InvalidTupleError

logger = logging.getLogger("schwarz_monodromy.groups")

DEFAULT_CAP = 1_000_000
WORD_LOG_SIZE = 20
TRACE_BOUND = 2 + 1e-9


class CycloMatrix2:
    """Matrice 2 x 2 à coefficients dans Q(zeta_d), immuable."""

    __slots__ = ("a", "b", "c", "e", "_key")

    def __init__(self, a: CycloElem, b: CycloElem, c: CycloElem, e: CycloElem):
        if len({a.d, b.d, c.d, e.d}) != 1:
            raise ConductorMismatchError("coefficients de conducteurs différents")
        self.a, self.b, self.c, self.e = a, b, c, e
        self._key = None

    @classmethod
    def identity(cls, d: int) -> "CycloMatrix2":
        one, zero = CycloElem.one(d), CycloElem.zero(d)
        return cls(one, zero, zero, one)

    @classmethod
    def from_form(cls, form) -> "CycloMatrix2":
        if form.n != 2:
            raise InvalidTupleError("seules les formes 2 x 2 sont représentables")
        (a, b), (c, e) = form.entries
        return cls(a, b, c, e)

    @property
    def d(self) -> int:
        return self.a.d

    @property
    def entries(self) -> Tuple[Tuple[CycloElem, CycloElem], Tuple[CycloElem, CycloElem]]:
        return ((self.a, self.b), (self.c, self.e))

    def __matmul__(self, other: "CycloMatrix2") -> "CycloMatrix2":
        if other.d != self.d:
            raise ConductorMismatchError(f"conducteurs différents: {self.d} et {other.d}")
        return CycloMatrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.e,
            self.c * other.a + self.e * other.c,
            self.c * other.b + self.e * other.e,
        )

    def trace(self) -> CycloElem:
        return self.a + self.e

    def det(self) -> CycloElem:
        return self.a * self.e - self.b * self.c

    def conjugate_transpose(self) -> "CycloMatrix2":
        a, b, c, e = (galois(z, self.d - 1) for z in (self.a, self.b, self.c, self.e))
        return CycloMatrix2(a, c, b, e)

    def inverse(self) -> "CycloMatrix2":
        """Adjointe divisée par le déterminant; pour un déterminant racine de l'unité, det^-1 = conj(det)."""
        det = self.det()
        det_conj = galois(det, self.d - 1)
        det_inv = det_conj if det * det_conj == 1 else det.inverse()
        return CycloMatrix2(self.e * det_inv, -self.b * det_inv, -self.c * det_inv, self.a * det_inv)

    def is_integral(self) -> bool:
        return all(z.is_integral() for z in (self.a, self.b, self.c, self.e))

    def is_scalar(self) -> bool:
        return self.b.is_zero() and self.c.is_zero() and self.a == self.e

    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.d, tuple(self.a.rep), tuple(self.b.rep), tuple(self.c.rep), tuple(self.e.rep))
        return self._key

    def __eq__(self, other):
        return isinstance(other, CycloMatrix2) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def to_dict(self) -> dict:
        return {"entries": [[z.to_dict() for z in row] for row in self.entries]}

    def __repr__(self):
        return f"CycloMatrix2({self.a!r}, {self.b!r}, {self.c!r}, {self.e!r})"


@dataclass(frozen=True)
class ClosureResult:
    """
    Issue d'une clôture. Trois valeurs de `reason`:

    - "closed": groupe fini, `order` = `elements_found`
    - "cap_exceeded": plus de `cap` éléments trouvés, `elements_found` = cap + 1
    - "infinite_order_element": arrêt anticipé sur un élément certifié d'ordre infini,
      dont le mot est `infinite_order_witness`; `elements_found` peut rester sous `cap`
    """

    finite: bool
    order: Optional[int]
    cap: int
    elements_found: int
    reason: str
    word_log: tuple = ()
    elements: tuple = field(default=(), repr=False, compare=False)
    infinite_order_witness: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "finite": self.finite,
            "order": self.order,
            "cap": self.cap,
            "elements_found": self.elements_found,
            "reason": self.reason,
            "word_log": list(self.word_log),
            "infinite_order_witness": self.infinite_order_witness,
        }


@dataclass(frozen=True)
class PairSumFractions:
    """mu1 = {(k2+k3)/d}, mu2 = {(k3+k1)/d}, mu3 = {(k1+k2)/d}; ordres projectifs de A, B, C."""

    mu1: Fraction
    mu2: Fraction
    mu3: Fraction
    orders: tuple

    def to_dict(self) -> dict:
        return {
            "mu1": fraction_to_str(self.mu1),
            "mu2": fraction_to_str(self.mu2),
            "mu3": fraction_to_str(self.mu3),
            "orders": {"(1,2)": self.orders[0], "(2,3)": self.orders[1], "(3,1)": self.orders[2]},
        }


@dataclass(frozen=True)
class DihedralTraceResult:
    dihedral: bool
    zero_traces: tuple

    def to_dict(self) -> dict:
        return {"dihedral": self.dihedral, "zero_traces": list(self.zero_traces)}


def gassner_generators_n2(d: int, k1: int, k2: int, k3: int) -> Tuple[CycloMatrix2, CycloMatrix2]:
    ResidueTuple(d, (k1, k2, k3))
    x1, x2, x3 = (root_power(d, k) for k in (k1, k2, k3))
    zero, one = CycloElem.zero(d), CycloElem.one(d)
    a = CycloMatrix2(x1 * x2, 1 - x1, zero, one)
    b = CycloMatrix2(one, zero, x2 * (1 - x3), x2 * x3)
    return a, b


def preserves_form(g: CycloMatrix2, h) -> bool:
    """Test exact de t(conj g) . h . g = h."""
    hm = h if isinstance(h, CycloMatrix2) else CycloMatrix2.from_form(h)
    if hm.d != g.d:
        raise ConductorMismatchError(f"conducteurs différents: {g.d} et {hm.d}")
    return g.conjugate_transpose() @ hm @ g == hm


def _has_infinite_order(g: CycloMatrix2) -> bool:
    tr = g.trace()
    # ordre fini => valeurs propres racines de l'unité => |trace| <= 2 à tout plongement
    if np.any(np.abs(tr.embeddings()) > TRACE_BOUND):
        return True
    # valeur propre double sans être scalaire: partie unipotente non triviale
    return tr * tr == 4 * g.det() and not g.is_scalar()


def group_closure(
    gens: Sequence[CycloMatrix2],
    cap: int = DEFAULT_CAP,
    detect_infinite_order: bool = False,
    keep_elements: bool = True,
) -> ClosureResult:
    """
    Clôture en largeur sous les générateurs et leurs inverses.

    Args:
        gens: générateurs (même conducteur)
        cap: nombre maximal d'éléments avant abandon
        detect_infinite_order: arrêter dès qu'un élément d'ordre infini est certifié
        keep_elements: conserver les éléments dans le résultat

    Raises:
        IntegralityError: si un coefficient non entier apparaît
    """
    if not gens:
        raise ValueError("aucun générateur fourni")
    d = gens[0].d
    letters: List[Tuple[str, CycloMatrix2]] = []
    for i, g in enumerate(gens):
        name = chr(ord("A") + i) if i < 26 else f"g{i}"
        letters.append((name, g))
        letters.append((name.lower() if i < 26 else f"{name}^-1", g.inverse()))
    for name, g in letters:
        if not g.is_integral():
            raise IntegralityError(f"générateur {name} non entier")

    identity = CycloMatrix2.identity(d)
    seen: Dict[CycloMatrix2, str] = {identity: ""}
    queue = deque([identity])
    words = [""]

    while queue:
        current = queue.popleft()
        prefix = seen[current]
        for name, g in letters:
            nxt = current @ g
            if nxt in seen:
                continue
            if not nxt.is_integral():
                raise IntegralityError(f"élément non entier pour le mot {prefix + name}")
            seen[nxt] = prefix + name
            if len(words) < WORD_LOG_SIZE:
                words.append(prefix + name)
            if detect_infinite_order and _has_infinite_order(nxt):
                logger.debug(f"élément d'ordre infini trouvé: {prefix + name}")
                return ClosureResult(
                    False, None, cap, len(seen), "infinite_order_element", tuple(words),
                    infinite_order_witness=prefix + name,
                )
            if len(seen) > cap:
                logger.debug(f"plafond de {cap} éléments dépassé")
                return ClosureResult(False, None, cap, len(seen), "cap_exceeded", tuple(words))
            queue.append(nxt)

    elements = tuple(seen) if keep_elements else ()
    return ClosureResult(True, len(seen), cap, len(seen), "closed", tuple(words), elements)


def dihedral_trace_test(a: CycloMatrix2, b: CycloMatrix2) -> DihedralTraceResult:
    c = a @ b
    zero = [name for name, m in (("A", a), ("B", b), ("C", c)) if m.trace().is_zero()]
    return DihedralTraceResult(len(zero) >= 2, tuple(zero))


def pgl2_orders(d: int, k1: int, k2: int, k3: int) -> PairSumFractions:
    ResidueTuple(d, (k1, k2, k3))

    def order(total):
        return d // gcd(d, total)

    return PairSumFractions(
        Fraction((k2 + k3) % d, d),
        Fraction((k3 + k1) % d, d),
        Fraction((k1 + k2) % d, d),
        (order(k1 + k2), order(k2 + k3), order(k3 + k1)),
    )


def projective_order(g: CycloMatrix2, limit: int = 1000) -> Optional[int]:
    """Plus petit k >= 1 tel que g^k soit scalaire, ou None au-delà de limit."""
    power = g
    for k in range(1, limit + 1):
        if power.is_scalar():
            return k
        power = power @ g
    return None


def determinant_order(g: CycloMatrix2) -> Optional[int]:
    """Ordre multiplicatif du déterminant s'il s'agit d'une racine d-ième de l'unité."""
    det = g.det()
    for e in range(g.d):
        if det == root_power(g.d, e):
            return g.d // gcd(g.d, e) if e else 1
    return None


def sample_form_invariance(result: ClosureResult, h, sample_size: int = 100, seed: int = 0) -> bool:
    """
    Vérifie preserves_form sur un échantillon d'éléments de la clôture.

    Raises:
        ValueError: si la clôture n'a conservé aucun élément (keep_elements=False ou groupe infini)
    """
    if not result.elements:
        raise ValueError("aucun élément conservé: la clôture doit être lancée avec keep_elements=True")
    rng = random.Random(seed)
    pool = list(result.elements)
    chosen = pool if len(pool) <= sample_size else rng.sample(pool, sample_size)
    return all(preserves_form(g, h) for g in chosen)
