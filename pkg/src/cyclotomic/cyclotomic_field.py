"""
Arithmétique exacte dans le corps cyclotomique Q(zeta_d).

Les éléments sont des polynômes à coefficients rationnels réduits modulo le
d-ième polynôme cyclotomique Phi_d, dans la base {1, zeta, ..., zeta^(phi(d)-1)}.
Les opérations denses s'appuient sur sympy.polys (représentation "dup":
liste de coefficients du degré le plus haut au plus bas).
"""

import logging
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import divisors
from sympy.polys.densearith import dup_add, dup_sub, dup_mul, dup_neg, dup_rem, dup_div
from sympy.polys.densebasic import dup_strip, dup_convert
from sympy.polys.domains import ZZ, QQ
from sympy.polys.euclidtools import dup_invert
from sympy.polys.polyerrors import NotInvertible

from src.arith.residues import check_unit, fraction_to_str, units
from src.exceptions import ConductorMismatchError, CyclotomicDivisionByZero, ReductionError

logger = logging.getLogger("schwarz_monodromy.cyclotomic")


class CycloPoly:
    """Phi_d: polynôme unitaire à coefficients entiers, de degré phi(d)."""

    __slots__ = ("d", "coeffs")

    def __init__(self, d, coeffs):
        self.d = d
        # coefficients du degré 0 au degré phi(d)
        self.coeffs = tuple(int(c) for c in coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def rep(self) -> list:
        return [ZZ(c) for c in reversed(self.coeffs)]

    def __eq__(self, other):
        return isinstance(other, CycloPoly) and (self.d, self.coeffs) == (other.d, other.coeffs)

    def __hash__(self):
        return hash((self.d, self.coeffs))

    def __repr__(self):
        return f"CycloPoly({self.d}, {list(self.coeffs)})"


@lru_cache(maxsize=None)
def cyclotomic_poly(d: int) -> CycloPoly:
    """
    Phi_d obtenu en divisant x^d - 1 par Phi_e pour tous les diviseurs stricts e de d.

    Raises:
        ReductionError: si une division intermédiaire laisse un reste
    """
    if d < 1:
        raise ValueError(f"conducteur invalide: {d}")
    f = [ZZ(1)] + [ZZ(0)] * (d - 1) + [ZZ(-1)]
    for e in divisors(d)[:-1]:
        q, r = dup_div(f, cyclotomic_poly(e).rep, ZZ)
        if r:
            raise ReductionError(f"x^{d}-1 n'est pas divisible par Phi_{e} (reste {r})")
        f = q
    return CycloPoly(d, reversed(f))


@lru_cache(maxsize=None)
def _modulus(d: int) -> list:
    return dup_convert(cyclotomic_poly(d).rep, ZZ, QQ)


@lru_cache(maxsize=None)
def _embedding_matrix(d: int) -> np.ndarray:
    # ligne s: puissances zeta^(s*i), i = 0..phi(d)-1
    s = np.asarray(units(d).units, dtype=np.float64)
    i = np.arange(cyclotomic_poly(d).degree, dtype=np.float64)
    return np.exp(2j * np.pi * np.outer(s, i) / d)


def _to_qq(x) -> object:
    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


class CycloElem:
    """Élément de Q(zeta_d), toujours réduit modulo Phi_d."""

    __slots__ = ("d", "rep", "_hash")

    def __init__(self, d: int, rep, reduced: bool = False):
        self.d = d
        rep = dup_strip(list(rep))
        if not reduced and len(rep) > cyclotomic_poly(d).degree:
            rep = dup_rem(rep, _modulus(d), QQ)
        self.rep = rep
        self._hash = None

    @classmethod
    def from_coeffs(cls, d: int, coeffs) -> "CycloElem":
        """Construit l'élément sum c_i zeta^i (coefficients du degré 0 vers le haut)."""
        return cls(d, [_to_qq(c) for c in reversed(list(coeffs))])

    @classmethod
    def constant(cls, d: int, value) -> "CycloElem":
        return cls(d, [_to_qq(value)], reduced=True)

    @classmethod
    def zero(cls, d: int) -> "CycloElem":
        return cls(d, [], reduced=True)

    @classmethod
    def one(cls, d: int) -> "CycloElem":
        return cls.constant(d, 1)

    @property
    def coeffs(self) -> tuple:
        """Coefficients rationnels (Fraction) de zeta^0 à zeta^(phi(d)-1)."""
        out = [Fraction(0)] * cyclotomic_poly(self.d).degree
        for i, c in enumerate(reversed(self.rep)):
            out[i] = Fraction(int(c.numerator), int(c.denominator))
        return tuple(out)

    def is_zero(self) -> bool:
        return not self.rep

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.rep)

    def _coerce(self, other) -> "CycloElem":
        if isinstance(other, CycloElem):
            if other.d != self.d:
                raise ConductorMismatchError(
                    f"conducteurs différents: {self.d} et {other.d}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return CycloElem.constant(self.d, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloElem(self.d, dup_add(self.rep, other.rep, QQ), reduced=True)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloElem(self.d, dup_sub(self.rep, other.rep, QQ), reduced=True)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return CycloElem(self.d, dup_neg(self.rep, QQ), reduced=True)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloElem(self.d, dup_mul(self.rep, other.rep, QQ))

    __rmul__ = __mul__

    def inverse(self) -> "CycloElem":
        if self.is_zero():
            raise CyclotomicDivisionByZero(f"inversion de 0 dans Q(zeta_{self.d})")
        if len(self.rep) == 1:
            return CycloElem(self.d, [QQ.one / self.rep[0]], reduced=True)
        try:
            inv = dup_invert(self.rep, _modulus(self.d), QQ)
        except NotInvertible as e:
            raise ReductionError(f"Phi_{self.d} non inversible contre {self!r}") from e
        return CycloElem(self.d, inv)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CycloElem.one(self.d)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloElem.constant(self.d, other)
        if not isinstance(other, CycloElem):
            return NotImplemented
        return self.d == other.d and self.rep == other.rep

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.d, tuple(self.rep)))
        return self._hash

    def conjugate(self) -> "CycloElem":
        return galois(self, self.d - 1)

    def embed(self, s: int = 1) -> complex:
        return embed(self, s)

    def embeddings(self) -> np.ndarray:
        """Valeurs numériques sous tous les plongements zeta -> e^(2 pi i s / d), s unité."""
        c = np.array([float(x) for x in self.coeffs], dtype=np.float64)
        return _embedding_matrix(self.d) @ c

    def to_dict(self) -> dict:
        return {"d": self.d, "coeffs": [fraction_to_str(c) for c in self.coeffs]}

    def __repr__(self):
        return f"CycloElem({self.d}, [{', '.join(fraction_to_str(c) for c in self.coeffs)}])"


def root_power(d: int, e: int) -> CycloElem:
    """zeta_d^e réduit dans la base des puissances."""
    e %= d
    return CycloElem(d, [QQ.one] + [QQ.zero] * e)


def arith(a: CycloElem, b: CycloElem, op: str) -> CycloElem:
    """Opération de corps nommée: "add", "sub", "mul" ou "div"."""
    if a.d != b.d:
        raise ConductorMismatchError(f"conducteurs différents: {a.d} et {b.d}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"opération inconnue: {op!r}")


def galois(a: CycloElem, s: int) -> CycloElem:
    """Image de a par l'automorphisme zeta -> zeta^s; s = d-1 est la conjugaison complexe."""
    s = check_unit(s, a.d)
    if s == 1 or a.d <= 2:
        return a
    spread = [QQ.zero] * a.d
    for i, c in enumerate(reversed(a.rep)):
        j = (i * s) % a.d
        spread[j] = spread[j] + c
    return CycloElem(a.d, list(reversed(spread)))


def embed(a: CycloElem, s: int = 1) -> complex:
    """Valeur numérique (double précision) de a sous zeta -> e^(2 pi i s / d)."""
    s = check_unit(s, a.d)
    z = np.exp(2j * np.pi * s / a.d)
    coeffs = [int(c.numerator) / int(c.denominator) for c in a.rep]
    if not coeffs:
        return 0j
    return complex(np.polyval(coeffs, z))
