"""
Forme anti-hermitienne tridiagonale h attachée à un tuple (d; k_1, ..., k_{n+1}).

Pour X_i -> x_i = zeta_d^(k_i s):

    h_ii      = (1 - x_i x_{i+1}) / ((1 - x_i)(1 - x_{i+1}))
    h_i,i+1   = -1 / (1 - x_{i+1})
    h_i+1,i   = -conj(h_i,i+1)

Les mineurs principaux u_j sont calculés par la récurrence à trois termes et
comparés exactement à la formule fermée
    u_j = (1 - x_1 ... x_{j+1}) / ((1 - x_1) ... (1 - x_{j+1})).
Les décisions de signe sont exactes (parité de parties entières); les
flottants n'interviennent que comme contrôle, avec une bande de garde.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List

import numpy as np

from src.arith.residues import ResidueTuple, check_unit, integer_part, units
from src.cyclotomic.cyclotomic_field import CycloElem, galois, root_power
from src.exceptions import ClosedFormMismatchError, InvalidTupleError

logger = logging.getLogger("schwarz_monodromy.forms")

GUARD_BAND = 1e-9


@dataclass(frozen=True)
class SkewHermitianForm:
    n: int
    entries: tuple
    source: ResidueTuple
    embedding_unit: int

    @property
    def d(self) -> int:
        return self.source.d

    def entry(self, i: int, j: int) -> CycloElem:
        return self.entries[i][j]

    def is_skew_hermitian(self) -> bool:
        for i in range(self.n):
            for j in range(self.n):
                if self.entries[j][i] != -galois(self.entries[i][j], self.d - 1):
                    return False
        return True

    def is_tridiagonal(self) -> bool:
        return all(
            self.entries[i][j].is_zero()
            for i in range(self.n)
            for j in range(self.n)
            if abs(i - j) >= 2
        )

    def transposed(self) -> "SkewHermitianForm":
        entries = tuple(
            tuple(self.entries[j][i] for j in range(self.n)) for i in range(self.n)
        )
        return SkewHermitianForm(self.n, entries, self.source, self.embedding_unit)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "source": self.source.to_dict(),
            "s": self.embedding_unit,
            "entries": [[e.to_dict() for e in row] for row in self.entries],
        }


@dataclass(frozen=True)
class MinorSequence:
    """Mineurs u_1..u_n (u_0 = 1 implicite), signes de beta_j et diagonale de Gram."""

    minors: tuple
    betas: tuple
    gram_diagonal: tuple
    isotropic_minor: bool = False
    float_betas: tuple = field(default=())

    def to_dict(self) -> dict:
        return {
            "minors": [u.to_dict() for u in self.minors],
            "betas": list(self.betas),
            "isotropic_minor": self.isotropic_minor,
            "float_betas": [v if math.isfinite(v) else None for v in self.float_betas],
        }


def _specializations(t: ResidueTuple, s: int) -> List[CycloElem]:
    return [root_power(t.d, k * s) for k in t.ks]


def build_h(t: ResidueTuple, s: int = 1) -> SkewHermitianForm:
    """
    Forme n x n spécialisée en X_i -> zeta_d^(k_i s).

    Raises:
        InvalidTupleError: si s n'est pas une unité ou si un k_i s est nul modulo d
    """
    check_unit(s, t.d)
    if any((k * s) % t.d == 0 for k in t.ks):
        raise InvalidTupleError(f"spécialisation triviale x_i = 1 pour {t}, s={s}")
    d, n = t.d, t.n
    x = _specializations(t, s)
    zero = CycloElem.zero(d)
    rows = [[zero] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = (1 - x[i] * x[i + 1]) / ((1 - x[i]) * (1 - x[i + 1]))
    for i in range(n - 1):
        upper = -(1 - x[i + 1]).inverse()
        rows[i][i + 1] = upper
        rows[i + 1][i] = -galois(upper, d - 1)
    form = SkewHermitianForm(n, tuple(tuple(r) for r in rows), t, s)
    if not form.is_skew_hermitian():
        raise ClosedFormMismatchError(f"forme construite non anti-hermitienne pour {t}, s={s}")
    return form


def n2_matrix_form(t: ResidueTuple, s: int = 1) -> SkewHermitianForm:
    """
    Variante 2 x 2 explicite: le facteur x_2 est placé sur l'autre
    coefficient hors diagonale (transposée de la forme tridiagonale).
    """
    if t.n != 2:
        raise InvalidTupleError(f"la forme 2 x 2 explicite exige n = 2 (reçu n = {t.n})")
    return build_h(t, s).transposed()


def closed_form_minor(t: ResidueTuple, s: int, j: int) -> CycloElem:
    x = _specializations(t, s)
    num = 1 - math.prod(x[: j + 1], start=CycloElem.one(t.d))
    den = math.prod((1 - xi for xi in x[: j + 1]), start=CycloElem.one(t.d))
    return num / den


def _recurrence_minors(form: SkewHermitianForm) -> List[CycloElem]:
    h = form.entries
    prev2, prev = CycloElem.one(form.d), h[0][0]
    minors = [prev]
    for j in range(1, form.n):
        cur = h[j][j] * prev - h[j - 1][j] * h[j][j - 1] * prev2
        minors.append(cur)
        prev2, prev = prev, cur
    return minors


def beta_sign(t: ResidueTuple, s: int, j: int) -> int:
    """
    Signe de beta_j au plongement s:
    (-1)^([A_{j+2}] - [A_j] - [theta_{j+1}] - [theta_{j+2}]) avec
    A_m = (k_1 + ... + k_m) s / d et theta_i = k_i s / d.
    """
    if not 1 <= j <= t.n - 1:
        raise InvalidTupleError(f"indice j={j} hors de [1, {t.n - 1}]")
    check_unit(s, t.d)
    d = t.d

    def partial(m):
        return Fraction(sum(t.ks[:m]) * s, d)

    def theta(i):
        return Fraction(t.ks[i - 1] * s, d)

    exponent = (
        integer_part(partial(j + 2))
        - integer_part(partial(j))
        - integer_part(theta(j + 1))
        - integer_part(theta(j + 2))
    )
    return 1 if exponent % 2 == 0 else -1


def float_beta(t: ResidueTuple, s: int, j: int) -> float:
    """
    beta_j par la formule des sinus (contrôle numérique uniquement).

    Renvoie inf lorsque u_j est exactement nul (A_{j+1} entier).
    """
    d = t.d
    if sum(t.ks[: j + 1]) * s % d == 0:
        return math.inf

    def a(m):
        return math.pi * sum(t.ks[:m]) * s / d

    def th(i):
        return math.pi * t.ks[i - 1] * s / d

    num = math.sin(a(j + 2)) * math.sin(a(j)) * math.sin(th(j + 1))
    den = math.sin(a(j + 1)) ** 2 * math.sin(th(j + 2))
    return num / den


def principal_minors(form: SkewHermitianForm) -> MinorSequence:
    """
    Raises:
        ClosedFormMismatchError: si un mineur diffère de la formule fermée, ou si
            le signe flottant de beta_j contredit le signe exact hors bande de garde
    """
    t, s = form.source, form.embedding_unit
    minors = _recurrence_minors(form)
    for j, u in enumerate(minors, start=1):
        expected = closed_form_minor(t, s, j)
        if u != expected:
            raise ClosedFormMismatchError(
                f"mineur u_{j} de {t} (s={s}) différent de la formule fermée"
            )
    isotropic = any(u.is_zero() for u in minors)

    gram = []
    previous = CycloElem.one(form.d)
    for u in minors:
        if previous.is_zero() or u.is_zero():
            gram.append(None)
        else:
            gram.append(u / previous)
        previous = u

    betas, floats = [], []
    for j in range(1, form.n):
        sign = beta_sign(t, s, j)
        value = float_beta(t, s, j)
        if math.isfinite(value) and abs(value) > GUARD_BAND and (value > 0) != (sign > 0):
            raise ClosedFormMismatchError(
                f"signe de beta_{j} incohérent pour {t}, s={s}: exact {sign}, flottant {value:.3e}"
            )
        betas.append(sign)
        floats.append(value)
    return MinorSequence(tuple(minors), tuple(betas), tuple(gram), isotropic, tuple(floats))


@dataclass(frozen=True)
class AnisotropyReport:
    tuple: ResidueTuple
    totally_anisotropic: bool
    diagnostics: tuple

    def to_dict(self) -> dict:
        return {
            "tuple": self.tuple.to_dict(),
            "totally_anisotropic": self.totally_anisotropic,
            "embeddings": [dict(entry) for entry in self.diagnostics],
        }


def totally_anisotropic(t: ResidueTuple, with_minors: bool = False) -> AnisotropyReport:
    """
    Vrai si beta_j > 0 à tout plongement s et pour tout j (et aucun mineur nul).

    with_minors=True construit aussi la forme et vérifie les mineurs exacts à
    chaque plongement (plus coûteux).
    """
    diagnostics = []
    verdict = True
    for s in units(t.d):
        signs = [beta_sign(t, s, j) for j in range(1, t.n)]
        degenerate = any(sum(t.ks[:m]) * s % t.d == 0 for m in range(2, t.n + 2))
        entry = {"s": s, "betas": signs, "isotropic_minor": degenerate}
        if with_minors:
            entry["minors"] = [u.to_dict() for u in principal_minors(build_h(t, s)).minors]
        ok = all(b == 1 for b in signs) and not degenerate
        entry["anisotropic"] = ok
        verdict = verdict and ok
        diagnostics.append(entry)
    return AnisotropyReport(t, verdict, tuple(diagnostics))


def det_sign_n2(d: int, k1: int, k2: int, k3: int, s: int) -> int:
    """
    Signe de det(h) pour n = 2: -(-1)^[Sigma_s].

    Le signe flottant de -(1/4) sin(pi(k1+k2+k3)s/d) / prod sin(pi k_i s/d) est
    comparé hors bande de garde.
    """
    check_unit(s, d)
    sigma = sum(Fraction((k * s) % d, d) for k in (k1, k2, k3))
    sign = -1 if integer_part(sigma) % 2 == 0 else 1
    value = det_float_n2(d, k1, k2, k3, s)
    if abs(value) > GUARD_BAND and (value > 0) != (sign > 0):
        raise ClosedFormMismatchError(
            f"signe de det(h) incohérent pour ({d};{k1},{k2},{k3}), s={s}: {sign} / {value:.3e}"
        )
    return sign


def det_float_n2(d: int, k1: int, k2: int, k3: int, s: int) -> float:
    num = math.sin(math.pi * (k1 + k2 + k3) * s / d)
    den = math.prod(math.sin(math.pi * k * s / d) for k in (k1, k2, k3))
    return -0.25 * num / den


def det_nonzero_n2(d: int, k1: int, k2: int, k3: int) -> bool:
    """det(h) != 0, soit x_1 x_2 x_3 != 1 (indicateur d'irréductibilité)."""
    return (k1 + k2 + k3) % d != 0


# Version vectorisée du critère d'anisotropie totale, par lot de même module d.

def anisotropy_mask(d: int, ks: np.ndarray) -> np.ndarray:
    ks = np.asarray(ks, dtype=np.int64)
    s = np.asarray(units(d).units, dtype=np.int64)
    scaled = ks[:, None, :] * s[None, :, None]
    partial = np.cumsum(scaled, axis=2)
    n = ks.shape[1] - 1
    ok = np.ones(ks.shape[0], dtype=bool)
    for j in range(1, n):
        exponent = (
            partial[:, :, j + 1] // d
            - (partial[:, :, j - 1] // d)
            - (scaled[:, :, j] // d)
            - (scaled[:, :, j + 1] // d)
        )
        ok &= (exponent % 2 == 0).all(axis=1)
    degenerate = (partial[:, :, 1:] % d == 0).any(axis=(1, 2))
    return ok & ~degenerate


def minor_identity_mask(d: int, ks: np.ndarray) -> np.ndarray:
    """
    Contrôle exact de la formule fermée des mineurs, à tous les plongements, par lot.

    Chaque pas de la récurrence à trois termes, une fois les dénominateurs chassés,
    s'écrit avec P_m = x_1 ... x_m:

        (1 - x_j)(1 - P_{j+1}) = (1 - x_j x_{j+1})(1 - P_j) - x_j (1 - x_{j+1})(1 - P_{j-1})

    Les deux membres sont développés en monômes x^e et comparés dans Z[x]/(x^d - 1),
    dont Z[zeta_d] est un quotient; le premier mineur coïncide avec h_11.

    Returns:
        np.ndarray: masque des tuples pour lesquels l'identité tient à tout s et tout j
    """
    ks = np.asarray(ks, dtype=np.int64)
    rows, size = ks.shape
    ok = np.ones(rows, dtype=bool)
    if size < 3:
        return ok
    offsets = np.arange(rows, dtype=np.int64)[:, None] * d
    signs = np.array([1, -1, -1, 1, -1, 1, 1, -1, 1, -1, -1, 1], dtype=np.float64)
    weights = np.broadcast_to(signs[:, None], (signs.size, rows)).T
    zero = np.zeros(rows, dtype=np.int64)
    for s in units(d):
        x = (ks * s) % d
        # prefix[:, m] = exposant de P_m, P_0 = 1
        prefix = np.hstack([np.zeros((rows, 1), dtype=np.int64), np.cumsum(x, axis=1)])
        for j in range(1, size - 1):
            xj, xk = x[:, j], x[:, j + 1]
            p_prev, p_cur, p_next = prefix[:, j], prefix[:, j + 1], prefix[:, j + 2]
            exponents = np.stack([
                # membre de gauche
                zero, p_next, xj, xj + p_next,
                # membre de droite, changé de signe
                zero, p_cur, xj + xk, xj + xk + p_cur, xj, xj + p_prev, xj + xk, xj + xk + p_prev,
            ], axis=1)
            flat = (offsets + exponents % d).ravel()
            balance = np.bincount(flat, weights=weights.ravel(), minlength=rows * d).reshape(rows, d)
            ok &= ~balance.any(axis=1)
    return ok
