"""
Conditions de parties fractionnaires sur un tuple (d; k_1, ..., k_{n+1}).

- condition (SS): pour toute unité s, Sigma_s < 1 ou Sigma_{-s} < 1
  (pour n = 2 c'est la condition (S))
- condition (*): epsilon_j(s) = +1 pour toute unité s et 1 <= j <= n-1

Les deux conditions sont calculées indépendamment l'une de l'autre; leur
accord est vérifié par les tests et par la commande `verify`.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

import numpy as np

from src.arith.residues import (
    ResidueTuple,
    check_unit,
    frac_part,
    fraction_to_str,
    fractional,
    integer_part,
    residue_table,
    units,
)

logger = logging.getLogger("schwarz_monodromy.conditions")

SS = "SS"
STAR = "STAR"


@dataclass(frozen=True)
class Witness:
    s: int
    sum_s: Fraction
    sum_neg_s: Fraction
    ok: bool

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "sum_s": fraction_to_str(self.sum_s),
            "sum_neg_s": fraction_to_str(self.sum_neg_s),
            "ok": self.ok,
        }


@dataclass(frozen=True)
class StarTrace:
    """Sommes partielles alpha_j, nu_j(s) = {alpha_j} et signes epsilon_j(s), j = 1..n-1."""

    s: int
    partial_sums: tuple
    nu: tuple
    eps: tuple

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "partial_sums": [fraction_to_str(x) for x in self.partial_sums],
            "nu": [fraction_to_str(x) for x in self.nu],
            "eps": list(self.eps),
        }


@dataclass(frozen=True)
class ConditionReport:
    tuple: ResidueTuple
    holds: bool
    witnesses: tuple
    condition_name: str
    traces: tuple = field(default=())

    @property
    def failing_units(self) -> List[int]:
        return [w.s for w in self.witnesses if not w.ok]

    def to_dict(self) -> dict:
        payload = {
            "condition": self.condition_name,
            "tuple": self.tuple.to_dict(),
            "holds": self.holds,
            "witnesses": [w.to_dict() for w in self.witnesses],
        }
        if self.traces:
            payload["traces"] = [t.to_dict() for t in self.traces]
        return payload


@dataclass(frozen=True)
class LmnTriple:
    lambda_: Fraction
    mu: Fraction
    nu: Fraction

    def as_tuple(self) -> tuple:
        return (self.lambda_, self.mu, self.nu)

    def to_dict(self) -> dict:
        return {
            "lambda": fraction_to_str(self.lambda_),
            "mu": fraction_to_str(self.mu),
            "nu": fraction_to_str(self.nu),
        }


def sum_fracs(t: ResidueTuple, s: int) -> Fraction:
    """Sigma_s = somme des {k_i s / d}."""
    check_unit(s, t.d)
    return sum((frac_part(k, t.d, s) for k in t.ks), Fraction(0))


def satisfies_condition(t: ResidueTuple) -> ConditionReport:
    """Condition (SS), inégalités strictes, toutes les unités s parcourues."""
    witnesses = []
    for s in units(t.d):
        sum_s = sum_fracs(t, s)
        sum_neg_s = sum_fracs(t, t.d - s)
        witnesses.append(Witness(s, sum_s, sum_neg_s, sum_s < 1 or sum_neg_s < 1))
    holds = all(w.ok for w in witnesses)
    logger.debug(f"(SS) {t}: {'vérifiée' if holds else 'en échec'}")
    return ConditionReport(t, holds, tuple(witnesses), SS)


def lambda_mu_nu(d: int, k1: int, k2: int, k3: int) -> LmnTriple:
    f1, f2, f3 = (frac_part(k, d, 1) for k in (k1, k2, k3))
    return LmnTriple(1 - f1 - f2, 1 - f1 - f3, 1 - f2 - f3)


def star_trace(t: ResidueTuple, s: int) -> StarTrace:
    check_unit(s, t.d)
    mus = [frac_part(k, t.d, s) for k in t.ks]
    partial_sums, nus, eps = [], [], []
    alpha = Fraction(0)
    for j in range(1, t.n):
        alpha += mus[j - 1]
        nu = fractional(alpha)
        partial_sums.append(alpha)
        nus.append(nu)
        # mus est indexé à partir de 0: mu_{j+1} = mus[j]
        bracket = integer_part(nu + mus[j] + mus[j + 1])
        eps.append(1 if bracket % 2 == 0 else -1)
    return StarTrace(s, tuple(partial_sums), tuple(nus), tuple(eps))


def satisfies_star(t: ResidueTuple) -> ConditionReport:
    witnesses, traces = [], []
    for s in units(t.d):
        trace = star_trace(t, s)
        traces.append(trace)
        sum_s = sum_fracs(t, s)
        witnesses.append(Witness(s, sum_s, t.n + 1 - sum_s, all(e == 1 for e in trace.eps)))
    holds = all(w.ok for w in witnesses)
    logger.debug(f"(*) {t}: {'vérifiée' if holds else 'en échec'}")
    return ConditionReport(t, holds, tuple(witnesses), STAR, tuple(traces))


@dataclass(frozen=True)
class MuInfinity:
    value: Fraction
    integral: bool

    def to_dict(self) -> dict:
        return {"value": fraction_to_str(self.value), "integral": self.integral}


def mu_infinity(t: ResidueTuple) -> MuInfinity:
    value = 2 - Fraction(sum(t.ks), t.d)
    return MuInfinity(value, value.denominator == 1)


# Versions vectorisées: un lot de tuples de même module d, tableau (N, n+1).

def condition_mask(d: int, ks: np.ndarray) -> np.ndarray:
    """(SS) pour chaque ligne du lot, via les restes entiers l_i = k_i s mod d."""
    ks = np.asarray(ks, dtype=np.int64)
    total = residue_table(d, ks).sum(axis=2)
    size = ks.shape[1]
    # Sigma_s < 1  <=>  total < d ;  Sigma_{-s} < 1  <=>  size*d - total < d
    ok = (total < d) | (size * d - total < d)
    return ok.all(axis=1)


def star_mask(d: int, ks: np.ndarray) -> np.ndarray:
    """(*) pour chaque ligne du lot, via nu_j(s) d + l_{j+1} + l_{j+2}."""
    ks = np.asarray(ks, dtype=np.int64)
    rem = residue_table(d, ks)
    prefix = np.cumsum(rem, axis=2) % d
    n = ks.shape[1] - 1
    ok = np.ones(ks.shape[0], dtype=bool)
    for j in range(1, n):
        bracket = (prefix[:, :, j - 1] + rem[:, :, j] + rem[:, :, j + 1]) // d
        ok &= (bracket % 2 == 0).all(axis=1)
    return ok


def first_failure(report: ConditionReport) -> Optional[Witness]:
    for w in report.witnesses:
        if not w.ok:
            return w
    return None
