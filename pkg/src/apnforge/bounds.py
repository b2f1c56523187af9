"""Explicit threshold from the Cafure-Matera form of the Lang-Weil estimate.

For an F_q-irreducible variety of dimension n and degree d with q > 2(n+1)d^2,

    #V(F_q) >= q^n - (d-1)(d-2) q^(n-1/2) - 5 d^(13/3) q^(n-1).

With q = 2^m, the count of permutation parameters is at least
1 + #V / divisor, and it must exceed ``competitors(q)`` = q^2 + q + 2 (the
norm-1 fiber plus mu = 0) to leave a parameter of norm other than 1.

All comparisons are exact: irrational quantities are replaced by rational
upper bounds, so a reported pass is never an artefact of rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from sympy import integer_nthroot

_SCALE = 1 << 64


def _root_up(x: int, k: int) -> Fraction:
    """Rational upper bound on x^(1/k), within 2^-64."""
    r, exact = integer_nthroot(x * _SCALE**k, k)
    return Fraction(r if exact else r + 1, _SCALE)


def _default_competitors(q: int) -> int:
    return q * q + q + 2


@dataclass(frozen=True)
class BoundParams:
    d: int
    dim: int = 3
    divisor: int = 7
    competitors: Callable[[int], int] = field(default=_default_competitors, compare=False)


def _terms(p: BoundParams, m: int, positive_only: bool = False) -> dict:
    q = 1 << m
    n = p.dim
    d = p.d
    sqrt_q = Fraction(1 << (m // 2)) if m % 2 == 0 else _root_up(q, 2)
    d13_3 = d**4 * _root_up(d, 3)
    main = Fraction(q**n)
    weil = (d - 1) * (d - 2) * q ** (n - 1) * sqrt_q
    cm = 5 * d13_3 * q ** (n - 1)
    lower = 1 + (main - weil - cm) / p.divisor
    need = 1 if positive_only else p.competitors(q)
    return {
        "m": m,
        "validity": q > 2 * (n + 1) * d * d,
        "log2_main": n * m,
        "log2_weil_term": math.log2(weil) if weil > 0 else None,
        "log2_cm_term": math.log2(cm),
        "log2_lower_bound": math.log2(lower) if lower > 0 else None,
        "log2_competitors": math.log2(need),
        "inequality": lower > need,
        "holds": q > 2 * (n + 1) * d * d and lower > need,
    }


def _least(pred, window: int = 16, limit: int = 512) -> int:
    for m in range(1, limit):
        if all(pred(m + i) for i in range(window + 1)):
            return m
    raise ArithmeticError("no threshold below the search limit")


def langweil_threshold(p: BoundParams, reference: int | None = None) -> dict:
    """Least m such that the inequality holds for m..m+16, with the table of
    intermediate quantities around it."""
    if p.d < 3:
        raise ValueError("d must be at least 3")
    m_star = _least(lambda m: _terms(p, m)["holds"])
    table = [_terms(p, m) for m in range(max(1, m_star - 4), m_star + 4)]
    at = _terms(p, m_star)
    # looser readings, to locate which inequality a reported threshold matches
    d, n = p.d, p.dim
    readings = {
        "full": m_star,
        "cm_term_only": _least(lambda m: (1 << m) > 2 * (n + 1) * d * d
                               and Fraction(1 << m) > 5 * d**4 * _root_up(d, 3)),
        "positive_count_only": _least(lambda m: _terms(p, m, positive_only=True)["holds"]),
    }
    q_star = 1 << m_star
    report = {
        "d": p.d,
        "dim": p.dim,
        "divisor": p.divisor,
        "m_star": m_star,
        "readings": readings,
        "dominant_term": "5 d^(13/3) q^(n-1)" if at["log2_cm_term"] >= (at["log2_weil_term"] or 0)
        else "(d-1)(d-2) q^(n-1/2)",
        "q_over_d13_3": q_star / (p.d ** (13 / 3)),
        "table": table,
    }
    if reference is not None:
        report["reference"] = reference
        report["deviation"] = m_star != reference
    return report
