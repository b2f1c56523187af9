from fractions import Fraction

import mpmath
import pytest

from apnforge import bounds
from apnforge.bounds import BoundParams, langweil_threshold

mpmath.mp.dps = 80


def holds_mp(d, n, m, divisor=7):
    """The same inequality in 80-digit floating point."""
    q = mpmath.mpf(2) ** m
    lower = 1 + (q**n - (d - 1) * (d - 2) * q ** (n - mpmath.mpf(1) / 2)
                 - 5 * mpmath.mpf(d) ** (mpmath.mpf(13) / 3) * q ** (n - 1)) / divisor
    return q > 2 * (n + 1) * d * d and lower > q * q + q + 2


def test_threshold_d1248():
    r = langweil_threshold(BoundParams(1248), reference=47)
    assert r["m_star"] == 48
    assert r["deviation"] is True and r["reference"] == 47
    assert r["readings"] == {"full": 48, "cm_term_only": 47, "positive_count_only": 48}
    assert r["dominant_term"].startswith("5 d^(13/3)")
    assert r["q_over_d13_3"] == pytest.approx(2**48 / 1248 ** (13 / 3))


@pytest.mark.parametrize("d", [3, 10, 100, 1248])
def test_threshold_agrees_with_high_precision(d):
    m_star = langweil_threshold(BoundParams(d))["m_star"]
    assert holds_mp(d, 3, m_star)
    assert not holds_mp(d, 3, m_star - 1)


def test_small_degree_threshold():
    assert langweil_threshold(BoundParams(3))["m_star"] == 10


def test_table_rows_and_monotone():
    r = langweil_threshold(BoundParams(1248))
    ms = [row["m"] for row in r["table"]]
    assert ms == list(range(44, 52))
    flags = [row["holds"] for row in r["table"]]
    assert flags == sorted(flags)  # False ... then True
    at = next(row for row in r["table"] if row["m"] == 48)
    assert at["log2_lower_bound"] > at["log2_competitors"]


def test_root_up_is_an_upper_bound():
    for x, k in [(2, 2), (1248, 3), (10**9 + 7, 3), (16, 2)]:
        r = bounds._root_up(x, k)
        assert r**k >= x
        assert (r - Fraction(1, 2**63)) ** k < x or r**k == x


def test_bad_degree():
    with pytest.raises(ValueError):
        langweil_threshold(BoundParams(2))
