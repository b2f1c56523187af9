import math
from collections import Counter

import numpy as np
import pytest

from apnforge import census
from apnforge import linearized as lin
from apnforge.field import make_field, rel_norm


@pytest.fixture(scope="module")
def c31():
    return census.fiber_census(make_field(9), 3, 1)


def test_census_dims_match_rank_everywhere(c31):
    ctx = make_field(9)
    for mu in range(ctx.size):
        assert c31.dims[mu] == lin.kernel_dim_matrix(lin.make_f_mu(ctx, 3, 1, mu))


def test_per_class_counts_match_direct_bucketing(c31):
    ctx = make_field(9)
    direct: dict = {}
    for mu in range(ctx.size):
        a = rel_norm(ctx, 3, mu)
        d = lin.kernel_dim_matrix(lin.make_f_mu(ctx, 3, 1, mu))
        direct.setdefault(a, Counter())[d] += 1
    assert set(direct) == set(c31.per_alpha)
    for a, cnt in direct.items():
        assert tuple(cnt.get(i, 0) for i in range(4)) == c31.per_alpha[a][:4]


def test_known_totals_m3(c31):
    assert c31.total == (145, 301, 63, 3)
    assert c31.max_dim == 3
    assert census.curve_pair_count(c31) == 504
    assert census.census_partition_ok(c31)


@pytest.mark.parametrize("m, s", [(3, 2), (4, 1), (4, 3), (5, 2), (6, 1)])
def test_partition_and_class_sizes(m, s):
    c = census.fiber_census(make_field(3 * m), m, s)
    q = 1 << m
    assert census.census_partition_ok(c)
    assert c.class_size(0) == 1
    assert all(c.class_size(a) == q * q + q + 1 for a in c.per_alpha if a)
    assert len(c.per_alpha) == q


def test_relation_reported_not_asserted_outside_hypothesis():
    c = census.fiber_census(make_field(15), 5, 1)
    rep = census.verify_relationni(c)
    assert rep["asserted"] is False
    assert rep["class_sizes_ok"]
    assert rep["ok"]
    # with gcd(s+m, 3m) = 3 the identity is not expected, and indeed fails somewhere
    assert not rep["identity_holds_everywhere"]


def test_relation_holds_under_hypothesis(c31):
    rep = census.verify_relationni(c31)
    assert rep["asserted"] and rep["identity_holds_everywhere"] and rep["ok"]
    assert rep["classes"] == 6


def test_prop_almost(c31):
    rep = census.verify_prop_almost(c31)
    assert rep["ok"]
    assert rep["n0"] == 145 and rep["N_s"] == 504 and rep["lower_bound"] == "73"


def test_pair_count_bruteforce_small():
    ctx = make_field(6)
    c = census.fiber_census(ctx, 2, 1)
    assert census.pair_count_bruteforce(ctx, 2, 1) == census.curve_pair_count(c)


@pytest.mark.parametrize("m, s", [(3, 1), (3, 2), (4, 1), (4, 3), (5, 1)])
def test_find_good_mu_is_smallest(m, s):
    ctx = make_field(3 * m)
    g = census.find_good_mu(ctx, m, s)
    assert g.kernel_dim == 0 and g.provenance == "exhaustive"
    assert lin.is_permutation(lin.make_f_mu(ctx, m, s, g.mu))
    assert rel_norm(ctx, m, g.mu) == g.norm and g.norm not in (0, 1)
    for mu in range(g.mu):
        assert rel_norm(ctx, m, mu) in (0, 1) or not lin.is_permutation(lin.make_f_mu(ctx, m, s, mu))


def test_find_good_mu_known_value():
    assert census.find_good_mu(make_field(9), 3, 1).mu == 0xD


def test_find_good_mu_requires_coprime():
    with pytest.raises(ValueError):
        census.find_good_mu(make_field(12), 4, 2)


def test_table_rows():
    assert census.table1_rows(3, 1) == [(3, 1, 0b1101, 2, 1)]
    assert census.table1_rows(3, 2) == [(3, 2, 0b1011, 1, 1)]
    assert census.table1_rows(4, 3) == []
    assert census.table1_rows(6, 2) == []  # gcd(m, s) != 1
    rows = census.table1_rows(6, 1)
    assert rows and all(r[4] == 2 and (1 + r[3] * 2) % 3 == 0 for r in rows)


@pytest.mark.parametrize("m, s", [(3, 1), (3, 2), (4, 1), (5, 2), (6, 5)])
def test_table_route(m, s):
    ctx = make_field(3 * m)
    g = census.table1_mu(ctx, m, s)
    assert g.provenance == "table1+remark"
    w = g.witness
    root = int(w["root_hex"], 16)
    assert ctx.in_subfield(root, w["m_bar"])
    assert lin.kernel_dim_matrix(lin.make_f_mu(ctx, m, s, root)) == 3
    assert lin.is_permutation(lin.make_f_mu(ctx, m, s, g.mu))
    assert rel_norm(ctx, m, g.mu) == rel_norm(ctx, m, root) == g.norm


def test_table_route_without_row_and_bad_hypothesis():
    assert census.table1_mu(make_field(12), 4, 3) is None
    assert census.table1_mu(make_field(33), 11, 2) is None
    with pytest.raises(ValueError):
        census.table1_mu(make_field(15), 5, 1)


def test_norm_fiber_enumerates_whole_class():
    ctx = make_field(9)
    alpha = rel_norm(ctx, 3, 0x55)
    fiber = list(census._norm_fiber(ctx, 3, alpha))
    assert len(set(fiber)) == 73
    assert all(rel_norm(ctx, 3, e) == alpha for e in fiber)


@pytest.mark.parametrize("m, s, sample", [(3, 1, None), (3, 2, None), (4, 1, 200), (7, 1, 40)])
def test_unit_equation_unique_root(m, s, sample):
    rep = census.verify_prop_dim1(make_field(3 * m), m, s, sample=sample)
    assert rep["ok"], rep["failures"]


def test_value_map_complement_is_permutations():
    ctx = make_field(9)
    xs = np.arange(1, ctx.size, dtype=np.int64)
    image = set(census.value_map(ctx, 3, 1, xs).tolist())
    for mu in range(ctx.size):
        assert (mu not in image) == lin.is_permutation(lin.make_f_mu(ctx, 3, 1, mu))


def test_mu_zero_dimension_closed_form():
    for m in range(2, 7):
        ctx = make_field(3 * m)
        for s in (s for s in range(1, m) if math.gcd(s, m) == 1):
            assert lin.kernel_dim_bruteforce(lin.make_f_mu(ctx, m, s, 0)) == math.gcd(3 * m, s + m)
