"""Affine point counts of plane curves h(U0, U1) = 0 over GF(8^k).

For each u0 the specialisation p(U1) = h(u0, U1) has deg gcd(p, U1^Q - U1)
roots in GF(Q).  All u0 are processed together as numpy batches; since h has
GF(8) coefficients, u0 and u0^8 give the same count, so only one u0 per
Frobenius orbit is evaluated.
"""

from __future__ import annotations

import math

import numpy as np

from .field import FieldCtx, make_field, subfield_root
from .mpoly import MPoly

BATCH = 1 << 15


class _LogDomain:
    """exp/log tables with a zero sentinel so products need no masking."""

    def __init__(self, ctx: FieldCtx):
        log, exp = ctx.log_tables
        N = ctx.order
        self.zero = 2 * N
        self.log = np.where(log < 0, self.zero, log)
        self.exp = np.concatenate([exp[: 2 * N], np.zeros(2 * N + 1, dtype=np.int64)])

    def mul(self, la, lb):
        return self.exp[la + lb]


def _embed_coefficients(h: MPoly, big: FieldCtx):
    small = h.field
    if small.degree == big.degree:
        return lambda c: c
    root = subfield_root(big, small.modulus, small.degree)
    powers = [big.power(root, i) for i in range(small.degree)]

    def embed(c: int) -> int:
        r = 0
        for i, p in enumerate(powers):
            if c >> i & 1:
                r ^= p
        return r

    return embed


def _orbit_representatives(ctx: FieldCtx, step: int) -> tuple[np.ndarray, np.ndarray]:
    """Minimal element of each orbit of x -> x^(2^step), with orbit sizes."""
    xs = np.arange(ctx.size, dtype=np.int64)
    best = xs.copy()
    cur = xs
    size = np.full(ctx.size, ctx.degree // step, dtype=np.int64)
    for i in range(1, ctx.degree // step):
        cur = ctx.vfrob(cur, step)
        best = np.minimum(best, cur)
        # orbit size = first i with x^(2^(step*i)) = x
        size = np.where((cur == xs) & (size == ctx.degree // step), i, size)
    reps = np.nonzero(best == xs)[0]
    return reps, size[reps]


def _horner(ctx: FieldCtx, coeffs: list[int], xs: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(xs)
    for c in reversed(coeffs):
        acc = ctx.vmul(acc, xs) ^ c
    return acc


def _roots_fixed_degree(ctx: FieldCtx, ld: _LogDomain, P: np.ndarray) -> np.ndarray:
    """Distinct GF(Q) roots of monic polynomials (rows of P, degree d >= 2)."""
    B, d1 = P.shape
    d = d1 - 1
    logP = ld.log[P[:, :d]]
    # S = U1 mod p, then square n times: S = U1^Q mod p
    S = np.zeros((B, d), dtype=np.int64)
    S[:, 1] = 1
    for _ in range(ctx.degree):
        T = np.zeros((B, 2 * d - 1), dtype=np.int64)
        T[:, 0::2] = ld.exp[2 * ld.log[S]]
        for j in range(2 * d - 2, d - 1, -1):
            c = ld.log[T[:, j]]
            T[:, j - d:j] ^= ld.mul(c[:, None], logP)
        S = T[:, :d]
    S[:, 1] ^= 1
    return _gcd_degree(ld, P, S)


def _degrees(A: np.ndarray) -> np.ndarray:
    nz = A != 0
    W = A.shape[1]
    return np.where(nz.any(axis=1), W - 1 - np.argmax(nz[:, ::-1], axis=1), -1)


def _gcd_degree(ld: _LogDomain, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Degree of gcd(A_row, B_row) for every row (A rows nonzero)."""
    W = A.shape[1]
    A = A.copy()
    Bm = np.zeros_like(A)
    Bm[:, : B.shape[1]] = B
    rows = np.arange(A.shape[0])
    cols = np.arange(W)
    while True:
        da, db = _degrees(A), _degrees(Bm)
        active = db >= 0
        if not active.any():
            return da
        # keep deg A >= deg B
        swap = active & (db > da)
        if swap.any():
            A[swap], Bm[swap] = Bm[swap].copy(), A[swap].copy()
            da, db = _degrees(A), _degrees(Bm)
        shift = np.where(active, da - db, 0)
        la = ld.log[A[rows, np.maximum(da, 0)]]
        lb = ld.log[Bm[rows, np.maximum(db, 0)]]
        N = ld.zero // 2
        factor = np.where(active, (la - lb) % N, ld.zero)
        idx = cols[None, :] - shift[:, None]
        shifted = np.where(idx >= 0, Bm[rows[:, None], np.clip(idx, 0, W - 1)], 0)
        A ^= ld.mul(factor[:, None], ld.log[shifted])
        # A is now of lower degree; rotate (A, B) <- (B, A mod B) lazily via the swap above


def curve_points(h: MPoly, k: int) -> int:
    """Number of affine GF(8^k)-points of h(U0, U1) = 0."""
    if h.nvars != 2:
        raise ValueError("wrong arity")
    if not 1 <= k <= 8:
        raise ValueError("k must be between 1 and 8")
    big = make_field(h.field.degree * k)
    ld = _LogDomain(big)
    embed = _embed_coefficients(h, big)
    Q = big.size

    # coefficients of U1^j as univariate polynomials in U0
    D = h.degree(1)
    cols: list[list[int]] = [[0] * (h.degree(0) + 1) for _ in range(D + 1)]
    for (a, b), c in h.terms.items():
        cols[b][a] ^= embed(c)

    step = h.field.degree if h.field.degree > 1 else 1
    reps, weights = _orbit_representatives(big, step)
    total = 0
    for lo in range(0, len(reps), BATCH):
        xs = reps[lo:lo + BATCH]
        w = weights[lo:lo + BATCH]
        C = np.stack([_horner(big, col, xs) for col in cols], axis=1)
        deg = _degrees(C)
        total += int(w[deg < 0].sum()) * Q  # p identically zero
        total += int(w[deg == 1].sum())
        for d in np.unique(deg[deg >= 2]).tolist():
            sel = deg == d
            P = C[sel][:, : d + 1]
            lead_inv = big.vinv(P[:, d])
            P = big.vmul(P, lead_inv[:, None])
            total += int((w[sel] * _roots_fixed_degree(big, ld, P)).sum())
    return total


def weil_interval(Q: int, d: int) -> tuple[float, float]:
    """Q + 1 -/+ (2g sqrt Q + d(d-1)) with g = (d-1)(d-2)/2."""
    g = (d - 1) * (d - 2) // 2
    slack = 2 * g * math.sqrt(Q) + d * (d - 1)
    return Q + 1 - slack, Q + 1 + slack
