"""2-linearized polynomials over GF(2^3m) and their kernels.

The central object is f(x) = x^(2^(m+s)) + mu*x^(2^s) + x. Its kernel
dimension is computed three independent ways:

* ``kernel_dim_matrix``: rank of the n x n GF(2) matrix of the map (canonical);
* ``kernel_dim_via_H``: nullity of H^m - id divided by m, where
  H(x) = mu*x^(2^s) + x^(2^(s+m)) and H^m comes from the coefficient recursion;
* ``subspace_intersection_dim``: dim(U_s & P_mu) inside GF(2^3m)^2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .field import FieldCtx, FieldError
from .gf2 import gf2_rank


@dataclass(frozen=True)
class LinPoly:
    """sum_i coeffs[i] * x^(2^i), exponents reduced mod the field degree."""

    ctx: FieldCtx
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.ctx.degree:
            raise ValueError("coefficient vector length must equal the field degree")

    @classmethod
    def from_terms(cls, ctx: FieldCtx, terms: dict[int, int]) -> "LinPoly":
        coeffs = [0] * ctx.degree
        for k, c in terms.items():
            coeffs[k % ctx.degree] ^= c
        return cls(ctx, tuple(coeffs))

    @classmethod
    def identity(cls, ctx: FieldCtx) -> "LinPoly":
        return cls.from_terms(ctx, {0: 1})

    def terms(self) -> list[tuple[int, int]]:
        return [(k, c) for k, c in enumerate(self.coeffs) if c]

    def __add__(self, other: "LinPoly") -> "LinPoly":
        return LinPoly(self.ctx, tuple(a ^ b for a, b in zip(self.coeffs, other.coeffs)))

    def __call__(self, x: int) -> int:
        ctx = self.ctx
        r = 0
        for k, c in self.terms():
            r ^= ctx.mul(c, ctx.frob(x, k))
        return r

    def evaluate_all(self, xs=None) -> np.ndarray:
        """Vectorised evaluation (degree <= 24); defaults to every field element."""
        ctx = self.ctx
        xs = np.arange(ctx.size, dtype=np.int64) if xs is None else np.asarray(xs, dtype=np.int64)
        out = np.zeros_like(xs)
        for k, c in self.terms():
            out ^= ctx.vmul(ctx.vfrob(xs, k), c)
        return out

    def matrix_columns(self) -> list[int]:
        """Images of the polynomial basis 1, x, ..., x^(n-1)."""
        return [self(1 << i) for i in range(self.ctx.degree)]


@dataclass(frozen=True)
class HTriple:
    """Coefficients of H^i(x) = h0 x^(2^(is)) + h1 x^(2^(is+m)) + h2 x^(2^(is+2m))."""

    h0: int
    h1: int
    h2: int
    iter: int
    shift: int
    m: int
    ctx: FieldCtx = field(compare=False, repr=False)

    @property
    def coeffs(self) -> tuple[int, int, int]:
        return (self.h0, self.h1, self.h2)

    def as_linpoly(self) -> LinPoly:
        terms: dict[int, int] = {}
        for j, h in enumerate(self.coeffs):
            k = (self.shift + j * self.m) % self.ctx.degree
            terms[k] = terms.get(k, 0) ^ h
        return LinPoly.from_terms(self.ctx, terms)

    def __call__(self, x: int) -> int:
        return self.as_linpoly()(x)

    def is_identity(self) -> bool:
        return self.as_linpoly() == LinPoly.identity(self.ctx)


def _check_cubic(ctx: FieldCtx, m: int) -> None:
    if ctx.degree % 3 or ctx.degree != 3 * m:
        raise FieldError("ambient field is not a cubic extension")


def make_f_mu(ctx: FieldCtx, m: int, s: int, mu: int) -> LinPoly:
    """f(x) = x^(2^(m+s)) + mu x^(2^s) + x over GF(2^3m)."""
    _check_cubic(ctx, m)
    if s < 1:
        raise ValueError("s must be positive")
    if math.gcd(s, m) != 1:
        warnings.warn(f"gcd(s, m) = {math.gcd(s, m)} != 1", stacklevel=2)
    n = ctx.degree
    coeffs = [0] * n
    coeffs[(m + s) % n] ^= 1
    coeffs[s % n] ^= mu
    coeffs[0] ^= 1
    return LinPoly(ctx, tuple(coeffs))


def evaluate(L: LinPoly, x: int) -> int:
    return L(x)


def kernel_dim_matrix(L: LinPoly) -> int:
    return L.ctx.degree - gf2_rank(L.matrix_columns())


def is_permutation(L: LinPoly) -> bool:
    return kernel_dim_matrix(L) == 0


def h_iterate(ctx: FieldCtx, m: int, s: int, mu: int, i: int) -> HTriple:
    """Coefficient triple of the i-th iterate of H(x) = mu x^(2^s) + x^(2^(s+m))."""
    if i < 1:
        raise ValueError("iteration starts at 1")
    _check_cubic(ctx, m)
    n = ctx.degree
    h0, h1, h2 = mu, 1, 0
    for _ in range(i - 1):
        h0, h1, h2 = (
            ctx.mul(mu, ctx.frob(h0, s)) ^ ctx.frob(h2, s + m),
            ctx.mul(mu, ctx.frob(h1, s)) ^ ctx.frob(h0, s + m),
            ctx.mul(mu, ctx.frob(h2, s)) ^ ctx.frob(h1, s + m),
        )
    return HTriple(h0, h1, h2, iter=i, shift=(i * s) % n, m=m, ctx=ctx)


def kernel_dim_via_H(ctx: FieldCtx, m: int, s: int, mu: int) -> int:
    """dim_F2 ker f_mu via dim over GF(2^m) of ker(H^m - id)."""
    if math.gcd(s, m) != 1:
        raise ValueError("kernel_dim_via_H needs gcd(s, m) = 1")
    Hm = h_iterate(ctx, m, s, mu, m).as_linpoly()
    nullity = kernel_dim_matrix(Hm + LinPoly.identity(ctx))
    if nullity % m:
        raise ArithmeticError("semilinearity violated")
    return nullity // m


def subspace_intersection_dim(ctx: FieldCtx, m: int, s: int, mu: int) -> int:
    """dim_F2 of U_s & P_mu with U_s = {(x^(2^s), x^(2^(m+s)) + x)} and P_mu = {(t, mu t)}."""
    _check_cubic(ctx, m)
    n = ctx.degree
    U = []
    P = []
    for i in range(n):
        x = 1 << i
        U.append(ctx.frob(x, s) | (ctx.frob(x, m + s) ^ x) << n)
        P.append(x | ctx.mul(mu, x) << n)
    return gf2_rank(U) + gf2_rank(P) - gf2_rank(U + P)


def kernel_dim_bruteforce(L: LinPoly) -> int:
    """log2 of the number of roots, by scanning the whole field (small n only)."""
    roots = int(np.count_nonzero(L.evaluate_all() == 0))
    d = roots.bit_length() - 1
    if roots != 1 << d:
        raise ArithmeticError(f"root count {roots} is not a power of two")
    return d
