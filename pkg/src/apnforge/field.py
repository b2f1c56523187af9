"""Arithmetic in GF(2^n), n <= 48, in a polynomial basis.

Elements are plain Python ints whose bit i is the coefficient of x^i.
Subfields are never represented separately: an element of GF(2^d) inside
GF(2^n) is simply an int fixed by ``frob(ctx, a, d)``.

For n <= 24 the context also exposes vectorised numpy operations backed by
log/exp tables; these drive the exhaustive sweeps.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path

import numpy as np

MAX_DEGREE = 48
# Python-list log tables for scalar ops below this size, numpy tables up to
# VECTOR_MAX_DEGREE.
SCALAR_TABLE_MAX_DEGREE = 18
VECTOR_MAX_DEGREE = 24

MODULI_ENV = "APNFORGE_MODULI"


class FieldError(ValueError):
    pass


# --- GF(2)[x] helpers on int-encoded polynomials ---------------------------

def clmul(a: int, b: int) -> int:
    """Carryless product of two bit-encoded GF(2) polynomials."""
    if a.bit_length() < b.bit_length():
        a, b = b, a
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def poly_mulmod(a: int, b: int, m: int) -> int:
    return poly_mod(clmul(a, b), m)


def is_irreducible(f: int) -> bool:
    """Irreducibility over GF(2) of the bit-encoded polynomial ``f``.

    Ben-Or style: gcd(f, x^(2^k) - x) = 1 for every k <= n/2, and
    x^(2^n) = x mod f.
    """
    n = f.bit_length() - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = 0b10
    xp = x
    for k in range(1, n + 1):
        xp = poly_mulmod(xp, xp, f)
        if k <= n // 2 and poly_gcd(f, xp ^ x) != 1:
            return False
    return xp == poly_mod(x, f)


def poly_str(f: int, var: str = "x") -> str:
    terms = []
    for i in range(f.bit_length() - 1, -1, -1):
        if f >> i & 1:
            terms.append("1" if i == 0 else var if i == 1 else f"{var}^{i}")
    return " + ".join(terms) or "0"


@lru_cache(maxsize=None)
def canonical_modulus(n: int) -> int:
    """Smallest-encoding monic irreducible of degree n with nonzero constant term.

    The constant-term condition only matters for n = 1, where it selects
    x + 1 over x.
    """
    if not 1 <= n <= MAX_DEGREE:
        raise FieldError(f"unsupported degree {n}")
    for f in range((1 << n) | 1, 1 << (n + 1), 2):
        if is_irreducible(f):
            return f
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# --- moduli table file ------------------------------------------------------

def dump_moduli(path_or_file=None, degrees=range(1, MAX_DEGREE + 1)) -> str:
    """Render the modulus table: one ``n<TAB>hex`` line per degree."""
    text = "".join(f"{n}\t{canonical_modulus(n):x}\n" for n in degrees)
    if path_or_file is not None:
        Path(path_or_file).write_text(text)
    return text


def load_moduli(path) -> dict[int, int]:
    table = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            n_str, hex_str = line.split("\t") if "\t" in line else line.split()
            n, f = int(n_str), int(hex_str, 16)
        except ValueError as exc:
            raise FieldError(f"{path}:{lineno}: malformed modulus line") from exc
        if f.bit_length() - 1 != n or not is_irreducible(f):
            raise FieldError(f"{path}:{lineno}: not an irreducible of degree {n}")
        table[n] = f
    return table


@lru_cache(maxsize=8)
def _moduli_override(path: str) -> dict[int, int]:
    return load_moduli(path)


# --- the field context ------------------------------------------------------

@dataclass(frozen=True)
class FieldCtx:
    degree: int
    modulus: int

    @property
    def size(self) -> int:
        return 1 << self.degree

    @property
    def order(self) -> int:
        """Order of the multiplicative group."""
        return (1 << self.degree) - 1

    def __repr__(self) -> str:
        return f"GF(2^{self.degree}) mod {poly_str(self.modulus)}"

    # scalar arithmetic

    def reduce(self, a: int) -> int:
        return poly_mod(a, self.modulus)

    def mul(self, a: int, b: int) -> int:
        if self.degree <= SCALAR_TABLE_MAX_DEGREE:
            if not a or not b:
                return 0
            log, exp = self._scalar_tables
            return exp[log[a] + log[b]]
        return poly_mod(clmul(a, b), self.modulus)

    def square(self, a: int) -> int:
        return self.mul(a, a)

    def power(self, a: int, e: int) -> int:
        if e < 0:
            return self.power(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        if self.degree <= SCALAR_TABLE_MAX_DEGREE:
            log, exp = self._scalar_tables
            return exp[(log[a] * e) % self.order]
        e %= self.order
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero inversion")
        return self.power(a, self.order - 1)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frob(self, a: int, k: int) -> int:
        """a^(2^k), k taken mod the degree."""
        k %= self.degree
        if k == 0 or a <= 1:
            return a
        if self.degree <= SCALAR_TABLE_MAX_DEGREE:
            log, exp = self._scalar_tables
            return exp[(log[a] << k) % self.order]
        cols = self._frob_columns(k)
        r = 0
        i = 0
        while a:
            if a & 1:
                r ^= cols[i]
            a >>= 1
            i += 1
        return r

    def in_subfield(self, a: int, d: int) -> bool:
        return self.frob(a, d) == a

    def elements(self) -> range:
        return range(self.size)

    def random(self, rng, nonzero: bool = False) -> int:
        lo = 1 if nonzero else 0
        return int(rng.integers(lo, self.size)) if hasattr(rng, "integers") else rng.randrange(lo, self.size)

    # cached structure

    @cached_property
    def generator(self) -> int:
        """Smallest-encoding primitive element."""
        if self.degree == 1:
            return 1
        primes = _prime_factors(self.order)
        for g in range(2, self.size):
            if all(self._slow_pow(g, self.order // p) != 1 for p in primes):
                return g
        raise AssertionError("no generator")  # pragma: no cover

    def _slow_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = poly_mod(clmul(r, a), self.modulus)
            a = poly_mod(clmul(a, a), self.modulus)
            e >>= 1
        return r

    @cached_property
    def _scalar_tables(self) -> tuple[list[int], list[int]]:
        log, exp = self.log_tables
        return log.tolist(), exp.tolist()

    @cached_property
    def log_tables(self) -> tuple[np.ndarray, np.ndarray]:
        """(log, exp) numpy tables; exp has length 2*order so sums of two
        logs index it without a modulo. log[0] is -1."""
        if self.degree > VECTOR_MAX_DEGREE:
            raise FieldError(f"tables unavailable for degree {self.degree} > {VECTOR_MAX_DEGREE}")
        order = self.order
        g = self.generator
        exp = np.ones(1, dtype=np.int64)
        step = g  # g^len(exp)
        while len(exp) < order:
            exp = np.concatenate([exp, _vmul_const(exp, step, self)])
            step = self._slow_pow(step, 2)
        exp = exp[:order]
        log = np.full(self.size, -1, dtype=np.int64)
        log[exp] = np.arange(order, dtype=np.int64)
        return log, np.concatenate([exp, exp])

    def _frob_columns(self, k: int) -> list[int]:
        cache = self.__dict__.setdefault("_frob_cache", {})
        cols = cache.get(k)
        if cols is None:
            cols = []
            for i in range(self.degree):
                v = 1 << i
                for _ in range(k):
                    v = poly_mod(clmul(v, v), self.modulus)
                cols.append(v)
            cache[k] = cols
        return cols

    # vectorised arithmetic (degree <= 24)

    def vmul(self, a, b) -> np.ndarray:
        log, exp = self.log_tables
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        la, lb = log[a], log[b]
        out = exp[np.maximum(la, 0) + np.maximum(lb, 0)]
        return np.where((la < 0) | (lb < 0), 0, out)

    def vpow(self, a, e: int) -> np.ndarray:
        log, exp = self.log_tables
        a = np.asarray(a, dtype=np.int64)
        la = log[a]
        if e == 0:
            return np.ones_like(a)
        out = exp[(np.maximum(la, 0) * (e % self.order)) % self.order]
        return np.where(la < 0, 0, out)

    def vinv(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("zero inversion")
        log, exp = self.log_tables
        return exp[(self.order - log[a]) % self.order]

    def vfrob(self, a, k: int) -> np.ndarray:
        k %= self.degree
        a = np.asarray(a, dtype=np.int64)
        if k == 0:
            return a.copy()
        return self.vpow(a, 1 << k)


def _vmul_const(arr: np.ndarray, c: int, ctx: FieldCtx) -> np.ndarray:
    """Table-free vector multiply by a constant; used to build the tables."""
    n = ctx.degree
    acc = np.zeros_like(arr)
    i = 0
    while c:
        if c & 1:
            acc ^= arr << i
        c >>= 1
        i += 1
    for bit in range(2 * n - 2, n - 1, -1):
        hit = (acc >> bit) & 1
        acc ^= hit * (ctx.modulus << (bit - n))
    return acc


def _prime_factors(N: int) -> list[int]:
    from sympy import factorint

    return sorted(factorint(N))


# --- module-level operations -----------------------------------------------

@lru_cache(maxsize=None)
def _make_field(n: int, modulus: int) -> FieldCtx:
    return FieldCtx(n, modulus)


def make_field(n: int) -> FieldCtx:
    """The canonical GF(2^n). Same n gives the same (cached) context.

    If ``$APNFORGE_MODULI`` names a modulus table, its entry for n wins.
    """
    if not isinstance(n, int) or not 1 <= n <= MAX_DEGREE:
        raise FieldError("unsupported degree")
    override = os.environ.get(MODULI_ENV)
    modulus = None
    if override:
        modulus = _moduli_override(override).get(n)
    return _make_field(n, modulus or canonical_modulus(n))


def add(a: int, b: int) -> int:
    return a ^ b


def mul(ctx: FieldCtx, a: int, b: int) -> int:
    return ctx.mul(a, b)


def inv(ctx: FieldCtx, a: int) -> int:
    return ctx.inv(a)


def power(ctx: FieldCtx, a: int, e: int) -> int:
    return ctx.power(a, e)


def frob(ctx: FieldCtx, a: int, k: int) -> int:
    return ctx.frob(a, k)


def rel_norm(ctx3m: FieldCtx, m: int, mu: int) -> int:
    """Relative norm GF(2^3m) -> GF(2^m): mu^(2^2m + 2^m + 1)."""
    if ctx3m.degree % 3 or ctx3m.degree != 3 * m:
        raise FieldError("not a cubic extension")
    return ctx3m.mul(ctx3m.mul(mu, ctx3m.frob(mu, m)), ctx3m.frob(mu, 2 * m))


def eval_gf2_poly(ctx: FieldCtx, g: int, x: int) -> int:
    """Evaluate the bit-encoded GF(2) polynomial g at x (Horner)."""
    r = 0
    for i in range(g.bit_length() - 1, -1, -1):
        r = ctx.mul(r, x) ^ (g >> i & 1)
    return r


def subfield_root(ctx: FieldCtx, g: int, d: int) -> int:
    """Smallest-encoding root of g (degree d over GF(2)) in the subfield GF(2^d)."""
    n = ctx.degree
    if d < 1 or n % d:
        raise FieldError("no such subfield")
    if g.bit_length() - 1 != d:
        raise FieldError("not irreducible of matching degree")
    beta = ctx.power(ctx.generator, ctx.order // ((1 << d) - 1))
    roots = []
    x = 1
    for _ in range((1 << d) - 1):
        if eval_gf2_poly(ctx, g, x) == 0:
            roots.append(x)
        x = ctx.mul(x, beta)
    if eval_gf2_poly(ctx, g, 0) == 0:
        roots.append(0)
    if not roots:
        raise FieldError("not irreducible of matching degree")
    return min(roots)


def solve_exp_eq(ctx: FieldCtx, e: int, c: int) -> int:
    """The unique x with x^e = c, for gcd(e, 2^n - 1) = 1."""
    if math.gcd(e, ctx.order) != 1:
        raise FieldError("exponent not invertible")
    if c == 0:
        raise FieldError("zero has no unit solution")
    if ctx.order == 1:
        return c
    return ctx.power(c, pow(e, -1, ctx.order))
