"""Sparse multivariate polynomials over GF(2) or GF(8) and Sylvester resultants."""

from __future__ import annotations

from functools import reduce
from pathlib import Path
from typing import Iterable, Sequence

from .field import FieldCtx, make_field

VAR_NAMES = ("U0", "U1", "U2", "V0", "V1", "V2")


class NotDivisible(ArithmeticError):
    pass


def _grlex_key(e: tuple[int, ...]):
    return (sum(e), e)


class MPoly:
    """Immutable map from exponent tuples to nonzero field elements."""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: FieldCtx, nvars: int, terms: dict | None = None):
        if not 1 <= nvars <= 6:
            raise ValueError("nvars must be between 1 and 6")
        self.field = field
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c}

    # construction

    @classmethod
    def const(cls, field: FieldCtx, nvars: int, c: int) -> "MPoly":
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, field: FieldCtx, nvars: int, i: int) -> "MPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(field, nvars, {tuple(e): 1})

    @classmethod
    def gens(cls, field: FieldCtx, nvars: int = 6) -> list["MPoly"]:
        return [cls.var(field, nvars, i) for i in range(nvars)]

    def zero(self) -> "MPoly":
        return MPoly(self.field, self.nvars)

    def one(self) -> "MPoly":
        return MPoly.const(self.field, self.nvars, 1)

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, int):
            return MPoly.const(self.field, self.nvars, other)
        if other.field != self.field or other.nvars != self.nvars:
            raise ValueError("field mismatch")
        return other

    def lift(self, field: FieldCtx, embed=None) -> "MPoly":
        """Move coefficients into a larger field; ``embed`` maps old to new."""
        if embed is None:
            if self.field.degree != 1:
                raise ValueError("field mismatch")
            embed = lambda c: c  # noqa: E731
        return MPoly(field, self.nvars, {e: embed(c) for e, c in self.terms.items()})

    # ring operations (characteristic 2: subtraction is addition)

    def __add__(self, other) -> "MPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) ^ c
        return MPoly(self.field, self.nvars, out)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self) -> "MPoly":
        return self

    def __mul__(self, other) -> "MPoly":
        other = self._coerce(other)
        mul = self.field.mul
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) ^ mul(c1, c2)
        return MPoly(self.field, self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MPoly":
        if k < 0:
            raise ValueError("negative power")
        result, base = self.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: int) -> "MPoly":
        return MPoly(self.field, self.nvars, {e: self.field.mul(v, c) for e, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = MPoly.const(self.field, self.nvars, other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.field == other.field and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.field, self.nvars, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    # inspection

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[tuple[int, ...], int]:
        return max(self.terms.items(), key=lambda t: _grlex_key(t[0]))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, var: int) -> int:
        return max((e[var] for e in self.terms), default=-1)

    def variables(self) -> set[int]:
        return {i for e in self.terms for i, a in enumerate(e) if a}

    def coeffs_in(self, var: int) -> list["MPoly"]:
        """Coefficients as a polynomial in ``var``, index = power."""
        out = [dict() for _ in range(self.degree(var) + 1)]
        for e, c in self.terms.items():
            k = e[var]
            out[k][e[:var] + (0,) + e[var + 1:]] = c
        return [MPoly(self.field, self.nvars, d) for d in out]

    def __repr__(self) -> str:
        names = VAR_NAMES if self.nvars == 6 else [f"x{i}" for i in range(self.nvars)]
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(f"{names[i]}^{a}" if a > 1 else names[i] for i, a in enumerate(e) if a)
            coeff = "" if c == 1 and mono else f"{c:x}"
            parts.append("*".join(p for p in (coeff, mono) if p))
        return " + ".join(parts)

    # evaluation and substitution

    def evaluate(self, point: Sequence[int]) -> int:
        f = self.field
        r = 0
        for e, c in self.terms.items():
            v = c
            for x, a in zip(point, e):
                if a:
                    v = f.mul(v, f.power(x, a))
            r ^= v
        return r

    def substitute(self, var: int, poly: "MPoly") -> "MPoly":
        """Replace variable ``var`` by ``poly``."""
        subs = [None] * self.nvars
        subs[var] = self._coerce(poly)
        return self.compose(subs)

    def compose(self, subs: Sequence["MPoly | None"]) -> "MPoly":
        """Simultaneous substitution; ``None`` keeps a variable as is."""
        subs = [MPoly.var(self.field, self.nvars, i) if s is None else self._coerce(s)
                for i, s in enumerate(subs)]
        cache: dict[tuple[int, int], MPoly] = {}

        def pw(i: int, a: int) -> MPoly:
            if (i, a) not in cache:
                cache[(i, a)] = subs[i] ** a
            return cache[(i, a)]

        out = self.zero()
        for e, c in self.terms.items():
            term = MPoly.const(self.field, self.nvars, c)
            for i, a in enumerate(e):
                if a:
                    term = term * pw(i, a)
            out = out + term
        return out

    def project(self, keep: Sequence[int]) -> "MPoly":
        """Drop to the listed variables; the others must not occur."""
        if self.variables() - set(keep):
            raise ValueError("polynomial involves dropped variables")
        return MPoly(self.field, len(keep), {tuple(e[i] for i in keep): c for e, c in self.terms.items()})

    def embed_vars(self, nvars: int, positions: Sequence[int]) -> "MPoly":
        out = {}
        for e, c in self.terms.items():
            new = [0] * nvars
            for a, p in zip(e, positions):
                new[p] = a
            out[tuple(new)] = c
        return MPoly(self.field, nvars, out)

    # exact division

    def trial_divide(self, d: "MPoly") -> "MPoly":
        """Exact quotient self / d; raises NotDivisible otherwise."""
        d = self._coerce(d)
        if not d:
            raise ZeroDivisionError("division by zero polynomial")
        ld, lc = d.leading_term()
        lc_inv = self.field.inv(lc)
        rem = MPoly(self.field, self.nvars, self.terms)
        quot: dict = {}
        while rem:
            le, c = rem.leading_term()
            diff = tuple(a - b for a, b in zip(le, ld))
            if min(diff) < 0:
                raise NotDivisible("not divisible")
            coef = self.field.mul(c, lc_inv)
            quot[diff] = quot.get(diff, 0) ^ coef
            rem = rem + MPoly(self.field, self.nvars, {diff: coef}) * d
        return MPoly(self.field, self.nvars, quot)

    # text format: "hex-coeff e0,e1,...,e{nvars-1}" per line

    def to_text(self, header: str | None = None) -> str:
        lines = [f"# {header}"] if header else []
        lines += [f"{c:x} {','.join(map(str, e))}" for e, c in self.sorted_terms()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, field: FieldCtx) -> "MPoly":
        terms: dict = {}
        nvars = None
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            coeff, exps = line.split()
            e = tuple(int(a) for a in exps.split(","))
            if nvars is None:
                nvars = len(e)
            elif len(e) != nvars:
                raise ValueError("inconsistent number of variables")
            c = int(coeff, 16)
            if c >= field.size:
                raise ValueError("coefficient outside the field")
            terms[e] = terms.get(e, 0) ^ c
        if nvars is None:
            raise ValueError("empty polynomial file")
        return cls(field, nvars, terms)

    @classmethod
    def load(cls, path, field: FieldCtx) -> "MPoly":
        return cls.from_text(Path(path).read_text(), field)


def add(p: MPoly, q: MPoly) -> MPoly:
    return p + q


def mul(p: MPoly, q: MPoly) -> MPoly:
    return p * q


def trial_divide(p: MPoly, q: MPoly) -> MPoly:
    return p.trial_divide(q)


def sylvester_matrix(p_coeffs: list, q_coeffs: list, zero) -> list[list]:
    """Sylvester matrix from coefficient lists indexed by power."""
    dp, dq = len(p_coeffs) - 1, len(q_coeffs) - 1
    size = dp + dq
    rows = []
    for shift in range(dq):
        row = [zero] * size
        for k, c in enumerate(reversed(p_coeffs)):
            row[shift + k] = c
        rows.append(row)
    for shift in range(dp):
        row = [zero] * size
        for k, c in enumerate(reversed(q_coeffs)):
            row[shift + k] = c
        rows.append(row)
    return rows


def determinant(matrix: list[list[MPoly]]) -> MPoly:
    """Cofactor expansion along rows, memoised on the remaining column set.

    Characteristic 2, so cofactor signs are dropped.
    """
    size = len(matrix)
    memo: dict[tuple[int, int], MPoly] = {}

    def minor(row: int, cols: int) -> MPoly:
        if row == size:
            return matrix[0][0].one()
        key = (row, cols)
        if key not in memo:
            acc = matrix[0][0].zero()
            for c in range(size):
                if cols >> c & 1 and matrix[row][c]:
                    acc = acc + matrix[row][c] * minor(row + 1, cols & ~(1 << c))
            memo[key] = acc
        return memo[key]

    return minor(0, (1 << size) - 1)


def resultant(p: MPoly, q: MPoly, var: int) -> MPoly:
    """Res_var(p, q) as the determinant of the Sylvester matrix."""
    q = p._coerce(q)
    if p.degree(var) < 1 or q.degree(var) < 1:
        raise ValueError("degenerate resultant")
    return determinant(sylvester_matrix(p.coeffs_in(var), q.coeffs_in(var), p.zero()))


def det_numeric(ctx: FieldCtx, matrix: list[list[int]]) -> int:
    """Determinant over a field of characteristic 2 by Gaussian elimination."""
    a = [row[:] for row in matrix]
    n = len(a)
    det = 1
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return 0
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        det = ctx.mul(det, p)
        pinv = ctx.inv(p)
        for r in range(col + 1, n):
            if a[r][col]:
                f = ctx.mul(a[r][col], pinv)
                a[r] = [x ^ ctx.mul(f, y) for x, y in zip(a[r], a[col])]
    return det


def product(polys: Iterable[MPoly]) -> MPoly:
    return reduce(lambda a, b: a * b, polys)


GF2 = make_field(1)
GF8 = make_field(3)
