"""Differential uniformity of function tables and the quadratic APN candidate

    F(x) = (x^(2^(m+s)) + mu x^(2^s) + x)^(2^m + 1) + v x^(2^m + 1)

over GF(2^3m).
"""

from __future__ import annotations

import math
import struct
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .field import FieldCtx, FieldError, make_field, rel_norm
from .linearized import is_permutation, make_f_mu

TABLE_MAGIC = b"APN1"


class FamilyContractError(AssertionError):
    pass


@dataclass(frozen=True)
class FnTable:
    ctx: FieldCtx
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        if len(self.values) != self.ctx.size:
            raise ValueError(f"table length {len(self.values)} != 2^{self.ctx.degree}")
        if len(self.values) and (self.values.min() < 0 or self.values.max() >= self.ctx.size):
            raise ValueError("table entry outside the field")

    @classmethod
    def from_function(cls, ctx: FieldCtx, fn) -> "FnTable":
        return cls(ctx, np.array([fn(x) for x in range(ctx.size)], dtype=np.int64))

    def to_bytes(self) -> bytes:
        header = TABLE_MAGIC + struct.pack("<I", self.ctx.degree) + bytes(8)
        return header + self.values.astype("<u8").tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> "FnTable":
        if len(data) < 16 or data[:4] != TABLE_MAGIC:
            raise ValueError("not an APN1 function table")
        (n,) = struct.unpack("<I", data[4:8])
        if data[8:16] != bytes(8):
            raise ValueError("reserved header bytes must be zero")
        ctx = make_field(n)
        body = np.frombuffer(data[16:], dtype="<u8")
        if len(body) != ctx.size:
            raise ValueError("table body length does not match the header degree")
        return cls(ctx, body.astype(np.int64))

    def save(self, path) -> None:
        with open(path, "wb") as fh:
            fh.write(self.to_bytes())

    @classmethod
    def load(cls, path) -> "FnTable":
        with open(path, "rb") as fh:
            return cls.from_bytes(fh.read())


@dataclass
class DiffSpectrum:
    max_solutions: int
    histogram: dict[int, int]

    @property
    def is_apn(self) -> bool:
        return self.max_solutions == 2


def _spectrum_part(values: np.ndarray, size: int, directions: Sequence[int]) -> Counter:
    xs = np.arange(size, dtype=np.int64)
    hist: Counter = Counter()
    for a in directions:
        counts = np.bincount(values[xs ^ a] ^ values, minlength=size)
        for k, c in enumerate(np.bincount(counts).tolist()):
            if c:
                hist[k] += c
    return hist


def diff_uniformity(f: FnTable, threads: int = 1) -> DiffSpectrum:
    """Count solutions of f(x+a) + f(x) = b for every a != 0 and b."""
    size = f.ctx.size
    directions = list(range(1, size))
    threads = max(1, min(threads, len(directions) or 1))
    chunks = [directions[i::threads] for i in range(threads)]
    if threads == 1:
        parts = [_spectrum_part(f.values, size, directions)]
    else:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda d: _spectrum_part(f.values, size, d), chunks))
    hist: Counter = Counter()
    for p in parts:
        hist.update(p)
    return DiffSpectrum(max(hist) if hist else 0, dict(sorted(hist.items())))


def _check_v(ctx: FieldCtx, m: int, v: int) -> None:
    if v == 0 or ctx.frob(v, m) != v:
        raise FieldError("v not in F_{2^m}^*")


def build_candidate(ctx: FieldCtx, m: int, s: int, mu: int, v: int) -> FnTable:
    """Table of y * y^(2^m) + v * x * x^(2^m) with y = f_mu(x)."""
    _check_v(ctx, m, v)
    y = make_f_mu(ctx, m, s, mu).evaluate_all()
    x = np.arange(ctx.size, dtype=np.int64)
    vals = ctx.vmul(y, ctx.vfrob(y, m)) ^ ctx.vmul(ctx.vmul(x, ctx.vfrob(x, m)), v)
    return FnTable(ctx, vals)


def subfield_units(ctx: FieldCtx, m: int) -> list[int]:
    """The nonzero elements of GF(2^m) inside ctx, ascending."""
    xs = np.arange(1, ctx.size, dtype=np.int64)
    return [int(x) for x in xs[ctx.vfrob(xs, m) == xs]]


def certify_family(ctx: FieldCtx, m: int, s: int, mu: int, vs: Optional[Sequence[int]] = None,
                   seed: int = 0, threads: int = 1) -> dict:
    """Check the hypotheses on (m, s, mu); if they hold, compute delta for each v.

    Default v-sweep: all of GF(2^m)^* when m <= 4, else 8 random values.
    """
    norm = rel_norm(ctx, m, mu)
    hyps = {
        "norm_ne_1": norm != 1,
        "f_mu_permutation": is_permutation(make_f_mu(ctx, m, s, mu)),
        "gcd_s_m_1": math.gcd(s, m) == 1,
    }
    report = {"m": m, "s": s, "mu_hex": f"{mu:x}", "norm_hex": f"{norm:x}",
              "hypotheses": hyps, "delta": {}}
    if not all(hyps.values()):
        report["status"] = "hypotheses-failed"
        return report
    if vs is None:
        units = subfield_units(ctx, m)
        if m <= 4:
            vs = units
        else:
            rng = np.random.default_rng(seed)
            vs = sorted(int(u) for u in rng.choice(units, size=min(8, len(units)), replace=False))
    for v in vs:
        spec = diff_uniformity(build_candidate(ctx, m, s, mu, v), threads=threads)
        report["delta"][f"{v:x}"] = spec.max_solutions
    bad = {v: d for v, d in report["delta"].items() if d != 2}
    report["status"] = "pass" if not bad else "fail"
    if bad:
        err = FamilyContractError(f"family contract violated: delta {bad}")
        err.report = report
        raise err
    return report
