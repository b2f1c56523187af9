"""GF(2) linear algebra on int bitsets."""

from __future__ import annotations

from typing import Iterable


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank of a set of bit-vectors, pivoting on the lowest set bit."""
    pivots: dict[int, int] = {}
    for v in rows:
        while v:
            low = v & -v
            p = pivots.get(low)
            if p is None:
                pivots[low] = v
                break
            v ^= p
    return len(pivots)


def gf2_nullity(columns: list[int], ncols: int | None = None) -> int:
    """Dimension of the kernel of the map whose images of the basis are ``columns``."""
    n = len(columns) if ncols is None else ncols
    return n - gf2_rank(columns)


__all__ = ["gf2_rank", "gf2_nullity"]
